#pragma once

namespace papr {

inline constexpr const char* kToolName = "paprkit";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace papr
