#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "papr/signal.hpp"

namespace papr {

/// A recorded (or synthesized) I/Q capture with acquisition metadata.
/// On disk: interleaved little-endian 32-bit floats (I0, Q0, I1, Q1, ...)
/// plus a JSON sidecar at `<path>.json` holding the metadata.
struct IqCapture {
  std::vector<std::complex<double>> samples;
  double sample_rate_hz = 0.0;
  double center_frequency_hz = 0.0;
  std::string label;
};

/// Body damage: unreadable file, partial float, odd float count.
class CaptureCorruptionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sidecar damage: missing, unparsable, or inconsistent with the body.
class CaptureMetadataError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unsupported serialization request (e.g. CSV of a non-tabular document).
class ResultFormatError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

IqCapture read_capture(const std::filesystem::path& path);
void write_capture(const IqCapture& capture, const std::filesystem::path& path);

/// Pairs an IqBuffer with capture metadata.
IqCapture make_capture(const IqBuffer& b, double sample_rate_hz,
                       double center_frequency_hz, std::string label);

enum class ResultKind { monte_carlo, kde, spectrogram, band_report, stats_table };

std::string to_string(ResultKind kind);
ResultKind result_kind_from_string(const std::string& s);

/// Envelope for every analysis artifact this tool emits. The provenance block
/// carries seed, configuration, and tool version, enough to re-run.
struct ResultDocument {
  int schema_version = 1;
  ResultKind kind = ResultKind::stats_table;
  nlohmann::json payload;
  nlohmann::json provenance;
};

enum class ResultFormat { json, csv };

/// JSON is the canonical lossless form. CSV is available for the tabular
/// kinds only (monte_carlo, kde, band_report, stats_table) and emits
/// plot-ready rows. Writes are deterministic byte streams.
void write_result(const ResultDocument& doc, const std::filesystem::path& path,
                  ResultFormat format);

/// Reads back a JSON document written by write_result.
ResultDocument read_result(const std::filesystem::path& path);

/// Fixed 17-significant-digit formatting used for CSV cells.
std::string format_double(double v);

}  // namespace papr
