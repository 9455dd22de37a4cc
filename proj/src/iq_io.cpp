#include "papr/iq_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace papr {

static_assert(std::endian::native == std::endian::little,
              "capture bodies are little-endian; this build targets LE hosts");
static_assert(sizeof(float) == 4, "capture bodies use 32-bit floats");

namespace {

void validate_capture(const IqCapture& c) {
  if (c.samples.empty())
    throw std::invalid_argument("capture must hold at least one sample");
  if (!(c.sample_rate_hz > 0.0))
    throw std::invalid_argument("capture sample_rate_hz must be > 0");
  if (!(c.center_frequency_hz >= 0.0))
    throw std::invalid_argument("capture center_frequency_hz must be >= 0");
  for (const auto& s : c.samples)
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
      throw std::invalid_argument("capture samples must be finite");
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".json");
}

void write_csv_rows(std::ostream& out, const ResultDocument& doc) {
  const nlohmann::json& payload = doc.payload;
  const auto cell = [](const nlohmann::json& v) -> std::string {
    if (v.is_null()) return "";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return v.get<std::string>();
    throw ResultFormatError("csv: unsupported cell type");
  };

  switch (doc.kind) {
    case ResultKind::monte_carlo: {
      out << "n,mean_papr_db,ci_low_db,ci_high_db,theory_db\n";
      for (const auto& row : payload.at("curve"))
        out << cell(row.at("n")) << ',' << cell(row.at("mean_papr_db")) << ','
            << cell(row.at("ci_low_db")) << ',' << cell(row.at("ci_high_db"))
            << ',' << cell(row.at("theory_papr_db")) << '\n';
      return;
    }
    case ResultKind::kde: {
      out << "papr_db,density_per_db\n";
      for (const auto& row : payload.at("points"))
        out << cell(row.at("papr_db")) << ',' << cell(row.at("density"))
            << '\n';
      return;
    }
    case ResultKind::band_report: {
      out << "freq_hz,papr_db\n";
      for (const auto& row : payload.at("bins"))
        out << cell(row.at("freq_hz")) << ',' << cell(row.at("papr_db"))
            << '\n';
      return;
    }
    case ResultKind::stats_table: {
      const auto& columns = payload.at("columns");
      for (std::size_t k = 0; k < columns.size(); ++k)
        out << (k ? "," : "") << columns[k].get<std::string>();
      out << '\n';
      for (const auto& row : payload.at("rows")) {
        for (std::size_t k = 0; k < columns.size(); ++k) {
          const std::string name = columns[k].get<std::string>();
          out << (k ? "," : "")
              << (row.contains(name) ? cell(row.at(name)) : "");
        }
        out << '\n';
      }
      return;
    }
    case ResultKind::spectrogram:
      throw ResultFormatError(
          "csv: spectrogram documents are matrices, use json");
  }
  throw ResultFormatError("csv: unknown document kind");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string to_string(ResultKind kind) {
  switch (kind) {
    case ResultKind::monte_carlo: return "monte_carlo";
    case ResultKind::kde: return "kde";
    case ResultKind::spectrogram: return "spectrogram";
    case ResultKind::band_report: return "band_report";
    case ResultKind::stats_table: return "stats_table";
  }
  throw std::invalid_argument("unknown ResultKind");
}

ResultKind result_kind_from_string(const std::string& s) {
  if (s == "monte_carlo") return ResultKind::monte_carlo;
  if (s == "kde") return ResultKind::kde;
  if (s == "spectrogram") return ResultKind::spectrogram;
  if (s == "band_report") return ResultKind::band_report;
  if (s == "stats_table") return ResultKind::stats_table;
  throw ResultFormatError("unknown result kind: " + s);
}

IqCapture make_capture(const IqBuffer& b, double sample_rate_hz,
                       double center_frequency_hz, std::string label) {
  IqCapture c;
  c.samples.reserve(b.size());
  for (std::size_t k = 0; k < b.size(); ++k)
    c.samples.emplace_back(b.i[k], b.q[k]);
  c.sample_rate_hz = sample_rate_hz;
  c.center_frequency_hz = center_frequency_hz;
  c.label = std::move(label);
  validate_capture(c);
  return c;
}

void write_capture(const IqCapture& capture,
                   const std::filesystem::path& path) {
  validate_capture(capture);

  std::ofstream body(path, std::ios::binary | std::ios::trunc);
  if (!body)
    throw std::runtime_error("write_capture: cannot open " + path.string());
  std::vector<float> interleaved;
  interleaved.reserve(2 * capture.samples.size());
  for (const auto& s : capture.samples) {
    interleaved.push_back(static_cast<float>(s.real()));
    interleaved.push_back(static_cast<float>(s.imag()));
  }
  body.write(reinterpret_cast<const char*>(interleaved.data()),
             static_cast<std::streamsize>(interleaved.size() * sizeof(float)));
  if (!body)
    throw std::runtime_error("write_capture: short write to " + path.string());
  body.close();

  nlohmann::json meta;
  meta["sample_rate_hz"] = capture.sample_rate_hz;
  meta["center_frequency_hz"] = capture.center_frequency_hz;
  meta["label"] = capture.label;
  meta["num_samples"] = capture.samples.size();
  std::ofstream side(sidecar_path(path), std::ios::trunc);
  if (!side)
    throw std::runtime_error("write_capture: cannot open sidecar for " +
                             path.string());
  side << meta.dump(2) << '\n';
}

IqCapture read_capture(const std::filesystem::path& path) {
  const auto side = sidecar_path(path);
  if (!std::filesystem::exists(side))
    throw CaptureMetadataError("read_capture: missing sidecar " +
                               side.string());
  nlohmann::json meta;
  {
    std::ifstream in(side);
    try {
      in >> meta;
    } catch (const nlohmann::json::exception& e) {
      throw CaptureMetadataError("read_capture: unparsable sidecar " +
                                 side.string() + ": " + e.what());
    }
  }
  if (!meta.contains("sample_rate_hz") ||
      !meta.contains("center_frequency_hz") || !meta.contains("label") ||
      !meta.contains("num_samples"))
    throw CaptureMetadataError("read_capture: sidecar missing required keys");

  std::ifstream body(path, std::ios::binary | std::ios::ate);
  if (!body)
    throw CaptureCorruptionError("read_capture: cannot open " + path.string());
  const auto bytes = static_cast<std::uint64_t>(body.tellg());
  if (bytes % sizeof(float) != 0)
    throw CaptureCorruptionError("read_capture: body is not a whole number "
                                 "of 32-bit floats");
  const std::uint64_t float_count = bytes / sizeof(float);
  if (float_count % 2 != 0)
    throw CaptureCorruptionError(
        "read_capture: odd float count, truncated I/Q pair");

  const std::uint64_t num_samples = float_count / 2;
  if (meta.at("num_samples").get<std::uint64_t>() != num_samples)
    throw CaptureMetadataError(
        "read_capture: sidecar num_samples does not match body length");

  std::vector<float> interleaved(float_count);
  body.seekg(0);
  body.read(reinterpret_cast<char*>(interleaved.data()),
            static_cast<std::streamsize>(bytes));
  if (!body)
    throw CaptureCorruptionError("read_capture: short read from " +
                                 path.string());

  IqCapture c;
  c.samples.reserve(num_samples);
  for (std::uint64_t k = 0; k < num_samples; ++k)
    c.samples.emplace_back(static_cast<double>(interleaved[2 * k]),
                           static_cast<double>(interleaved[2 * k + 1]));
  c.sample_rate_hz = meta.at("sample_rate_hz").get<double>();
  c.center_frequency_hz = meta.at("center_frequency_hz").get<double>();
  c.label = meta.at("label").get<std::string>();
  validate_capture(c);
  return c;
}

void write_result(const ResultDocument& doc, const std::filesystem::path& path,
                  ResultFormat format) {
  std::ostringstream out;
  if (format == ResultFormat::json) {
    nlohmann::json j;
    j["schema_version"] = doc.schema_version;
    j["kind"] = to_string(doc.kind);
    j["payload"] = doc.payload;
    j["provenance"] = doc.provenance;
    out << j.dump(2) << '\n';
  } else {
    write_csv_rows(out, doc);
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw std::runtime_error("write_result: cannot open " + path.string());
  const std::string text = out.str();
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
}

ResultDocument read_result(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("read_result: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ResultFormatError("read_result: unparsable json: " +
                            std::string(e.what()));
  }
  ResultDocument doc;
  doc.schema_version = j.at("schema_version").get<int>();
  doc.kind = result_kind_from_string(j.at("kind").get<std::string>());
  doc.payload = j.at("payload");
  doc.provenance = j.at("provenance");
  return doc;
}

}  // namespace papr
