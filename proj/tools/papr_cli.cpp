// paprkit command-line tool: closed-form PAPR/CF statistics tables, Monte
// Carlo experiments under WGN-assumption violations, spectrogram analysis of
// I/Q captures, and thermal-noise band verification.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "papr/documents.hpp"
#include "papr/estimator.hpp"
#include "papr/iq_io.hpp"
#include "papr/math.hpp"
#include "papr/spectro.hpp"
#include "papr/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconsistent = 2;

papr::ResultFormat parse_format(const std::string& s) {
  if (s == "json") return papr::ResultFormat::json;
  if (s == "csv") return papr::ResultFormat::csv;
  throw CLI::ValidationError("--format", "expected 'json' or 'csv'");
}

std::vector<std::uint64_t> parse_n_list(const std::string& csv) {
  std::vector<std::uint64_t> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = std::stod(item);
    if (v < 1.0 || v != std::floor(v))
      throw CLI::ValidationError("--n", "sample sizes must be integers >= 1");
    values.push_back(static_cast<std::uint64_t>(v));
  }
  if (values.empty()) throw CLI::ValidationError("--n", "empty list");
  return values;
}

std::vector<std::uint64_t> parse_n_range(const std::string& spec) {
  // lo:hi:steps, log-spaced inclusive, rounded to integers and deduplicated.
  double lo = 0.0, hi = 0.0;
  int steps = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &steps) != 3 ||
      lo < 1.0 || hi < lo || steps < 2)
    throw CLI::ValidationError("--n-range", "expected lo:hi:steps with hi >= "
                                            "lo >= 1 and steps >= 2");
  std::set<std::uint64_t> values;
  for (int k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) / (steps - 1);
    const double v = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
    values.insert(static_cast<std::uint64_t>(std::llround(v)));
  }
  return {values.begin(), values.end()};
}

papr::ImpairmentSpec parse_impairment(const std::string& spec) {
  if (spec == "none" || spec.empty()) return papr::NoImpairment{};
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  double a = 0.0, b = 0.0;
  if (std::sscanf(args.c_str(), "%lf,%lf", &a, &b) != 2)
    throw CLI::ValidationError(
        "--impairment",
        "expected none | imbalance:dg,dphi | quantize:bits,ref | lowpass:fc,order");
  if (kind == "imbalance") return papr::ImbalanceParams{a, b};
  if (kind == "quantize") {
    if (b <= 0.0 || a != std::floor(a))
      throw CLI::ValidationError("--impairment",
                                 "quantize needs integer bits and ref > 0");
    return papr::QuantizerParams{static_cast<int>(a), b};
  }
  if (kind == "lowpass") {
    if (b != std::floor(b))
      throw CLI::ValidationError("--impairment", "lowpass order must be integer");
    return papr::LowpassParams{a, static_cast<int>(b)};
  }
  throw CLI::ValidationError("--impairment", "unknown impairment '" + kind + "'");
}

papr::WindowKind parse_window(const std::string& s) {
  if (s == "hann") return papr::WindowKind::hann;
  if (s == "hamming") return papr::WindowKind::hamming;
  if (s == "blackman") return papr::WindowKind::blackman;
  throw CLI::ValidationError("--window", "expected hann, hamming or blackman");
}

papr::DetrendMode parse_detrend(const std::string& s) {
  if (s == "constant") return papr::DetrendMode::constant;
  if (s == "none") return papr::DetrendMode::none;
  throw CLI::ValidationError("--detrend", "expected constant or none");
}

std::filesystem::path with_suffix(const std::filesystem::path& path,
                                  const std::string& suffix) {
  std::filesystem::path p = path;
  const std::string ext = p.extension().string();
  p.replace_extension();
  return std::filesystem::path(p.string() + suffix + ext);
}

// ---------------------------------------------------------------------------

struct StatsOptions {
  std::string n_list;
  std::string n_range;
  std::vector<double> quantiles;
  bool rel_err = false;
  std::string out;
  std::string format = "json";
};

int run_stats(const StatsOptions& opt) {
  std::vector<std::uint64_t> sizes;
  if (!opt.n_list.empty()) {
    auto v = parse_n_list(opt.n_list);
    sizes.insert(sizes.end(), v.begin(), v.end());
  }
  if (!opt.n_range.empty()) {
    auto v = parse_n_range(opt.n_range);
    sizes.insert(sizes.end(), v.begin(), v.end());
  }
  if (sizes.empty())
    throw CLI::ValidationError("stats", "provide --n and/or --n-range");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (double p : opt.quantiles)
    if (p < 0.0 || p >= 1.0)
      throw CLI::ValidationError("--quantiles", "probabilities must lie in [0, 1)");

  nlohmann::json columns = nlohmann::json::array(
      {"n", "mean_papr", "theory_papr_db", "mean_papr_gumbel", "mean_cf",
       "mean_cf_gumbel", "mean_cf_bound", "mean_cf_sum", "dunsmore_mean_papr",
       "keysight_mean_papr"});
  if (opt.rel_err) {
    for (const char* c :
         {"err_dunsmore_db", "err_keysight_db", "rel_err_dunsmore_pct",
          "rel_err_keysight_pct", "rel_err_cf_gumbel_pct",
          "rel_err_cf_bound_pct"})
      columns.push_back(c);
  }
  for (double p : opt.quantiles) {
    columns.push_back("papr_quantile_" + papr::format_double(p));
    columns.push_back("cf_quantile_" + papr::format_double(p));
  }

  nlohmann::json rows = nlohmann::json::array();
  for (std::uint64_t n : sizes) {
    const papr::PaprModel m{n};
    const double hn = papr::mean_papr(m);
    const double cf_exact = papr::mean_cf_integral(m);

    nlohmann::json row;
    row["n"] = n;
    row["mean_papr"] = hn;
    row["theory_papr_db"] = papr::db_from_power_ratio(hn);
    row["mean_papr_gumbel"] =
        n >= 2 ? nlohmann::json(papr::mean_papr_gumbel(m)) : nlohmann::json();
    row["mean_cf"] = cf_exact;
    row["mean_cf_gumbel"] =
        n >= 2 ? nlohmann::json(papr::mean_cf_gumbel(m)) : nlohmann::json();
    row["mean_cf_bound"] = papr::mean_cf_bound(m);
    row["mean_cf_sum"] =
        n <= 50 ? nlohmann::json(papr::mean_cf_sum(m)) : nlohmann::json();
    row["dunsmore_mean_papr"] =
        n >= 2 ? nlohmann::json(papr::prior_mean_papr_dunsmore(m))
               : nlohmann::json();
    row["keysight_mean_papr"] = papr::prior_mean_papr_keysight(m);

    if (opt.rel_err) {
      const double keysight = papr::prior_mean_papr_keysight(m);
      row["err_keysight_db"] = papr::db_from_power_ratio(keysight / hn);
      row["rel_err_keysight_pct"] = (keysight - hn) / hn * 100.0;
      if (n >= 2) {
        const double dunsmore = papr::prior_mean_papr_dunsmore(m);
        const double cf_gumbel = papr::mean_cf_gumbel(m);
        row["err_dunsmore_db"] = papr::db_from_power_ratio(dunsmore / hn);
        row["rel_err_dunsmore_pct"] = (dunsmore - hn) / hn * 100.0;
        row["rel_err_cf_gumbel_pct"] = (cf_gumbel - cf_exact) / cf_exact * 100.0;
      }
      row["rel_err_cf_bound_pct"] =
          (papr::mean_cf_bound(m) - cf_exact) / cf_exact * 100.0;
    }
    for (double p : opt.quantiles) {
      row["papr_quantile_" + papr::format_double(p)] = papr::papr_quantile(p, m);
      row["cf_quantile_" + papr::format_double(p)] = papr::cf_quantile(p, m);
    }
    rows.push_back(std::move(row));

    std::printf("n=%-10llu  H_n=%-12.6f  mean PAPR=%.4f dB  mean CF=%.6f\n",
                static_cast<unsigned long long>(n), hn,
                papr::db_from_power_ratio(hn), cf_exact);
  }

  if (!opt.out.empty()) {
    nlohmann::json config;
    config["subcommand"] = "stats";
    config["n"] = sizes;
    config["quantiles"] = opt.quantiles;
    config["rel_err"] = opt.rel_err;
    const auto doc = papr::make_stats_table_document(
        std::move(columns), std::move(rows), papr::make_provenance(config));
    papr::write_result(doc, opt.out, parse_format(opt.format));
    std::printf("wrote %s\n", opt.out.c_str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimOptions {
  std::string sizes;
  std::uint64_t trials = 10000;
  std::string impairment = "none";
  std::uint64_t seed = 0;
  double confidence = 0.95;
  bool kde = false;
  std::string out;
  std::string format = "json";
};

int run_sim(const SimOptions& opt) {
  papr::MonteCarloConfig cfg;
  cfg.sample_sizes = parse_n_list(opt.sizes);
  cfg.trials = opt.trials;
  cfg.impairment = parse_impairment(opt.impairment);
  cfg.master_seed = opt.seed;
  cfg.confidence_level = opt.confidence;

  const papr::MonteCarloResult result = papr::run_monte_carlo(cfg);
  for (const auto& e : result.entries)
    std::printf(
        "n=%-8llu mean PAPR %.4f dB  CI [%.4f, %.4f]  theory %.4f dB  "
        "delta %+.4f dB\n",
        static_cast<unsigned long long>(e.n), e.mean_papr_db, e.ci_low_db,
        e.ci_high_db, e.theory_papr_db, e.mean_papr_db - e.theory_papr_db);

  nlohmann::json config;
  config["subcommand"] = "sim";
  config["sizes"] = cfg.sample_sizes;
  config["trials"] = cfg.trials;
  config["impairment"] = papr::impairment_to_json(cfg.impairment);
  config["seed"] = cfg.master_seed;
  config["confidence"] = cfg.confidence_level;

  if (!opt.out.empty()) {
    const auto doc = papr::make_monte_carlo_document(
        result, papr::make_provenance(config));
    papr::write_result(doc, opt.out, parse_format(opt.format));
    std::printf("wrote %s\n", opt.out.c_str());

    if (opt.kde) {
      for (const auto& e : result.entries) {
        const auto grid = papr::kde_default_grid(e.trial_paprs_db);
        const auto curve = papr::kde_pdf_db(e.trial_paprs_db, grid);
        const auto kde_doc = papr::make_kde_document(
            curve, e.n, papr::make_provenance(config));
        const auto kde_path =
            with_suffix(opt.out, "_kde_n" + std::to_string(e.n));
        papr::write_result(kde_doc, kde_path, parse_format(opt.format));
        std::printf("wrote %s\n", kde_path.c_str());
      }
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SpectroOptions {
  std::string in;
  std::string window = "hann";
  std::size_t length = 512;
  double overlap = 0.5;
  std::string detrend = "constant";
  std::size_t fft_length = 0;
  double confidence = 0.95;
  std::string band;
  std::string out;
  std::string papr_out;
  std::string format = "json";
};

papr::SpectrogramConfig spectro_config(const SpectroOptions& opt) {
  papr::SpectrogramConfig cfg;
  cfg.window = parse_window(opt.window);
  cfg.window_length = opt.length;
  cfg.overlap_fraction = opt.overlap;
  cfg.detrend = parse_detrend(opt.detrend);
  cfg.fft_length = opt.fft_length;
  return cfg;
}

nlohmann::json spectro_provenance_config(const SpectroOptions& opt,
                                         const char* subcommand) {
  nlohmann::json config;
  config["subcommand"] = subcommand;
  config["in"] = opt.in;
  config["window"] = opt.window;
  config["length"] = opt.length;
  config["overlap"] = opt.overlap;
  config["detrend"] = opt.detrend;
  config["fft_length"] = opt.fft_length;
  config["confidence"] = opt.confidence;
  if (!opt.band.empty()) config["band"] = opt.band;
  return config;
}

int run_spectro(const SpectroOptions& opt) {
  const papr::IqCapture capture = papr::read_capture(opt.in);
  const papr::Spectrogram s = compute_spectrogram(capture, spectro_config(opt));

  const double theory_db = papr::db_from_power_ratio(
      papr::harmonic_number(s.time_bins));
  std::printf("%zu freq bins x %zu time bins, thermal-noise PAPR %.4f dB\n",
              s.freq_bins, s.time_bins, theory_db);

  const auto config = spectro_provenance_config(opt, "spectro");
  if (!opt.out.empty()) {
    // The spectrogram matrix has no tabular form; --format applies to the
    // per-bin PAPR document.
    papr::write_result(make_spectrogram_document(s, papr::make_provenance(config)),
                       opt.out, papr::ResultFormat::json);
    std::printf("wrote %s\n", opt.out.c_str());
  }
  if (!opt.papr_out.empty()) {
    const papr::BandReport full = papr::verify_band(
        s, s.freq_axis_hz.front(), s.freq_axis_hz.back(), opt.confidence);
    papr::write_result(
        make_band_report_document(full, papr::make_provenance(config)),
        opt.papr_out, parse_format(opt.format));
    std::printf("full-span mean PAPR %.4f dB (theory %.4f dB), wrote %s\n",
                full.band_mean_papr_db, full.theory_papr_db,
                opt.papr_out.c_str());
  }
  return kExitOk;
}

int run_verify(const SpectroOptions& opt) {
  double f_low = 0.0, f_high = 0.0;
  if (std::sscanf(opt.band.c_str(), "%lf:%lf", &f_low, &f_high) != 2 ||
      f_low >= f_high)
    throw CLI::ValidationError("--band", "expected f_low:f_high in Hz");

  const papr::IqCapture capture = papr::read_capture(opt.in);
  const double nyquist_lo =
      capture.center_frequency_hz - capture.sample_rate_hz / 2.0;
  const double nyquist_hi =
      capture.center_frequency_hz + capture.sample_rate_hz / 2.0;
  if (f_low < nyquist_lo || f_high > nyquist_hi)
    throw CLI::ValidationError(
        "--band", "band lies outside the capture span [" +
                      std::to_string(nyquist_lo) + ", " +
                      std::to_string(nyquist_hi) + "] Hz");

  const papr::Spectrogram s = compute_spectrogram(capture, spectro_config(opt));
  const papr::BandReport report =
      papr::verify_band(s, f_low, f_high, opt.confidence);

  const bool consistent = report.verdict == papr::BandVerdict::consistent_with_wgn;
  std::printf(
      "band [%.6g, %.6g] Hz: mean PAPR %.4f dB, CI [%.4f, %.4f] dB, theory "
      "%.4f dB, excess %+.4f dB -> %s\n",
      f_low, f_high, report.band_mean_papr_db, report.ci_low_db,
      report.ci_high_db, report.theory_papr_db, report.excess_db,
      consistent ? "consistent_with_wgn" : "inconsistent");

  if (!opt.out.empty()) {
    const auto config = spectro_provenance_config(opt, "verify");
    papr::write_result(
        make_band_report_document(report, papr::make_provenance(config)),
        opt.out, parse_format(opt.format));
    std::printf("wrote %s\n", opt.out.c_str());
  }
  return consistent ? kExitOk : kExitInconsistent;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PAPR/crest-factor statistics for sampled I/Q white Gaussian "
               "noise: closed-form tables, Monte Carlo experiments, "
               "spectrogram analysis, and thermal-noise band verification"};
  app.set_version_flag("--version", papr::kToolVersion);
  app.require_subcommand(1);

  StatsOptions stats;
  auto* stats_cmd = app.add_subcommand(
      "stats", "Closed-form mean PAPR/CF statistics per sample size");
  stats_cmd->add_option("--n", stats.n_list, "Comma-separated sample sizes");
  stats_cmd->add_option("--n-range", stats.n_range,
                        "Log-spaced sizes lo:hi:steps");
  stats_cmd->add_option("--quantiles", stats.quantiles,
                        "PAPR/CF quantile probabilities in [0, 1)")
      ->delimiter(',');
  stats_cmd->add_flag("--rel-err", stats.rel_err,
                      "Add error columns for the approximate formulas");
  stats_cmd->add_option("--out", stats.out, "Output document path");
  stats_cmd->add_option("--format", stats.format, "json or csv")
      ->capture_default_str();

  SimOptions sim;
  auto* sim_cmd = app.add_subcommand(
      "sim", "Monte Carlo mean-PAPR experiment with optional impairment");
  sim_cmd->add_option("--sizes", sim.sizes, "Comma-separated sample sizes")
      ->required();
  sim_cmd->add_option("--trials", sim.trials, "Trials per sample size")
      ->capture_default_str();
  sim_cmd->add_option(
      "--impairment", sim.impairment,
      "none | imbalance:dg,dphi | quantize:bits,ref | lowpass:fc,order")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  sim_cmd->add_option("--confidence", sim.confidence, "Confidence level")
      ->capture_default_str();
  sim_cmd->add_flag("--kde", sim.kde,
                    "Also write a KDE of the per-trial PAPR values per size");
  sim_cmd->add_option("--out", sim.out, "Output document path");
  sim_cmd->add_option("--format", sim.format, "json or csv")
      ->capture_default_str();

  SpectroOptions spectro;
  auto* spectro_cmd = app.add_subcommand(
      "spectro", "Spectrogram and per-bin PAPR of an I/Q capture");
  auto add_spectro_flags = [](CLI::App* cmd, SpectroOptions& o) {
    cmd->add_option("--in", o.in, "Capture path")->required();
    cmd->add_option("--window", o.window, "hann, hamming or blackman")
        ->capture_default_str();
    cmd->add_option("--length", o.length, "Window length in samples")
        ->capture_default_str();
    cmd->add_option("--overlap", o.overlap, "Window overlap fraction")
        ->capture_default_str();
    cmd->add_option("--detrend", o.detrend, "constant or none")
        ->capture_default_str();
    cmd->add_option("--fft-length", o.fft_length,
                    "FFT length (0 = window length)")
        ->capture_default_str();
    cmd->add_option("--confidence", o.confidence, "Confidence level")
        ->capture_default_str();
    cmd->add_option("--format", o.format, "json or csv")->capture_default_str();
  };
  add_spectro_flags(spectro_cmd, spectro);
  spectro_cmd->add_option("--out", spectro.out, "Spectrogram document path");
  spectro_cmd->add_option("--papr-out", spectro.papr_out,
                          "Per-bin PAPR document path");

  SpectroOptions verify;
  auto* verify_cmd = app.add_subcommand(
      "verify", "Check whether a band holds only thermal noise (exit 0 "
                "consistent, 2 inconsistent, 1 error)");
  add_spectro_flags(verify_cmd, verify);
  verify_cmd->add_option("--band", verify.band, "Band f_low:f_high in Hz")
      ->required();
  verify_cmd->add_option("--out", verify.out, "Band report document path");

  try {
    app.parse(argc, argv);
    if (*stats_cmd) return run_stats(stats);
    if (*sim_cmd) return run_sim(sim);
    if (*spectro_cmd) return run_spectro(spectro);
    if (*verify_cmd) return run_verify(verify);
    return kExitError;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
