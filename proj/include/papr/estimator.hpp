#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "papr/signal.hpp"

namespace papr {

/// Sample PAPR of one block: max(P) / mean(P) with P_k = i_k^2 + q_k^2 and
/// the sample mean as the mean-power plug-in. cf = sqrt(papr_linear).
struct PaprEstimate {
  double papr_linear = 0.0;
  double papr_db = 0.0;
  double cf = 0.0;
};

PaprEstimate estimate_papr(const IqBuffer& b);

/// Low-pass impairment selector: the filter is designed once per run.
struct LowpassParams {
  double cutoff = 0.25;
  int order = 40;
};

struct NoImpairment {};

/// One of the three WGN-assumption violations, or none.
using ImpairmentSpec =
    std::variant<NoImpairment, ImbalanceParams, QuantizerParams, LowpassParams>;

struct MonteCarloConfig {
  std::vector<std::uint64_t> sample_sizes;
  std::uint64_t trials = 10000;
  ImpairmentSpec impairment = NoImpairment{};
  std::uint64_t master_seed = 0;
  double confidence_level = 0.95;
  double sigma = 1.0;
  unsigned threads = 0;  // 0 = PAPR_THREADS env var, else hardware count
};

struct MonteCarloEntry {
  std::uint64_t n = 0;
  // Trial mean taken on the linear scale, then converted; the CI endpoints
  // are the delta-method image of the linear-mean CI. The mean PAPR theory
  // is a linear-scale statement, so this is the pair the comparisons use.
  double mean_papr_db = 0.0;
  double ci_low_db = 0.0;
  double ci_high_db = 0.0;
  // Companion dB-domain average of the per-trial dB values, with its own CI.
  double mean_db_avg = 0.0;
  double ci_db_low = 0.0;
  double ci_db_high = 0.0;
  double sd_db = 0.0;
  double theory_papr_db = 0.0;  // 10 log10 H_n
  std::vector<double> trial_paprs_db;
};

struct MonteCarloResult {
  MonteCarloConfig config;
  std::vector<MonteCarloEntry> entries;
};

/// Runs `trials` independent seeded trials per sample size: generate WGN,
/// apply the impairment, estimate PAPR. Trial t of size index s uses the
/// substream (master_seed, s * trials + t), so results are identical for any
/// thread count.
MonteCarloResult run_monte_carlo(const MonteCarloConfig& cfg);

/// Gaussian-kernel density estimate with Scott's rule bandwidth
/// (sample standard deviation times m^(-1/5)).
struct KdeCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

KdeCurve kde_pdf_db(std::span<const double> samples_db,
                    std::span<const double> grid);

/// 512 evenly spaced points spanning [min - 3 bw, max + 3 bw] of the samples.
std::vector<double> kde_default_grid(std::span<const double> samples_db,
                                     std::size_t points = 512);

/// Two-sided normal-approximation confidence interval for the mean; Student-t
/// quantile below 30 observations.
struct MeanCi {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double sd = 0.0;
  std::size_t count = 0;
};

MeanCi mean_confidence_interval(std::span<const double> values,
                                double confidence_level);

/// One-sample Kolmogorov-Smirnov statistic against a fully specified CDF.
double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf);

/// Asymptotic KS critical value sqrt(-ln(alpha/2)/2) / sqrt(m).
double ks_critical_value(double alpha, std::size_t m);

/// PAPR_THREADS environment variable if set, else the hardware concurrency.
unsigned default_thread_count();

}  // namespace papr
