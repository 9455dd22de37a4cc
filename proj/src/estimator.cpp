#include "papr/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "papr/math.hpp"

namespace papr {
namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::domain_error(message);
}

struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double term) {
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      carry += (sum - t) + term;
    else
      carry += (term - t) + sum;
    sum = t;
  }

  double value() const { return sum + carry; }
};

// Static contiguous split over [0, count); worker exceptions are rethrown on
// the calling thread after join.
void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) body(k);
    return;
  }
  threads = std::min<std::size_t>(threads, count);

  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = count * t / threads;
    const std::size_t end = count * (t + 1) / threads;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t k = begin; k < end; ++k) body(k);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

double sample_mean(std::span<const double> values) {
  CompensatedSum acc;
  for (double v : values) acc.add(v);
  return acc.value() / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values, double mean) {
  CompensatedSum acc;
  for (double v : values) acc.add((v - mean) * (v - mean));
  return std::sqrt(acc.value() / static_cast<double>(values.size() - 1));
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("PAPR_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed >= 1) return static_cast<unsigned>(parsed);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

PaprEstimate estimate_papr(const IqBuffer& b) {
  require(b.size() >= 1, "estimate_papr: empty buffer");
  require(b.i.size() == b.q.size(), "estimate_papr: I/Q length mismatch");

  CompensatedSum total;
  double max_power = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double p = b.i[k] * b.i[k] + b.q[k] * b.q[k];
    if (p > max_power) max_power = p;
    total.add(p);
  }
  if (max_power == 0.0)
    throw std::domain_error("estimate_papr: all-zero buffer, PAPR undefined");

  const double mean_power = total.value() / static_cast<double>(b.size());
  PaprEstimate est;
  est.papr_linear = max_power / mean_power;
  est.papr_db = db_from_power_ratio(est.papr_linear);
  est.cf = std::sqrt(est.papr_linear);
  return est;
}

MeanCi mean_confidence_interval(std::span<const double> values,
                                double confidence_level) {
  require(values.size() >= 2, "mean_confidence_interval: need >= 2 values");
  require(confidence_level > 0.0 && confidence_level < 1.0,
          "mean_confidence_interval: confidence level must lie in (0, 1)");

  MeanCi ci;
  ci.count = values.size();
  ci.mean = sample_mean(values);
  ci.sd = sample_sd(values, ci.mean);

  const double p = 0.5 + confidence_level / 2.0;
  double q;
  if (ci.count < 30) {
    boost::math::students_t_distribution<double> t(
        static_cast<double>(ci.count - 1));
    q = boost::math::quantile(t, p);
  } else {
    boost::math::normal_distribution<double> norm;
    q = boost::math::quantile(norm, p);
  }
  const double half = q * ci.sd / std::sqrt(static_cast<double>(ci.count));
  ci.lo = ci.mean - half;
  ci.hi = ci.mean + half;
  return ci;
}

MonteCarloResult run_monte_carlo(const MonteCarloConfig& cfg) {
  require(!cfg.sample_sizes.empty(),
          "run_monte_carlo: sample_sizes must be nonempty");
  for (std::uint64_t n : cfg.sample_sizes)
    require(n >= 2, "run_monte_carlo: every sample size must be >= 2");
  require(cfg.trials >= 2, "run_monte_carlo: trials must be >= 2");
  require(cfg.sigma > 0.0, "run_monte_carlo: sigma must be > 0");
  require(cfg.confidence_level > 0.0 && cfg.confidence_level < 1.0,
          "run_monte_carlo: confidence level must lie in (0, 1)");

  FirLowPass fir;
  const bool lowpass = std::holds_alternative<LowpassParams>(cfg.impairment);
  if (lowpass) {
    const auto& lp = std::get<LowpassParams>(cfg.impairment);
    fir = design_lowpass(lp.cutoff, lp.order);
  }

  const unsigned threads =
      cfg.threads != 0 ? cfg.threads : default_thread_count();

  MonteCarloResult result;
  result.config = cfg;
  result.entries.reserve(cfg.sample_sizes.size());

  for (std::size_t size_idx = 0; size_idx < cfg.sample_sizes.size();
       ++size_idx) {
    const std::uint64_t n = cfg.sample_sizes[size_idx];
    std::vector<double> papr_linear(cfg.trials);

    parallel_for_index(cfg.trials, threads, [&](std::size_t trial) {
      const std::uint64_t stream = size_idx * cfg.trials + trial;
      const WgnParams wp{cfg.sigma, substream_seed(cfg.master_seed, stream)};
      IqBuffer buf = generate_wgn(n, wp);
      if (const auto* imb = std::get_if<ImbalanceParams>(&cfg.impairment))
        buf = apply_imbalance(buf, *imb);
      else if (const auto* qp = std::get_if<QuantizerParams>(&cfg.impairment))
        buf = apply_quantizer(buf, *qp);
      else if (lowpass)
        buf = filter_trimmed(buf, fir, wp);
      papr_linear[trial] = estimate_papr(buf).papr_linear;
    });

    const MeanCi lin = mean_confidence_interval(papr_linear,
                                                cfg.confidence_level);

    std::vector<double> trial_db(cfg.trials);
    for (std::uint64_t t = 0; t < cfg.trials; ++t)
      trial_db[t] = db_from_power_ratio(papr_linear[t]);
    const MeanCi db = mean_confidence_interval(trial_db, cfg.confidence_level);

    MonteCarloEntry entry;
    entry.n = n;
    entry.mean_papr_db = db_from_power_ratio(lin.mean);
    // Delta-method image of the linear CI half-width; always finite, unlike
    // the log of a (possibly nonpositive) lower endpoint at tiny trial counts.
    const double half_db = (lin.hi - lin.mean) * 10.0 /
                           (std::numbers::ln10 * lin.mean);
    entry.ci_low_db = entry.mean_papr_db - half_db;
    entry.ci_high_db = entry.mean_papr_db + half_db;
    entry.mean_db_avg = db.mean;
    entry.ci_db_low = db.lo;
    entry.ci_db_high = db.hi;
    entry.sd_db = db.sd;
    entry.theory_papr_db = db_from_power_ratio(harmonic_number(n));
    entry.trial_paprs_db = std::move(trial_db);
    result.entries.push_back(std::move(entry));
  }
  return result;
}

std::vector<double> kde_default_grid(std::span<const double> samples_db,
                                     std::size_t points) {
  require(samples_db.size() >= 2, "kde_default_grid: need >= 2 samples");
  require(points >= 2, "kde_default_grid: need >= 2 grid points");
  const double mean = sample_mean(samples_db);
  const double sd = sample_sd(samples_db, mean);
  require(sd > 0.0, "kde_default_grid: samples have zero spread");
  const double bw =
      sd * std::pow(static_cast<double>(samples_db.size()), -0.2);

  const auto [min_it, max_it] =
      std::minmax_element(samples_db.begin(), samples_db.end());
  const double lo = *min_it - 3.0 * bw;
  const double hi = *max_it + 3.0 * bw;
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k)
    grid[k] = lo + (hi - lo) * static_cast<double>(k) /
                       static_cast<double>(points - 1);
  return grid;
}

KdeCurve kde_pdf_db(std::span<const double> samples_db,
                    std::span<const double> grid) {
  require(samples_db.size() >= 2, "kde_pdf_db: need >= 2 samples");
  require(!grid.empty(), "kde_pdf_db: empty grid");
  const double mean = sample_mean(samples_db);
  const double sd = sample_sd(samples_db, mean);
  require(sd > 0.0,
          "kde_pdf_db: samples have zero spread, bandwidth undefined");

  const double m = static_cast<double>(samples_db.size());
  const double bw = sd * std::pow(m, -0.2);  // Scott's rule, univariate
  const double norm = 1.0 / (m * bw * std::sqrt(2.0 * std::numbers::pi));

  KdeCurve curve;
  curve.bandwidth = bw;
  curve.grid.assign(grid.begin(), grid.end());
  curve.density.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double acc = 0.0;
    for (double x : samples_db) {
      const double z = (grid[g] - x) / bw;
      acc += std::exp(-0.5 * z * z);
    }
    curve.density[g] = norm * acc;
  }
  return curve;
}

double ks_statistic(std::span<const double> samples,
                    const std::function<double(double)>& cdf) {
  require(!samples.empty(), "ks_statistic: empty sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double f = cdf(sorted[k]);
    d = std::max(d, f - static_cast<double>(k) / m);
    d = std::max(d, static_cast<double>(k + 1) / m - f);
  }
  return d;
}

double ks_critical_value(double alpha, std::size_t m) {
  require(alpha > 0.0 && alpha < 1.0,
          "ks_critical_value: alpha must lie in (0, 1)");
  require(m >= 1, "ks_critical_value: need >= 1 sample");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) /
         std::sqrt(static_cast<double>(m));
}

}  // namespace papr
