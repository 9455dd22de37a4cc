#include "papr/math.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace papr {
namespace {

constexpr std::uint64_t kHarmonicDirectLimit = 1000000;

void require(bool condition, const char* message) {
  if (!condition) throw std::domain_error(message);
}

// Neumaier-compensated running sum.
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

// ln(1 - e^-x) for x > 0, full precision on both sides of x = ln 2: below it
// 1 - e^-x suffers cancellation, above it the log1p form is the stable one.
double log_one_minus_exp_neg(double x) {
  if (x < std::numbers::ln2) return std::log(-std::expm1(-x));
  return std::log1p(-std::exp(-x));
}

// k^(-1/2) in quad precision: double seed plus two Newton refinements of
// r <- r (3 - k r^2) / 2, which squares the accuracy per step.
__float128 inv_sqrt_q(int k) {
  const __float128 kq = k;
  __float128 r = 1.0 / std::sqrt(static_cast<double>(k));
  r = r * (__float128(3) - kq * r * r) / __float128(2);
  r = r * (__float128(3) - kq * r * r) / __float128(2);
  return r;
}

}  // namespace

double harmonic_number(std::uint64_t k) {
  if (k == 0) return 0.0;
  if (k <= kHarmonicDirectLimit) {
    CompensatedSum acc;
    for (std::uint64_t j = k; j >= 1; --j) acc.add(1.0 / static_cast<double>(j));
    return acc.value();
  }
  const double n = static_cast<double>(k);
  const double inv = 1.0 / n;
  const double inv2 = inv * inv;
  return std::log(n) + kEulerGamma + 0.5 * inv - inv2 / 12.0 +
         inv2 * inv2 / 120.0;
}

double db_from_power_ratio(double ratio) { return 10.0 * std::log10(ratio); }

double power_ratio_from_db(double db) { return std::pow(10.0, db / 10.0); }

double papr_cdf(double x, PaprModel m) {
  require(m.n >= 1, "papr_cdf: n must be >= 1");
  require(x >= 0.0, "papr_cdf: x must be >= 0");
  if (x == 0.0) return 0.0;
  // (1 - e^-x)^n evaluated in log space to stay accurate for large n.
  return std::exp(static_cast<double>(m.n) * log_one_minus_exp_neg(x));
}

double cf_cdf(double x, PaprModel m) {
  require(x >= 0.0, "cf_cdf: x must be >= 0");
  return papr_cdf(x * x, m);
}

double papr_quantile(double p, PaprModel m) {
  require(m.n >= 1, "papr_quantile: n must be >= 1");
  require(p >= 0.0 && p < 1.0, "papr_quantile: p must lie in [0, 1)");
  if (p == 0.0) return 0.0;
  // -ln(1 - p^(1/n)), branched on p^(1/n) vs 1/2 so neither forming
  // 1 - p^(1/n) nor the final log suffers cancellation.
  const double t = std::log(p) / static_cast<double>(m.n);  // ln of p^(1/n)
  if (t < -std::numbers::ln2) return -std::log1p(-std::exp(t));
  return -std::log(-std::expm1(t));
}

double cf_quantile(double p, PaprModel m) {
  return std::sqrt(papr_quantile(p, m));
}

double papr_pdf(double x, PaprModel m) {
  require(m.n >= 1, "papr_pdf: n must be >= 1");
  require(x >= 0.0, "papr_pdf: x must be >= 0");
  const double n = static_cast<double>(m.n);
  if (m.n == 1) return std::exp(-x);
  if (x == 0.0) return 0.0;
  return std::exp(std::log(n) - x + (n - 1.0) * log_one_minus_exp_neg(x));
}

double papr_pdf_db(double y_db, PaprModel m) {
  require(m.n >= 1, "papr_pdf_db: n must be >= 1");
  const double n = static_cast<double>(m.n);
  const double z = std::pow(10.0, y_db / 10.0);  // linear-scale PAPR
  if (z == 0.0 || std::isinf(z)) return 0.0;     // density vanishes in the tails
  double log_f = std::log(n * std::numbers::ln10 / 10.0) +
                 (y_db / 10.0) * std::numbers::ln10 - z;
  if (m.n > 1) log_f += (n - 1.0) * log_one_minus_exp_neg(z);
  return std::exp(log_f);
}

double papr_cdf_asymptotic(double x, PaprModel m) {
  require(m.n >= 2, "papr_cdf_asymptotic: n must be >= 2");
  return std::exp(-std::exp(-(x - std::log(static_cast<double>(m.n)))));
}

double cf_cdf_asymptotic(double x, PaprModel m) {
  require(m.n >= 2, "cf_cdf_asymptotic: n must be >= 2");
  const double root_log_n = std::sqrt(std::log(static_cast<double>(m.n)));
  return std::exp(-std::exp(-(x - root_log_n) * 2.0 * root_log_n));
}

double mean_order_statistic_power(std::uint64_t r, PaprModel m) {
  require(m.n >= 1, "mean_order_statistic_power: n must be >= 1");
  require(r >= 1 && r <= m.n,
          "mean_order_statistic_power: r must lie in [1, n]");
  // Tail sum over at most r terms; for large r fall back to a difference of
  // harmonic numbers, which shares the accuracy of harmonic_number().
  if (r <= 1000) {
    CompensatedSum acc;
    for (std::uint64_t k = m.n; k > m.n - r; --k)
      acc.add(1.0 / static_cast<double>(k));
    return acc.value();
  }
  return harmonic_number(m.n) - harmonic_number(m.n - r);
}

double mean_papr(PaprModel m) {
  require(m.n >= 1, "mean_papr: n must be >= 1");
  return harmonic_number(m.n);
}

double mean_papr_gumbel(PaprModel m) {
  require(m.n >= 2, "mean_papr_gumbel: n must be >= 2");
  return std::log(static_cast<double>(m.n)) + kEulerGamma;
}

double mean_cf_gumbel(PaprModel m) {
  require(m.n >= 2, "mean_cf_gumbel: n must be >= 2 (ln 1 = 0 divides)");
  const double root_log_n = std::sqrt(std::log(static_cast<double>(m.n)));
  return root_log_n + kEulerGamma / (2.0 * root_log_n);
}

double mean_cf_bound(PaprModel m) {
  require(m.n >= 1, "mean_cf_bound: n must be >= 1");
  return std::sqrt(harmonic_number(m.n));
}

double mean_cf_sum(PaprModel m) {
  require(m.n >= 1, "mean_cf_sum: n must be >= 1");
  if (m.n > 50)
    throw std::domain_error(
        "mean_cf_sum: alternating series is numerically unstable for n > 50; "
        "use mean_cf_integral");
  const int n = static_cast<int>(m.n);
  // Binomial coefficients for n <= 50 are exact integers below 2^53, so the
  // recurrence is exact; the cancellation between terms is what demands quad
  // precision.
  __float128 sum = 0;
  __float128 binom = 1;
  for (int k = 1; k <= n; ++k) {
    binom = binom * __float128(n - k + 1) / __float128(k);
    const __float128 term = binom * inv_sqrt_q(k);
    sum += (k % 2 == 1) ? term : -term;
  }
  const double root_pi_half = 0.5 * std::sqrt(std::numbers::pi);
  return static_cast<double>(__float128(root_pi_half) * sum);
}

double mean_cf_integral(PaprModel m, const QuadratureSpec& q) {
  require(m.n >= 1, "mean_cf_integral: n must be >= 1");
  const double n = static_cast<double>(m.n);
  const auto integrand = [n](double u) {
    const double one_minus_root = -std::expm1(std::log(u) / n);  // 1 - u^(1/n)
    return std::sqrt(-std::log(one_minus_root));
  };
  return integrate_adaptive(integrand, 0.0, 1.0, q).value;
}

double prior_mean_papr_dunsmore(PaprModel m) {
  require(m.n >= 2, "prior_mean_papr_dunsmore: n must be >= 2");
  return std::log(static_cast<double>(m.n));
}

double prior_mean_papr_keysight(PaprModel m) {
  require(m.n >= 1, "prior_mean_papr_keysight: n must be >= 1");
  return std::log(std::numbers::pi * static_cast<double>(m.n) +
                  std::numbers::e);
}

double prior_mean_papr_keysight_bw(KeysightInput k) {
  require(k.tau_s > 0.0, "prior_mean_papr_keysight_bw: tau must be > 0");
  require(k.impulse_bandwidth_hz > 0.0,
          "prior_mean_papr_keysight_bw: impulse bandwidth must be > 0");
  return std::log(2.0 * std::numbers::pi * k.tau_s * k.impulse_bandwidth_hz +
                  std::numbers::e);
}

}  // namespace papr
