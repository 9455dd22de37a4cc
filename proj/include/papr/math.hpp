#pragma once

#include <cstdint>

#include "papr/quadrature.hpp"

namespace papr {

/// Euler-Mascheroni constant, 20 significant digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Sample count of an i.i.d. complex WGN block. The noise power cancels out
/// of every PAPR/CF distribution, so n is the only parameter.
struct PaprModel {
  std::uint64_t n = 1;
};

/// Inputs for the vendor app-note mean-PAPR formula stated in terms of
/// observation period and one-sided impulse bandwidth.
struct KeysightInput {
  double tau_s = 0.0;                  // observation period, seconds
  double impulse_bandwidth_hz = 0.0;   // one-sided impulse bandwidth, Hz
};

// --- Exact distribution of PAPR = P_max / E[P] and CF = sqrt(PAPR) ---------

/// F(x) = (1 - e^-x)^n, the CDF of the maximum of n unit exponentials.
double papr_cdf(double x, PaprModel m);

/// F(x) = (1 - e^-x^2)^n; equals papr_cdf(x^2, m) exactly.
double cf_cdf(double x, PaprModel m);

/// Q(p) = -ln(1 - p^(1/n)); inverse of papr_cdf. Requires 0 <= p < 1.
double papr_quantile(double p, PaprModel m);

/// Q(p) = sqrt(papr_quantile(p, m)), computed exactly as that square root.
double cf_quantile(double p, PaprModel m);

/// f(x) = n e^-x (1 - e^-x)^(n-1), the linear-scale PAPR density.
double papr_pdf(double x, PaprModel m);

/// Density of 10 log10(PAPR) per dB; change of variables applied to papr_pdf.
double papr_pdf_db(double y_db, PaprModel m);

// --- Large-n Gumbel limits --------------------------------------------------

/// Gumbel CDF with location ln n and unit scale. Requires n >= 2.
double papr_cdf_asymptotic(double x, PaprModel m);

/// Gumbel CDF with location sqrt(ln n) and scale 1/(2 sqrt(ln n)).
/// Requires n >= 2.
double cf_cdf_asymptotic(double x, PaprModel m);

// --- Means ------------------------------------------------------------------

/// Mean of the r-th order statistic of n unit exponentials:
/// sum_{k=n-r+1..n} 1/k. Requires 1 <= r <= n.
double mean_order_statistic_power(std::uint64_t r, PaprModel m);

/// Exact mean PAPR: the harmonic number H_n.
double mean_papr(PaprModel m);

/// Gumbel-limit mean PAPR, ln n + gamma. Requires n >= 2.
double mean_papr_gumbel(PaprModel m);

/// Gumbel-limit mean CF, sqrt(ln n) + gamma/(2 sqrt(ln n)). Requires n >= 2.
double mean_cf_gumbel(PaprModel m);

/// Jensen upper bound on the mean CF: sqrt(H_n).
double mean_cf_bound(PaprModel m);

/// Exact mean CF via the alternating binomial series
/// (sqrt(pi)/2) sum_k C(n,k) (-1)^(k-1) k^(-1/2).
/// Refuses n > 50: the series loses ~13 digits to cancellation there and
/// becomes numerically meaningless shortly after. Internally evaluated in
/// quad precision so the full valid range agrees with mean_cf_integral.
double mean_cf_sum(PaprModel m);

/// Exact mean CF via the probability-integral-transform integral
/// int_0^1 sqrt(-ln(1 - u^(1/n))) du, adaptively integrated. The integrand
/// has an integrable logarithmic singularity at u = 1.
double mean_cf_integral(PaprModel m, const QuadratureSpec& q = {});

// --- Previously published approximations ------------------------------------

/// Textbook approximation E[PAPR] ~ ln n. Underestimates H_n; the gap tends
/// to gamma. Requires n >= 2.
double prior_mean_papr_dunsmore(PaprModel m);

/// Vendor app-note approximation E[PAPR] ~ ln(pi n + e). Overestimates H_n;
/// the gap tends to ln(pi) - gamma.
double prior_mean_papr_keysight(PaprModel m);

/// Same formula in instrument terms: ln(2 pi tau BW_i + e). Reduces to
/// prior_mean_papr_keysight when tau * BW_i = n/2.
double prior_mean_papr_keysight_bw(KeysightInput k);

// --- Helpers ----------------------------------------------------------------

/// H_k = sum_{j=1..k} 1/k, with H_0 = 0. Compensated direct summation up to
/// k = 10^6, five-term asymptotic expansion above; both sides are accurate to
/// better than 1e-12 relative.
double harmonic_number(std::uint64_t k);

double db_from_power_ratio(double ratio);   // 10 log10(ratio)
double power_ratio_from_db(double db);      // 10^(db/10)

}  // namespace papr
