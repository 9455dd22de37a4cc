#include "papr/signal.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

namespace papr {
namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::domain_error(message);
}

// Stream tag for the padding samples of filter_trimmed, so the pad draws
// never overlap the caller's main stream for the same seed.
constexpr std::uint64_t kFilterPadStream = 0xf117e9a0dd5eedULL;

double canonical(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;  // [0, 1)
}

// Marsaglia polar method; one accepted iteration yields an independent
// standard-normal pair, which maps directly onto one (I, Q) sample.
std::pair<double, double> normal_pair(std::mt19937_64& eng) {
  for (;;) {
    const double u = 2.0 * canonical(eng) - 1.0;
    const double v = 2.0 * canonical(eng) - 1.0;
    const double s = u * u + v * v;
    if (s >= 1.0 || s == 0.0) continue;
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    return {u * factor, v * factor};
  }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) + stream);
}

IqBuffer generate_wgn(std::size_t n, const WgnParams& p) {
  require(n >= 1, "generate_wgn: n must be >= 1");
  require(p.sigma > 0.0, "generate_wgn: sigma must be > 0");
  std::mt19937_64 eng(p.seed);
  IqBuffer b;
  b.i.resize(n);
  b.q.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto [gi, gq] = normal_pair(eng);
    b.i[k] = p.sigma * gi;
    b.q[k] = p.sigma * gq;
  }
  return b;
}

IqBuffer apply_imbalance(const IqBuffer& b, const ImbalanceParams& imb) {
  require(b.i.size() == b.q.size(), "apply_imbalance: I/Q length mismatch");
  require(imb.delta_g >= 0.0 && imb.delta_g < 2.0,
          "apply_imbalance: delta_g must lie in [0, 2)");
  require(imb.delta_phi_deg > -90.0 && imb.delta_phi_deg < 90.0,
          "apply_imbalance: delta_phi must lie in (-90, 90) degrees");
  if (imb.delta_g == 0.0 && imb.delta_phi_deg == 0.0) return b;

  const double a = 1.0 - imb.delta_g / 2.0;
  const double bb = 1.0 + imb.delta_g / 2.0;
  const double half_phi = 0.5 * imb.delta_phi_deg * std::numbers::pi / 180.0;
  const double c = std::cos(half_phi);
  const double s = std::sin(half_phi);

  IqBuffer out;
  out.i.resize(b.size());
  out.q.resize(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    out.i[k] = a * (c * b.i[k] + s * b.q[k]);
    out.q[k] = bb * (s * b.i[k] + c * b.q[k]);
  }
  return out;
}

IqBuffer apply_quantizer(const IqBuffer& b, const QuantizerParams& qp) {
  require(b.i.size() == b.q.size(), "apply_quantizer: I/Q length mismatch");
  require(qp.bits >= 1 && qp.bits <= 24,
          "apply_quantizer: bits must lie in [1, 24]");
  require(qp.reference_level > 0.0,
          "apply_quantizer: reference_level must be > 0");

  const double step =
      2.0 * qp.reference_level / static_cast<double>(1LL << qp.bits);
  const long long code_max = (1LL << (qp.bits - 1)) - 1;
  const long long code_min = -(1LL << (qp.bits - 1));
  const auto quantize = [&](double x) {
    long long code = std::llround(x / step);
    if (code > code_max) code = code_max;
    if (code < code_min) code = code_min;
    return step * static_cast<double>(code);
  };

  IqBuffer out;
  out.i.resize(b.size());
  out.q.resize(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) {
    out.i[k] = quantize(b.i[k]);
    out.q[k] = quantize(b.q[k]);
  }
  return out;
}

FirLowPass design_lowpass(double cutoff, int order) {
  require(cutoff > 0.0 && cutoff < 0.5,
          "design_lowpass: cutoff must lie in (0, 0.5) cycles/sample");
  require(order >= 2 && order % 2 == 0,
          "design_lowpass: order must be even and >= 2");

  const int taps = order + 1;
  const double mid = order / 2.0;
  std::vector<double> h(taps);
  double sum = 0.0;
  for (int k = 0; k < taps; ++k) {
    const double w =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / order);
    const double t = k - mid;
    const double ideal =
        (t == 0.0) ? 2.0 * cutoff
                   : std::sin(2.0 * std::numbers::pi * cutoff * t) /
                         (std::numbers::pi * t);
    h[k] = w * ideal;
    sum += h[k];
  }
  for (double& c : h) c /= sum;  // unit DC gain

  FirLowPass f;
  f.cutoff = cutoff;
  f.order = order;
  f.coefficients = std::move(h);
  return f;
}

IqBuffer filter_trimmed(const IqBuffer& b, const FirLowPass& f,
                        const WgnParams& p) {
  require(b.size() >= 1, "filter_trimmed: empty buffer");
  require(b.i.size() == b.q.size(), "filter_trimmed: I/Q length mismatch");
  require(!f.coefficients.empty(), "filter_trimmed: empty filter");
  const std::size_t order = f.coefficients.size() - 1;
  const std::size_t n = b.size();

  if (order == 0) {
    IqBuffer out;
    out.i.resize(n);
    out.q.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      out.i[k] = f.coefficients[0] * b.i[k];
      out.q[k] = f.coefficients[0] * b.q[k];
    }
    return out;
  }

  const IqBuffer pad = generate_wgn(
      2 * order, WgnParams{p.sigma, substream_seed(p.seed, kFilterPadStream)});

  std::vector<double> xi(n + 2 * order), xq(n + 2 * order);
  for (std::size_t k = 0; k < order; ++k) {
    xi[k] = pad.i[k];
    xq[k] = pad.q[k];
    xi[order + n + k] = pad.i[order + k];
    xq[order + n + k] = pad.q[order + k];
  }
  for (std::size_t k = 0; k < n; ++k) {
    xi[order + k] = b.i[k];
    xq[order + k] = b.q[k];
  }

  // out[t] = sum_j h[j] x[t + order - j]: every output taps only padded input,
  // so no zero-state transient survives the trim.
  IqBuffer out;
  out.i.resize(n);
  out.q.resize(n);
  const double* h = f.coefficients.data();
  for (std::size_t t = 0; t < n; ++t) {
    double acc_i = 0.0, acc_q = 0.0;
    const double* wi = xi.data() + t;
    const double* wq = xq.data() + t;
    for (std::size_t j = 0; j <= order; ++j) {
      acc_i += h[j] * wi[order - j];
      acc_q += h[j] * wq[order - j];
    }
    out.i[t] = acc_i;
    out.q[t] = acc_q;
  }
  return out;
}

}  // namespace papr
