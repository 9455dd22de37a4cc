#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace papr {

/// Per-component amplitude scale and the 64-bit reproducibility seed.
/// I and Q are each N(0, sigma^2); the complex sample power P = I^2 + Q^2 is
/// exponential with mean 2 sigma^2.
struct WgnParams {
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

/// A block of baseband samples as parallel I and Q vectors.
struct IqBuffer {
  std::vector<double> i;
  std::vector<double> q;

  std::size_t size() const { return i.size(); }
};

/// Receiver gain/phase mismatch. The per-sample map is
///   [A cos(dphi/2)  A sin(dphi/2); B sin(dphi/2)  B cos(dphi/2)]
/// with A = 1 - delta_g/2 and B = 1 + delta_g/2.
struct ImbalanceParams {
  double delta_g = 0.0;        // relative gain mismatch, in [0, 2)
  double delta_phi_deg = 0.0;  // phase mismatch, degrees, in (-90, 90)
};

/// Mid-tread uniform quantizer with saturation: 2^bits levels spanning
/// [-reference_level, +reference_level), applied to I and Q independently.
struct QuantizerParams {
  int bits = 14;
  double reference_level = 1.0;
};

/// Linear-phase FIR low-pass. coefficients has order+1 taps, is symmetric,
/// and is normalized to unit DC gain.
struct FirLowPass {
  double cutoff = 0.25;  // cycles/sample, in (0, 0.5)
  int order = 0;
  std::vector<double> coefficients;
};

/// SplitMix64 finalizer; full-avalanche 64-bit mix.
std::uint64_t splitmix64(std::uint64_t x);

/// Derives the seed of an independent substream from (master seed, stream
/// index). Parallel and serial Monte Carlo runs agree because every trial's
/// stream depends only on this pair.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream);

/// n complex samples of zero-mean WGN; 2n i.i.d. N(0, sigma^2) draws via the
/// Marsaglia polar method (exact to double precision). Bit-reproducible for a
/// fixed seed.
IqBuffer generate_wgn(std::size_t n, const WgnParams& p);

/// Applies the 2x2 imbalance map per sample. (0, 0) is the identity, exactly.
IqBuffer apply_imbalance(const IqBuffer& b, const ImbalanceParams& imb);

/// Rounds each component to the nearest quantizer level, clipping to the
/// extreme levels beyond full scale.
IqBuffer apply_quantizer(const IqBuffer& b, const QuantizerParams& qp);

/// Windowed-sinc low-pass design with a Hamming window
/// w[k] = 0.54 - 0.46 cos(2 pi k / order), normalized to unit DC gain.
/// order must be even and >= 2; cutoff in (0, 0.5) cycles/sample.
FirLowPass design_lowpass(double cutoff, int order);

/// Convolves I and Q independently with f. The buffer is padded on both ends
/// with `order` freshly generated WGN samples (a dedicated substream of
/// p.seed), and the transient-bearing edges are discarded, so every retained
/// output sample is a full-overlap convolution of stationary input and the
/// output length equals the input length.
IqBuffer filter_trimmed(const IqBuffer& b, const FirLowPass& f,
                        const WgnParams& p);

}  // namespace papr
