#pragma once

#include <cstddef>
#include <vector>

#include "papr/iq_io.hpp"

namespace papr {

enum class WindowKind { hann, hamming, blackman, custom };
enum class DetrendMode { none, constant };

/// STFT framing and taper. Frames start at multiples of the hop with no edge
/// padding; hop = round(window_length * (1 - overlap_fraction)). With the
/// constant detrend each frame's complex mean is subtracted before windowing,
/// which suppresses a DC/LO line.
struct SpectrogramConfig {
  WindowKind window = WindowKind::hann;
  std::size_t window_length = 512;
  double overlap_fraction = 0.5;  // in [0, 0.95]
  DetrendMode detrend = DetrendMode::constant;
  std::size_t fft_length = 0;  // 0 means window_length
  std::vector<double> custom_taps;  // used when window == custom
};

/// Periodic (DFT-even) taper of the given length.
std::vector<double> make_window(WindowKind kind, std::size_t length);

std::size_t spectrogram_hop(const SpectrogramConfig& cfg);

/// Squared-magnitude STFT. Rows are FFT-shifted so the capture center
/// frequency sits at the middle bin; power is uncalibrated.
struct Spectrogram {
  std::size_t freq_bins = 0;
  std::size_t time_bins = 0;
  std::vector<double> power;  // row-major [freq][time]
  std::vector<double> freq_axis_hz;
  std::vector<double> time_axis_s;

  double at(std::size_t f, std::size_t t) const {
    return power[f * time_bins + t];
  }
};

Spectrogram compute_spectrogram(const IqCapture& capture,
                                const SpectrogramConfig& cfg = {});

/// Per-frequency-bin 10 log10(max over time / mean over time).
std::vector<double> per_bin_papr(const Spectrogram& s);

enum class BandVerdict { consistent_with_wgn, inconsistent };

/// Comparison of a band's time-axis PAPR against the thermal-noise
/// prediction 10 log10(H_T), T = time bin count. The band mean is taken over
/// the per-bin linear PAPR values (the prediction is a linear-scale mean);
/// the dB-domain average is reported alongside. Bins are treated as
/// independent when forming the confidence interval; window-induced
/// adjacent-bin correlation is accepted as approximation.
struct BandReport {
  double f_low_hz = 0.0;
  double f_high_hz = 0.0;
  std::vector<double> bin_freq_hz;
  std::vector<double> bin_papr_db;
  std::size_t time_bins = 0;
  double band_mean_papr_db = 0.0;
  double ci_low_db = 0.0;
  double ci_high_db = 0.0;
  double band_mean_db_avg = 0.0;
  double theory_papr_db = 0.0;
  double excess_db = 0.0;
  double z_score = 0.0;
  BandVerdict verdict = BandVerdict::inconsistent;
};

/// Verdict is consistent_with_wgn iff the theory value lies inside the
/// band-mean confidence interval; the z-score and excess_db are reported so
/// callers can apply their own thresholds.
BandReport verify_band(const Spectrogram& s, double f_low_hz, double f_high_hz,
                       double confidence_level = 0.95);

}  // namespace papr
