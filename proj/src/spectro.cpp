#include "papr/spectro.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "papr/estimator.hpp"
#include "papr/math.hpp"

namespace papr {
namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::domain_error(message);
}

// FFTW plan creation/destruction is not thread-safe; execution of a private
// plan on its own buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    if (!in_ || !out_) throw std::bad_alloc();
    std::scoped_lock lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, FFTW_FORWARD,
                             FFTW_ESTIMATE);
  }

  ~FftPlan() {
    {
      std::scoped_lock lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }

  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::complex<double>* in() {
    return reinterpret_cast<std::complex<double>*>(in_);
  }
  const std::complex<double>* out() const {
    return reinterpret_cast<const std::complex<double>*>(out_);
  }
  void execute() { fftw_execute(plan_); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

void validate_config(const SpectrogramConfig& cfg) {
  require(cfg.window_length >= 8,
          "compute_spectrogram: window_length must be >= 8");
  require(cfg.overlap_fraction >= 0.0 && cfg.overlap_fraction <= 0.95,
          "compute_spectrogram: overlap_fraction must lie in [0, 0.95]");
  const std::size_t fft_length =
      cfg.fft_length == 0 ? cfg.window_length : cfg.fft_length;
  require(fft_length >= cfg.window_length,
          "compute_spectrogram: fft_length must be >= window_length");
  if (cfg.window == WindowKind::custom)
    require(cfg.custom_taps.size() == cfg.window_length,
            "compute_spectrogram: custom taps must match window_length");
}

// Linear per-bin PAPR shared by per_bin_papr and verify_band.
std::vector<double> per_bin_papr_linear(const Spectrogram& s) {
  require(s.time_bins >= 2, "per-bin PAPR needs >= 2 time bins");
  std::vector<double> papr(s.freq_bins);
  for (std::size_t f = 0; f < s.freq_bins; ++f) {
    double max_p = 0.0, sum = 0.0;
    const double* row = s.power.data() + f * s.time_bins;
    for (std::size_t t = 0; t < s.time_bins; ++t) {
      if (row[t] > max_p) max_p = row[t];
      sum += row[t];
    }
    if (sum == 0.0)
      throw std::domain_error(
          "per-bin PAPR: frequency bin has zero mean power, ratio undefined");
    papr[f] = max_p / (sum / static_cast<double>(s.time_bins));
  }
  return papr;
}

}  // namespace

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length);
  const double step = 2.0 * std::numbers::pi / static_cast<double>(length);
  switch (kind) {
    case WindowKind::hann:
      for (std::size_t k = 0; k < length; ++k)
        w[k] = 0.5 - 0.5 * std::cos(step * static_cast<double>(k));
      return w;
    case WindowKind::hamming:
      for (std::size_t k = 0; k < length; ++k)
        w[k] = 0.54 - 0.46 * std::cos(step * static_cast<double>(k));
      return w;
    case WindowKind::blackman:
      for (std::size_t k = 0; k < length; ++k)
        w[k] = 0.42 - 0.5 * std::cos(step * static_cast<double>(k)) +
               0.08 * std::cos(2.0 * step * static_cast<double>(k));
      return w;
    case WindowKind::custom:
      throw std::domain_error("make_window: custom windows carry their taps");
  }
  throw std::domain_error("make_window: unknown window kind");
}

std::size_t spectrogram_hop(const SpectrogramConfig& cfg) {
  const auto hop = static_cast<std::size_t>(std::llround(
      static_cast<double>(cfg.window_length) * (1.0 - cfg.overlap_fraction)));
  return hop == 0 ? 1 : hop;
}

Spectrogram compute_spectrogram(const IqCapture& capture,
                                const SpectrogramConfig& cfg) {
  validate_config(cfg);
  const std::size_t n = capture.samples.size();
  const std::size_t window_length = cfg.window_length;
  if (n < window_length)
    throw std::domain_error(
        "compute_spectrogram: capture shorter than one window");
  require(capture.sample_rate_hz > 0.0,
          "compute_spectrogram: capture sample rate must be > 0");

  const std::size_t fft_length =
      cfg.fft_length == 0 ? window_length : cfg.fft_length;
  const std::size_t hop = spectrogram_hop(cfg);
  const std::size_t time_bins = 1 + (n - window_length) / hop;

  const std::vector<double> window = cfg.window == WindowKind::custom
                                         ? cfg.custom_taps
                                         : make_window(cfg.window, window_length);

  Spectrogram s;
  s.freq_bins = fft_length;
  s.time_bins = time_bins;
  s.power.resize(fft_length * time_bins);
  s.freq_axis_hz.resize(fft_length);
  s.time_axis_s.resize(time_bins);

  const std::size_t half = fft_length / 2;
  const double bin_hz = capture.sample_rate_hz / static_cast<double>(fft_length);
  for (std::size_t r = 0; r < fft_length; ++r)
    s.freq_axis_hz[r] =
        capture.center_frequency_hz +
        (static_cast<double>(r) - static_cast<double>(half)) * bin_hz;

  FftPlan plan(fft_length);
  for (std::size_t t = 0; t < time_bins; ++t) {
    const std::complex<double>* frame = capture.samples.data() + t * hop;
    s.time_axis_s[t] =
        (static_cast<double>(t * hop) + 0.5 * static_cast<double>(window_length)) /
        capture.sample_rate_hz;

    std::complex<double> mean(0.0, 0.0);
    if (cfg.detrend == DetrendMode::constant) {
      for (std::size_t k = 0; k < window_length; ++k) mean += frame[k];
      mean /= static_cast<double>(window_length);
    }

    std::complex<double>* in = plan.in();
    for (std::size_t k = 0; k < window_length; ++k)
      in[k] = (frame[k] - mean) * window[k];
    for (std::size_t k = window_length; k < fft_length; ++k)
      in[k] = std::complex<double>(0.0, 0.0);

    plan.execute();
    const std::complex<double>* out = plan.out();
    for (std::size_t r = 0; r < fft_length; ++r) {
      const std::size_t k = (r + half) % fft_length;  // fftshift
      s.power[r * time_bins + t] = std::norm(out[k]);
    }
  }
  return s;
}

std::vector<double> per_bin_papr(const Spectrogram& s) {
  std::vector<double> linear = per_bin_papr_linear(s);
  std::vector<double> db(linear.size());
  for (std::size_t k = 0; k < linear.size(); ++k)
    db[k] = db_from_power_ratio(linear[k]);
  return db;
}

BandReport verify_band(const Spectrogram& s, double f_low_hz, double f_high_hz,
                       double confidence_level) {
  require(f_low_hz <= f_high_hz, "verify_band: f_low must be <= f_high");
  require(s.time_bins >= 2, "verify_band: need >= 2 time bins");

  const std::vector<double> papr_linear = per_bin_papr_linear(s);
  BandReport report;
  report.f_low_hz = f_low_hz;
  report.f_high_hz = f_high_hz;
  report.time_bins = s.time_bins;

  std::vector<double> band_linear;
  for (std::size_t f = 0; f < s.freq_bins; ++f) {
    if (s.freq_axis_hz[f] < f_low_hz || s.freq_axis_hz[f] > f_high_hz)
      continue;
    band_linear.push_back(papr_linear[f]);
    report.bin_freq_hz.push_back(s.freq_axis_hz[f]);
    report.bin_papr_db.push_back(db_from_power_ratio(papr_linear[f]));
  }
  if (band_linear.size() < 2)
    throw std::domain_error(
        "verify_band: band intersects fewer than 2 frequency bins");

  const MeanCi ci = mean_confidence_interval(band_linear, confidence_level);
  const double theory_linear = harmonic_number(s.time_bins);

  report.band_mean_papr_db = db_from_power_ratio(ci.mean);
  const double half_db =
      (ci.hi - ci.mean) * 10.0 / (std::numbers::ln10 * ci.mean);
  report.ci_low_db = report.band_mean_papr_db - half_db;
  report.ci_high_db = report.band_mean_papr_db + half_db;

  double db_avg = 0.0;
  for (double v : report.bin_papr_db) db_avg += v;
  report.band_mean_db_avg = db_avg / static_cast<double>(report.bin_papr_db.size());

  report.theory_papr_db = db_from_power_ratio(theory_linear);
  report.excess_db = report.band_mean_papr_db - report.theory_papr_db;
  report.z_score =
      (ci.mean - theory_linear) /
      (ci.sd / std::sqrt(static_cast<double>(band_linear.size())));
  report.verdict = (report.theory_papr_db >= report.ci_low_db &&
                    report.theory_papr_db <= report.ci_high_db)
                       ? BandVerdict::consistent_with_wgn
                       : BandVerdict::inconsistent;
  return report;
}

}  // namespace papr
