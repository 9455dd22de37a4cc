#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "papr/estimator.hpp"
#include "papr/math.hpp"
#include "papr/spectro.hpp"
#include "synth.hpp"

using papr::SpectrogramConfig;

TEST_CASE("compute_spectrogram: shapes, axes, validation") {
  const auto capture = synth::wgn_capture(10000, 1);

  SUBCASE("time-bin count follows 1 + floor((n - L)/hop)") {
    std::mt19937_64 eng(5);
    for (int rep = 0; rep < 30; ++rep) {
      SpectrogramConfig cfg;
      cfg.window_length = 64ull << (eng() % 3);
      const double overlaps[] = {0.0, 0.25, 0.5, 0.75, 0.9};
      cfg.overlap_fraction = overlaps[eng() % 5];
      cfg.detrend = papr::DetrendMode::none;
      const auto s = papr::compute_spectrogram(capture, cfg);
      const std::size_t hop = papr::spectrogram_hop(cfg);
      CHECK(s.time_bins == 1 + (capture.samples.size() - cfg.window_length) / hop);
      CHECK(s.freq_bins == cfg.window_length);
      CHECK(s.power.size() == s.freq_bins * s.time_bins);
    }
  }

  SUBCASE("frequency axis is centered on the capture center frequency") {
    const auto s = papr::compute_spectrogram(capture, {});
    CHECK(s.freq_axis_hz.size() == 512);
    CHECK(s.freq_axis_hz[256] == doctest::Approx(3.7e9));
    CHECK(s.freq_axis_hz[0] == doctest::Approx(3.7e9 - 15e6));
    const double bin_hz = 30e6 / 512.0;
    CHECK(s.freq_axis_hz[1] - s.freq_axis_hz[0] == doctest::Approx(bin_hz));
    CHECK(s.time_axis_s.front() == doctest::Approx(256.0 / 30e6));
  }

  SUBCASE("zero padding to a longer FFT length") {
    SpectrogramConfig cfg;
    cfg.window_length = 256;
    cfg.fft_length = 512;
    const auto s = papr::compute_spectrogram(capture, cfg);
    CHECK(s.freq_bins == 512);
  }

  SUBCASE("validation errors") {
    SpectrogramConfig cfg;
    const auto tiny = synth::wgn_capture(100, 2);
    CHECK_THROWS_AS(papr::compute_spectrogram(tiny, cfg), std::domain_error);

    cfg.overlap_fraction = 0.96;
    CHECK_THROWS_AS(papr::compute_spectrogram(capture, cfg), std::domain_error);

    cfg = {};
    cfg.fft_length = 256;
    CHECK_THROWS_AS(papr::compute_spectrogram(capture, cfg), std::domain_error);

    cfg = {};
    cfg.window = papr::WindowKind::custom;
    cfg.custom_taps = {1.0, 2.0};
    CHECK_THROWS_AS(papr::compute_spectrogram(capture, cfg), std::domain_error);

    cfg = {};
    cfg.window_length = 4;
    CHECK_THROWS_AS(papr::compute_spectrogram(capture, cfg), std::domain_error);
  }
}

TEST_CASE("pure tone concentrates at its bin with Hann leakage floor") {
  papr::IqCapture capture = synth::wgn_capture(20000, 3);
  for (auto& s : capture.samples) s = {0.0, 0.0};
  const int bin_offset = 40;  // shifted row 256 + 40
  synth::add_tone(capture, bin_offset / 512.0, 1.0);

  SpectrogramConfig cfg;
  cfg.detrend = papr::DetrendMode::none;
  const auto s = papr::compute_spectrogram(capture, cfg);
  const std::size_t peak_row = 256 + bin_offset;

  double peak = 0.0;
  std::size_t argmax = 0;
  for (std::size_t f = 0; f < s.freq_bins; ++f)
    if (s.at(f, 0) > peak) {
      peak = s.at(f, 0);
      argmax = f;
    }
  CHECK(argmax == peak_row);

  // Hann's first sidelobe is -31 dB; away from the adjacent bins the exact
  // bin-centered tone leaks far below that.
  for (std::size_t f = 0; f < s.freq_bins; ++f) {
    if (f + 2 > peak_row && peak_row + 2 > f) continue;
    CHECK(10.0 * std::log10(s.at(f, 5) / peak) < -31.0);
  }

  SUBCASE("constant-envelope tone has near-zero PAPR in its bin") {
    const auto papr_db = papr::per_bin_papr(s);
    CHECK(std::abs(papr_db[peak_row]) < 0.05);
  }
}

TEST_CASE("constant input with constant detrend vanishes") {
  papr::IqCapture capture = synth::wgn_capture(4096, 4);

  SUBCASE("unit DC cancels exactly and per-bin PAPR is then undefined") {
    for (auto& s : capture.samples) s = {1.0, 1.0};
    const auto s = papr::compute_spectrogram(capture, {});
    for (double p : s.power) CHECK(p == 0.0);
    CHECK_THROWS_AS(papr::per_bin_papr(s), std::domain_error);
    CHECK_THROWS_AS(papr::verify_band(s, 3.69e9, 3.71e9), std::domain_error);
  }

  SUBCASE("arbitrary DC cancels to rounding noise") {
    for (auto& s : capture.samples) s = {0.37, -0.89};
    const auto s = papr::compute_spectrogram(capture, {});
    for (double p : s.power) CHECK(p < 1e-20);
  }
}

TEST_CASE("WGN bin time series are exponential") {
  const auto capture = synth::wgn_capture(100000, 6);
  SpectrogramConfig cfg;
  cfg.detrend = papr::DetrendMode::none;
  const auto s = papr::compute_spectrogram(capture, cfg);

  // Bin power is Exp with mean 2 sigma^2 sum(w^2) when the window taps are
  // applied to unit-variance complex noise.
  const auto w = papr::make_window(papr::WindowKind::hann, 512);
  double w2 = 0.0;
  for (double v : w) w2 += v * v;
  const double scale = 2.0 * w2;

  const double crit = papr::ks_critical_value(0.01, s.time_bins);
  for (std::size_t f : {17ul, 130ul, 256ul, 400ul, 509ul}) {
    std::vector<double> series(s.time_bins);
    for (std::size_t t = 0; t < s.time_bins; ++t) series[t] = s.at(f, t);
    const double d = papr::ks_statistic(series, [scale](double x) {
      return -std::expm1(-x / scale);
    });
    CHECK(d < crit);
  }
}

TEST_CASE("verify_band on pure WGN") {
  const auto capture = synth::wgn_capture(300000, 20240812);
  const auto s = papr::compute_spectrogram(capture, {});
  const double f_lo = s.freq_axis_hz.front();
  const double f_hi = s.freq_axis_hz.back();

  SUBCASE("full span is consistent with thermal noise") {
    const auto report = papr::verify_band(s, f_lo, f_hi);
    CHECK(report.verdict == papr::BandVerdict::consistent_with_wgn);
    CHECK(report.bin_freq_hz.size() == 512);
    CHECK(std::abs(report.excess_db) < 0.2);
    CHECK(report.ci_low_db <= report.theory_papr_db);
    CHECK(report.theory_papr_db <= report.ci_high_db);
    CHECK(report.time_bins == s.time_bins);
    CHECK(std::abs(report.z_score) < 3.0);
  }

  SUBCASE("a 170-bin sub-band is consistent too") {
    const double lo = s.freq_axis_hz[100];
    const double hi = s.freq_axis_hz[269];
    const auto report = papr::verify_band(s, lo, hi);
    CHECK(report.bin_freq_hz.size() == 170);
    CHECK(report.verdict == papr::BandVerdict::consistent_with_wgn);
    CHECK(std::abs(report.excess_db) < 0.2);
  }

  SUBCASE("band validation") {
    CHECK_THROWS_AS(papr::verify_band(s, f_hi + 1e6, f_hi + 2e6),
                    std::domain_error);
    CHECK_THROWS_AS(papr::verify_band(s, f_hi, f_lo), std::domain_error);
  }
}

TEST_CASE("bursty in-band emission flips the verdict") {
  papr::IqCapture capture = synth::wgn_capture(300000, 31337);
  // 34 tones covering a ~2 MHz band at 20% duty with block-varying envelopes.
  std::vector<double> tones;
  for (int k = 50; k < 84; ++k) tones.push_back(k / 512.0);
  synth::add_bursty_multitone(capture, tones, 0.3, 512, 5, 777);

  const auto s = papr::compute_spectrogram(capture, {});
  const double lo = s.freq_axis_hz[256 + 50];
  const double hi = s.freq_axis_hz[256 + 83];
  const auto report = papr::verify_band(s, lo, hi);
  CHECK(report.verdict == papr::BandVerdict::inconsistent);
  CHECK(report.excess_db > 3.0);

  // Out-of-band bins are untouched.
  const auto clean = papr::verify_band(s, s.freq_axis_hz[30],
                                       s.freq_axis_hz[200]);
  CHECK(clean.verdict == papr::BandVerdict::consistent_with_wgn);
}

TEST_CASE("per-bin PAPR invariances") {
  const auto capture = synth::wgn_capture(200000, 55);
  const auto base = papr::compute_spectrogram(capture, {});
  const auto base_papr = papr::per_bin_papr(base);

  SUBCASE("rescaling the window changes nothing") {
    SpectrogramConfig cfg;
    cfg.window = papr::WindowKind::custom;
    cfg.custom_taps = papr::make_window(papr::WindowKind::hann, 512);
    for (double& t : cfg.custom_taps) t *= 7.3;
    const auto scaled = papr::compute_spectrogram(capture, cfg);
    const auto scaled_papr = papr::per_bin_papr(scaled);
    for (std::size_t f = 0; f < base_papr.size(); ++f)
      CHECK(std::abs(scaled_papr[f] - base_papr[f]) < 1e-10);
  }

  SUBCASE("complex calibration constants cancel") {
    papr::IqCapture scaled = capture;
    const std::complex<double> c(0.3, -1.7);
    for (auto& v : scaled.samples) v *= c;
    const auto s = papr::compute_spectrogram(scaled, {});
    const auto papr_db = papr::per_bin_papr(s);
    for (std::size_t f = 0; f < base_papr.size(); ++f)
      CHECK(std::abs(papr_db[f] - base_papr[f]) < 1e-10);
  }

  SUBCASE("the verdict is robust to the window choice") {
    for (auto kind : {papr::WindowKind::hann, papr::WindowKind::hamming,
                      papr::WindowKind::blackman}) {
      SpectrogramConfig cfg;
      cfg.window = kind;
      const auto s = papr::compute_spectrogram(capture, cfg);
      const auto report = papr::verify_band(s, s.freq_axis_hz.front(),
                                            s.freq_axis_hz.back());
      CHECK(report.verdict == papr::BandVerdict::consistent_with_wgn);
    }
  }
}

TEST_CASE("overlap robustness of the band mean") {
  const auto capture = synth::wgn_capture(300000, 818);

  const auto deviation_at = [&](double overlap) {
    SpectrogramConfig cfg;
    cfg.overlap_fraction = overlap;
    const auto s = papr::compute_spectrogram(capture, cfg);
    const auto report = papr::verify_band(s, s.freq_axis_hz.front(),
                                          s.freq_axis_hz.back());
    return std::abs(report.band_mean_papr_db - report.theory_papr_db);
  };

  const double dev50 = deviation_at(0.5);
  const double dev75 = deviation_at(0.75);
  const double dev95 = deviation_at(0.95);
  CHECK(dev50 < 0.15);
  CHECK(dev75 < 0.15);
  // Extreme overlap makes neighboring frames nearly dependent and the
  // effective time-bin count overstated, so the gap grows.
  CHECK(dev95 > dev50);
  CHECK(dev95 > dev75);
}
