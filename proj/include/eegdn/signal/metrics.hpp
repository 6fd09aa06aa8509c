#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eegdn/error.hpp"
#include "eegdn/signal/fft.hpp"

namespace eegdn::signal {

inline constexpr double kDefaultSampleRate = 512.0;
inline constexpr std::size_t kDefaultEpochLength = 1024;

using Samples = std::vector<double>;

/// One-sided power spectral density. power[k] is in signal-units^2 / Hz.
struct Psd {
  std::vector<double> power;
  double bin_width = 0.0;
};

namespace detail {

inline void require_nonempty(std::span<const double> x, const char* what) {
  if (x.empty()) throw LengthError(std::string(what) + ": empty input");
}

inline void require_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw ShapeError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
}

inline double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

}  // namespace detail

inline double rms(std::span<const double> x) {
  detail::require_nonempty(x, "rms");
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

/// Population standard deviation (divides by L).
inline double stddev(std::span<const double> x) {
  detail::require_nonempty(x, "stddev");
  const double m = detail::mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(x.size()));
}

/// SNR in dB as 10*log10 of the RMS ratio (factor 10 on an amplitude ratio, as used for mixing).
inline double snr_of(std::span<const double> x, std::span<const double> scaled_noise) {
  const double noise = rms(scaled_noise);
  if (noise == 0.0) throw DegenerateNoiseError("snr_of: noise has zero RMS");
  return 10.0 * std::log10(rms(x) / noise);
}

/// Noise scale that makes snr_of(x, lambda * n) equal snr_db.
inline double lambda_for_snr(std::span<const double> x, std::span<const double> n, double snr_db) {
  const double noise = rms(n);
  if (noise == 0.0) throw DegenerateNoiseError("lambda_for_snr: noise has zero RMS");
  return rms(x) / (noise * std::pow(10.0, snr_db / 10.0));
}

struct Mixture {
  Samples y;
  double lambda = 0.0;
};

/// y = x + lambda * n at the requested SNR.
inline Mixture mix(std::span<const double> x, std::span<const double> n, double snr_db) {
  detail::require_same_length(x, n, "mix");
  Mixture m;
  m.lambda = lambda_for_snr(x, n, snr_db);
  m.y.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) m.y[i] = x[i] + m.lambda * n[i];
  return m;
}

struct NormalizedPair {
  Samples y_hat;
  Samples x_hat;
  double sigma_y = 0.0;
};

/// Divides both the noisy and the clean epoch by the noisy epoch's population std.
inline NormalizedPair normalize_pair(std::span<const double> y, std::span<const double> x) {
  detail::require_same_length(y, x, "normalize_pair");
  NormalizedPair p;
  p.sigma_y = stddev(y);
  if (p.sigma_y == 0.0) throw ConstantSignalError("normalize_pair: noisy epoch has zero standard deviation");
  p.y_hat.resize(y.size());
  p.x_hat.resize(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    p.y_hat[i] = y[i] / p.sigma_y;
    p.x_hat[i] = x[i] / p.sigma_y;
  }
  return p;
}

/// One-sided rectangular-window periodogram of the whole epoch.
/// P[k] = |X[k]|^2 / (fs * L), doubled for bins that have a negative-frequency twin.
inline Psd psd(std::span<const double> x, double sample_rate = kDefaultSampleRate) {
  if (x.size() < 2) throw LengthError("psd: need at least 2 samples");
  const std::size_t n = x.size();
  const auto spectrum = fft_real(x);
  const std::size_t bins = n / 2 + 1;
  Psd out;
  out.bin_width = sample_rate / static_cast<double>(n);
  out.power.resize(bins);
  const double norm = 1.0 / (sample_rate * static_cast<double>(n));
  for (std::size_t k = 0; k < bins; ++k) {
    double p = std::norm(spectrum[k]) * norm;
    const bool has_twin = k != 0 && !(n % 2 == 0 && k == n / 2);
    if (has_twin) p *= 2.0;
    out.power[k] = p;
  }
  return out;
}

/// RMS(denoised - truth) / RMS(truth).
inline double rrmse_t(std::span<const double> denoised, std::span<const double> truth) {
  detail::require_same_length(denoised, truth, "rrmse_t");
  const double ref = rms(truth);
  if (ref == 0.0) throw DegenerateTruthError("rrmse_t: truth has zero RMS");
  double s = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double d = denoised[i] - truth[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(truth.size())) / ref;
}

/// Same ratio as rrmse_t, taken between the two PSDs as bin vectors.
inline double rrmse_f(std::span<const double> denoised, std::span<const double> truth,
                      double sample_rate = kDefaultSampleRate) {
  detail::require_same_length(denoised, truth, "rrmse_f");
  const Psd pt = psd(truth, sample_rate);
  const Psd pd = psd(denoised, sample_rate);
  const double ref = rms(pt.power);
  if (ref == 0.0) throw DegenerateTruthError("rrmse_f: truth PSD is all zero");
  double s = 0.0;
  for (std::size_t k = 0; k < pt.power.size(); ++k) {
    const double d = pd.power[k] - pt.power[k];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(pt.power.size())) / ref;
}

/// Pearson correlation, two-pass with population moments.
inline double cc(std::span<const double> denoised, std::span<const double> truth) {
  detail::require_same_length(denoised, truth, "cc");
  detail::require_nonempty(truth, "cc");
  const double md = detail::mean(denoised);
  const double mt = detail::mean(truth);
  double cov = 0.0, vd = 0.0, vt = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double a = denoised[i] - md;
    const double b = truth[i] - mt;
    cov += a * b;
    vd += a * a;
    vt += b * b;
  }
  if (vd == 0.0 || vt == 0.0) throw DegenerateVarianceError("cc: input has zero variance");
  const double r = cov / std::sqrt(vd * vt);
  // Rounding can push |r| a few ulps past 1.
  return r > 1.0 ? 1.0 : (r < -1.0 ? -1.0 : r);
}

}  // namespace eegdn::signal
