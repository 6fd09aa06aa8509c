#pragma once

// Synthetic surrogate corpus for runs without the recorded dataset.
//   EEG: 3-6 sinusoids in 1-30 Hz, amplitude ~ 1/f, random phase, plus 5% white noise.
//   EMG: white noise band-limited to 20-250 Hz by zeroing DFT bins outside the band.
// Every epoch is scaled to unit RMS.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "eegdn/data/matrix.hpp"
#include "eegdn/random.hpp"
#include "eegdn/signal/fft.hpp"
#include "eegdn/signal/metrics.hpp"

namespace eegdn::data {

struct SynthOptions {
  std::size_t length = signal::kDefaultEpochLength;
  double sample_rate = signal::kDefaultSampleRate;
  double eeg_band_lo = 1.0;
  double eeg_band_hi = 30.0;
  double eeg_noise = 0.05;
  double emg_band_lo = 20.0;
  double emg_band_hi = 250.0;
};

struct Corpus {
  EpochMatrix eeg;
  EpochMatrix emg;
};

namespace detail {

inline void scale_to_unit_rms(std::vector<double>& v) {
  const double r = signal::rms(v);
  if (r > 0.0) {
    for (double& s : v) s /= r;
  }
}

inline std::vector<double> synth_eeg_epoch(Rng& rng, const SynthOptions& o) {
  std::vector<double> x(o.length, 0.0);
  const std::size_t components = 3 + static_cast<std::size_t>(uniform_index(rng, 4));
  for (std::size_t c = 0; c < components; ++c) {
    const double f = uniform(rng, o.eeg_band_lo, o.eeg_band_hi);
    const double amp = 1.0 / f;
    const double phase = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    for (std::size_t t = 0; t < o.length; ++t) {
      x[t] += amp * std::sin(2.0 * std::numbers::pi * f * static_cast<double>(t) / o.sample_rate + phase);
    }
  }
  scale_to_unit_rms(x);
  for (double& s : x) s += o.eeg_noise * standard_normal(rng);
  scale_to_unit_rms(x);
  return x;
}

inline std::vector<double> synth_emg_epoch(Rng& rng, const SynthOptions& o) {
  std::vector<signal::Complex> z(o.length);
  for (auto& v : z) v = standard_normal(rng);
  z = signal::fft(std::move(z));
  const std::size_t n = o.length;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t mirrored = std::min(k, n - k);
    const double f = static_cast<double>(mirrored) * o.sample_rate / static_cast<double>(n);
    if (f < o.emg_band_lo || f > o.emg_band_hi) z[k] = 0.0;
  }
  z = signal::ifft(std::move(z));
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = z[t].real();
  scale_to_unit_rms(x);
  return x;
}

}  // namespace detail

/// Deterministic in (n_eeg, n_emg, options, seed). EEG and EMG draw from separate streams.
inline Corpus synth_corpus(std::size_t n_eeg, std::size_t n_emg, std::uint64_t seed, const SynthOptions& opt = {}) {
  Corpus c{EpochMatrix(0, opt.length), EpochMatrix(0, opt.length)};
  Rng eeg_rng(derive_seed(seed, 1));
  Rng emg_rng(derive_seed(seed, 2));
  for (std::size_t i = 0; i < n_eeg; ++i) c.eeg.append_row(detail::synth_eeg_epoch(eeg_rng, opt));
  for (std::size_t i = 0; i < n_emg; ++i) c.emg.append_row(detail::synth_emg_epoch(emg_rng, opt));
  return c;
}

}  // namespace eegdn::data
