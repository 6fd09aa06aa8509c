#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace eegdn::signal {

using Complex = std::complex<double>;

namespace detail {

inline void fft_radix2(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      // Twiddles evaluated directly rather than by recurrence so error does not grow with n.
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
      const Complex w(std::cos(angle), std::sin(angle));
      for (std::size_t start = 0; start < n; start += len) {
        const Complex u = a[start + k];
        const Complex v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

inline void dft_naive(std::vector<Complex>& a, bool inverse) {
  const std::size_t n = a.size();
  const double sign = inverse ? 1.0 : -1.0;
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{};
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t idx = (k * t) % n;
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(n);
      acc += a[t] * Complex(std::cos(angle), std::sin(angle));
    }
    out[k] = acc;
  }
  a = std::move(out);
}

}  // namespace detail

/// Unnormalized forward DFT: X[k] = sum_t x[t] exp(-2*pi*i*k*t/n).
/// Radix-2 for power-of-two lengths, direct O(n^2) evaluation otherwise.
inline std::vector<Complex> fft(std::vector<Complex> a) {
  if (a.size() <= 1) return a;
  if (std::has_single_bit(a.size())) {
    detail::fft_radix2(a, false);
  } else {
    detail::dft_naive(a, false);
  }
  return a;
}

/// Inverse DFT including the 1/n factor.
inline std::vector<Complex> ifft(std::vector<Complex> a) {
  if (a.empty()) return a;
  if (std::has_single_bit(a.size())) {
    detail::fft_radix2(a, true);
  } else {
    detail::dft_naive(a, true);
  }
  const double scale = 1.0 / static_cast<double>(a.size());
  for (auto& v : a) v *= scale;
  return a;
}

inline std::vector<Complex> fft_real(std::span<const double> x) {
  return fft(std::vector<Complex>(x.begin(), x.end()));
}

}  // namespace eegdn::signal
