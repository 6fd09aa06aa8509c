#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "eegdn/signal/fft.hpp"
#include "eegdn/signal/metrics.hpp"
#include "test_util.hpp"

namespace sig = eegdn::signal;
using eegdn::Rng;
using eegdn::testing::random_vector;

// Direct O(n^2) DFT, independent of the library's transform.
static std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{};
    for (std::size_t t = 0; t < n; ++t) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[k] = acc;
  }
  return out;
}

TEST(Rms, Examples) {
  EXPECT_EQ(sig::rms(std::vector<double>{0, 0, 0, 0}), 0.0);
  EXPECT_EQ(sig::rms(std::vector<double>{1, -1, 1, -1}), 1.0);
  EXPECT_NEAR(sig::rms(std::vector<double>{3, 4}), 3.53553390593273762, 1e-15);
  EXPECT_THROW(sig::rms(std::vector<double>{}), eegdn::LengthError);
}

TEST(LambdaForSnr, Examples) {
  const std::vector<double> unit{1, -1, 1, -1};
  EXPECT_NEAR(sig::lambda_for_snr(unit, unit, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(sig::lambda_for_snr(unit, unit, 10.0), 0.1, 1e-15);
  const std::vector<double> x{2, -2, 2, -2}, n{4, -4, 4, -4};
  const double lam = sig::lambda_for_snr(x, n, -7.0);
  EXPECT_NEAR(lam, 2.50593616813636142, 1e-13);
  std::vector<double> scaled(n);
  for (double& v : scaled) v *= lam;
  EXPECT_NEAR(sig::snr_of(x, scaled), -7.0, 1e-12);
  EXPECT_THROW(sig::lambda_for_snr(x, std::vector<double>{0, 0, 0, 0}, 0.0), eegdn::DegenerateNoiseError);
}

TEST(Mix, Examples) {
  auto m = sig::mix(std::vector<double>{1, 1}, std::vector<double>{1, -1}, 0.0);
  EXPECT_NEAR(m.lambda, 1.0, 1e-15);
  EXPECT_NEAR(m.y[0], 2.0, 1e-15);
  EXPECT_NEAR(m.y[1], 0.0, 1e-15);

  m = sig::mix(std::vector<double>{3, 4}, std::vector<double>{1, 1}, -6.0);
  EXPECT_NEAR(m.lambda, 14.0752139968683668, 1e-12);
  EXPECT_NEAR(m.y[0], 17.0752139968683668, 1e-12);
  EXPECT_NEAR(m.y[1], 18.0752139968683668, 1e-12);

  EXPECT_THROW(sig::mix(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}, 0.0), eegdn::ShapeError);
}

TEST(Mix, NoiseScaleIsAbsorbedByLambda) {
  Rng rng(5);
  const auto x = random_vector(64, rng);
  const auto n = random_vector(64, rng);
  auto n3 = n;
  for (double& v : n3) v *= 3.7;
  const auto a = sig::mix(x, n, -2.5);
  const auto b = sig::mix(x, n3, -2.5);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(a.y[i], b.y[i], 1e-12);
}

TEST(SnrOf, ExamplesAndRoundTrip) {
  const std::vector<double> a{1, -1}, b{-1, 1}, tenth{0.1, -0.1};
  EXPECT_NEAR(sig::snr_of(a, b), 0.0, 1e-15);
  EXPECT_NEAR(sig::snr_of(a, tenth), 10.0, 1e-12);
  EXPECT_THROW(sig::snr_of(a, std::vector<double>{0, 0}), eegdn::DegenerateNoiseError);

  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const auto x = random_vector(128, rng, eegdn::uniform(rng, 0.1, 10.0));
    const auto n = random_vector(128, rng, eegdn::uniform(rng, 0.1, 10.0));
    const double s = eegdn::uniform(rng, -7.0, 2.0);
    const double lam = sig::lambda_for_snr(x, n, s);
    auto scaled = n;
    for (double& v : scaled) v *= lam;
    EXPECT_LT(std::abs(sig::snr_of(x, scaled) - s), 1e-9);
  }
}

TEST(NormalizePair, Examples) {
  auto p = sig::normalize_pair(std::vector<double>{1, -1}, std::vector<double>{0, 0});
  EXPECT_EQ(p.sigma_y, 1.0);
  EXPECT_EQ(p.y_hat, (std::vector<double>{1, -1}));

  p = sig::normalize_pair(std::vector<double>{2, -2}, std::vector<double>{1, 1});
  EXPECT_EQ(p.sigma_y, 2.0);
  EXPECT_EQ(p.y_hat, (std::vector<double>{1, -1}));
  EXPECT_EQ(p.x_hat, (std::vector<double>{0.5, 0.5}));

  EXPECT_THROW(sig::normalize_pair(std::vector<double>{3, 3, 3}, std::vector<double>{1, 2, 3}),
               eegdn::ConstantSignalError);
}

TEST(NormalizePair, UnitStdAndInverse) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto y = random_vector(256, rng, 40.0);
    const auto x = random_vector(256, rng, 20.0);
    const auto p = sig::normalize_pair(y, x);
    EXPECT_NEAR(sig::stddev(p.y_hat), 1.0, 1e-12);
    for (std::size_t j = 0; j < y.size(); ++j) EXPECT_NEAR(p.sigma_y * p.y_hat[j], y[j], 1e-12 * std::abs(y[j]) + 1e-15);
  }
}

TEST(Fft, MatchesNaiveDft) {
  Rng rng(17);
  for (std::size_t n : {1u, 2u, 8u, 64u, 12u, 30u}) {
    const auto x = random_vector(n, rng);
    const auto fast = sig::fft_real(x);
    const auto ref = naive_dft(x);
    for (std::size_t k = 0; k < n; ++k) EXPECT_LT(std::abs(fast[k] - ref[k]), 1e-10) << "n=" << n << " k=" << k;
  }
}

TEST(Fft, InverseRoundTrip) {
  Rng rng(19);
  const auto x = random_vector(1024, rng);
  const auto back = sig::ifft(sig::fft_real(x));
  for (std::size_t t = 0; t < x.size(); ++t) EXPECT_NEAR(back[t].real(), x[t], 1e-12);
}

TEST(Psd, ZeroEpoch) {
  const auto p = sig::psd(std::vector<double>(1024, 0.0));
  EXPECT_EQ(p.power.size(), 513u);
  for (double v : p.power) EXPECT_EQ(v, 0.0);
  EXPECT_DOUBLE_EQ(p.bin_width, 0.5);
}

TEST(Psd, SinusoidAtBinFrequency) {
  const std::size_t n = 1024, k0 = 40;
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = std::sin(2.0 * std::numbers::pi * k0 * t / n);
  const auto p = sig::psd(x);
  const double peak = p.power[k0];
  for (std::size_t k = 0; k < p.power.size(); ++k) {
    if (k != k0) {
      EXPECT_LT(p.power[k], 1e-12 * peak) << "bin " << k;
    }
  }
}

TEST(Psd, ParsevalOnRandomEpochs) {
  Rng rng(23);
  for (std::size_t n : {1024u, 1023u, 100u, 2u}) {
    const auto x = random_vector(n, rng, 5.0);
    const auto p = sig::psd(x, 512.0);
    double s = 0.0;
    for (double v : p.power) s += v;
    double ms = 0.0;
    for (double v : x) ms += v * v;
    ms /= static_cast<double>(n);
    EXPECT_LT(std::abs(s * p.bin_width - ms) / ms, 1e-9) << "n=" << n;
    EXPECT_EQ(p.power.size(), n / 2 + 1);
  }
  EXPECT_THROW(sig::psd(std::vector<double>{1.0}), eegdn::LengthError);
}

TEST(Rrmse, TimeDomainExamples) {
  Rng rng(29);
  const auto x = random_vector(512, rng);
  std::vector<double> zeros(x.size(), 0.0), twice(x);
  for (double& v : twice) v *= 2.0;
  EXPECT_EQ(sig::rrmse_t(x, x), 0.0);
  EXPECT_NEAR(sig::rrmse_t(zeros, x), 1.0, 1e-12);
  EXPECT_NEAR(sig::rrmse_t(twice, x), 1.0, 1e-12);
  EXPECT_THROW(sig::rrmse_t(x, zeros), eegdn::DegenerateTruthError);

  auto nudged = x;
  nudged[7] += 1e-3;
  EXPECT_GT(sig::rrmse_t(nudged, x), 0.0);
}

TEST(Rrmse, SpectralExamples) {
  Rng rng(31);
  const auto x = random_vector(1024, rng);
  std::vector<double> zeros(x.size(), 0.0), neg(x);
  for (double& v : neg) v = -v;
  EXPECT_EQ(sig::rrmse_f(x, x), 0.0);
  EXPECT_NEAR(sig::rrmse_f(zeros, x), 1.0, 1e-12);
  EXPECT_NEAR(sig::rrmse_f(neg, x), 0.0, 1e-12);
  EXPECT_THROW(sig::rrmse_f(x, zeros), eegdn::DegenerateTruthError);
}

TEST(Cc, ExamplesAndAffineInvariance) {
  Rng rng(37);
  const auto x = random_vector(1024, rng);
  std::vector<double> neg(x), affine(x);
  for (double& v : neg) v = -v;
  for (double& v : affine) v = 3.5 * v - 12.0;
  EXPECT_NEAR(sig::cc(x, x), 1.0, 1e-12);
  EXPECT_NEAR(sig::cc(neg, x), -1.0, 1e-12);
  EXPECT_NEAR(sig::cc(affine, x), 1.0, 1e-12);
  EXPECT_THROW(sig::cc(std::vector<double>(1024, 2.0), x), eegdn::DegenerateVarianceError);

  for (int i = 0; i < 50; ++i) {
    const auto a = random_vector(64, rng);
    const auto b = random_vector(64, rng);
    const double r = sig::cc(a, b);
    EXPECT_LE(std::abs(r), 1.0);
    auto a2 = a;
    const double scale = eegdn::uniform(rng, 0.01, 100.0), shift = eegdn::uniform(rng, -50, 50);
    for (double& v : a2) v = scale * v + shift;
    EXPECT_NEAR(sig::cc(a2, b), r, 1e-12);
  }
}
