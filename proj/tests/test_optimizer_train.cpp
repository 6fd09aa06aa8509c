#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "eegdn/data/pipeline.hpp"
#include "eegdn/data/synth.hpp"
#include "eegdn/train/loss.hpp"
#include "eegdn/train/rmsprop.hpp"
#include "eegdn/train/trainer.hpp"
#include "eegdn/zoo/builders.hpp"
#include "test_util.hpp"

using namespace eegdn::train;
using eegdn::engine::LayerParams;

namespace {

// One scalar weight, no bias.
std::vector<LayerParams> scalar_param(double w) {
  LayerParams p;
  p.weight_shape = {1};
  p.weights = {w};
  return {p};
}

std::vector<LayerParams> scalar_grad(double g) { return scalar_param(g); }

eegdn::zoo::ModelGraph identity_model(std::size_t len) {
  auto g = eegdn::zoo::build_fcnn_baseline(len, 0, 0);
  auto& p = g.net.params()[0];
  for (std::size_t i = 0; i < len; ++i) p.weights[i * len + i] = 1.0;
  return g;
}

eegdn::data::MixedDataset small_dataset(std::size_t len, std::size_t n, std::uint64_t seed) {
  eegdn::data::SynthOptions so;
  so.length = len;
  const auto corpus = eegdn::data::synth_corpus(n, n, seed, so);
  const auto pairs = eegdn::data::equalize_and_pair(corpus.eeg, corpus.emg, seed);
  return eegdn::data::build_training_set(corpus.eeg, corpus.emg, pairs, 1, -7.0, 2.0, seed);
}

}  // namespace

TEST(Mse, ExamplesAndGradient) {
  EXPECT_EQ(mse(std::vector<double>{1, 2}, std::vector<double>{1, 2}), 0.0);
  const auto lg = mse_loss(std::vector<double>{1, 3}, std::vector<double>{0, 0});
  EXPECT_DOUBLE_EQ(lg.loss, 5.0);
  EXPECT_DOUBLE_EQ(lg.grad[0], 1.0);
  EXPECT_DOUBLE_EQ(lg.grad[1], 3.0);
  EXPECT_THROW(mse(std::vector<double>{1}, std::vector<double>{1, 2}), eegdn::ShapeError);
  EXPECT_THROW(mse_loss(std::vector<double>{}, std::vector<double>{}), eegdn::LengthError);

  eegdn::Rng rng(3);
  auto p = eegdn::testing::random_vector(16, rng);
  const auto t = eegdn::testing::random_vector(16, rng);
  const auto g = mse_loss(p, t).grad;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double h = 1e-6, keep = p[i];
    p[i] = keep + h;
    const double up = mse(p, t);
    p[i] = keep - h;
    const double down = mse(p, t);
    p[i] = keep;
    EXPECT_NEAR((up - down) / (2 * h), g[i], 1e-8);
  }
}

TEST(Rmsprop, HandComputedSteps) {
  auto params = scalar_param(0.0);
  Rmsprop opt(params, {0.1, 0.9, 0.0});
  opt.step(params, scalar_grad(1.0));
  EXPECT_NEAR(opt.accumulators()[0].weights[0], 0.1, 1e-15);
  EXPECT_NEAR(params[0].weights[0], -0.316227766016837933, 1e-10);
  opt.step(params, scalar_grad(1.0));
  EXPECT_NEAR(opt.accumulators()[0].weights[0], 0.19, 1e-15);
  EXPECT_NEAR(params[0].weights[0], -0.545643499887399699, 1e-10);
}

TEST(Rmsprop, ZeroGradientLeavesParameters) {
  auto params = scalar_param(0.25);
  Rmsprop opt(params, {0.1, 0.9, 0.0});
  for (int i = 0; i < 5; ++i) opt.step(params, scalar_grad(0.0));
  EXPECT_EQ(params[0].weights[0], 0.25);
}

TEST(Rmsprop, NonFiniteGradientIsRejectedWithoutSideEffects) {
  auto params = scalar_param(1.0);
  Rmsprop opt(params, {});
  try {
    opt.step(params, scalar_grad(std::numeric_limits<double>::quiet_NaN()), {"dense1"});
    FAIL() << "expected NumericError";
  } catch (const eegdn::NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("dense1.weight"), std::string::npos);
  }
  EXPECT_EQ(params[0].weights[0], 1.0);
  EXPECT_EQ(opt.accumulators()[0].weights[0], 0.0);
  EXPECT_THROW(Rmsprop(params, {0.1, 1.0, 0.0}), eegdn::ConfigError);
}

TEST(Train, ZeroLearningRateKeepsParametersAndFlatCurve) {
  const auto ds = small_dataset(64, 12, 1);
  auto g = eegdn::zoo::build_novel_cnn(64, 1.0 / 16);
  eegdn::zoo::init_params(g, 2);
  const auto before = g.net.params();
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 5;
  cfg.learning_rate = 0.0;
  const auto curve = train(g.net, ds, ds, cfg);
  EXPECT_EQ(g.net.params(), before);
  ASSERT_EQ(curve.train.size(), 3u);
  for (std::size_t e = 1; e < 3; ++e) {
    EXPECT_EQ(curve.train[e], curve.train[0]);
    EXPECT_EQ(curve.validation[e], curve.validation[0]);
  }
  EXPECT_DOUBLE_EQ(curve.train[0], curve.validation[0]);
}

TEST(Train, SameSeedSameCurve) {
  const auto ds = small_dataset(64, 10, 4);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 4;
  cfg.learning_rate = 1e-3;
  cfg.seed = 11;
  LossCurve curves[2];
  std::vector<LayerParams> params[2];
  for (int r = 0; r < 2; ++r) {
    auto g = eegdn::zoo::build_novel_cnn(64, 1.0 / 16);
    eegdn::zoo::init_params(g, 5);
    curves[r] = train(g.net, ds, ds, cfg);
    params[r] = g.net.params();
  }
  EXPECT_EQ(curves[0].to_csv(), curves[1].to_csv());
  EXPECT_EQ(params[0], params[1]);
}

TEST(Train, OverfitsATinySet) {
  const auto ds = small_dataset(64, 8, 6);
  auto g = eegdn::zoo::build_fcnn_baseline(64, 1, 64);
  eegdn::zoo::init_params(g, 7);
  TrainConfig cfg;
  cfg.epochs = 150;
  cfg.batch_size = 8;
  cfg.learning_rate = 1e-3;
  const auto curve = train(g.net, ds, ds, cfg);
  EXPECT_LT(curve.train.back(), 0.1 * curve.train.front());
}

TEST(Train, RejectsBadInputs) {
  const auto ds = small_dataset(64, 10, 8);
  auto g = eegdn::zoo::build_fcnn_baseline(128, 0, 0);
  EXPECT_THROW(train(g.net, ds, ds, {}), eegdn::ShapeError);
  auto ok = eegdn::zoo::build_fcnn_baseline(64, 0, 0);
  EXPECT_THROW(train(ok.net, {}, ds, {}), eegdn::LengthError);
  TrainConfig bad;
  bad.batch_size = 0;
  EXPECT_THROW(train(ok.net, ds, ds, bad), eegdn::ConfigError);
}

TEST(Denoise, IdentityModelReturnsInput) {
  const auto g = identity_model(16);
  eegdn::Rng rng(9);
  const auto y = eegdn::testing::random_vector(16, rng, 30.0);
  const auto out = denoise(g.net, y);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(out[i], y[i], 1e-12 * std::abs(y[i]) + 1e-12);
}

TEST(Denoise, ScaleEquivariant) {
  auto g = eegdn::zoo::build_novel_cnn(64, 1.0 / 16);
  eegdn::zoo::init_params(g, 10);
  eegdn::Rng rng(11);
  const auto y = eegdn::testing::random_vector(64, rng);
  auto y5 = y;
  for (double& v : y5) v *= 5.0;
  const auto a = denoise(g.net, y);
  const auto b = denoise(g.net, y5);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b[i], 5.0 * a[i], 1e-9);
}

TEST(Denoise, RejectsConstantAndWrongLength) {
  const auto g = identity_model(8);
  EXPECT_THROW(denoise(g.net, std::vector<double>(8, 3.0)), eegdn::ConstantSignalError);
  EXPECT_THROW(denoise(g.net, std::vector<double>(9, 1.0)), eegdn::ShapeError);
}
