#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "eegdn/data/pipeline.hpp"
#include "eegdn/engine/sequential.hpp"
#include "eegdn/error.hpp"
#include "eegdn/random.hpp"
#include "eegdn/signal/metrics.hpp"
#include "eegdn/train/loss.hpp"
#include "eegdn/train/rmsprop.hpp"

namespace eegdn::train {

struct TrainConfig {
  std::size_t epochs = 50;
  std::size_t batch_size = 40;
  double learning_rate = 5e-5;
  double decay = 0.9;
  double epsilon = 1e-7;
  std::uint64_t seed = 0;

  void validate() const {
    if (epochs < 1) throw ConfigError("train: epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (!(learning_rate >= 0.0)) throw ConfigError("train: learning rate must be >= 0");
    if (!(decay >= 0.0 && decay < 1.0)) throw ConfigError("train: decay must be in [0, 1)");
    if (!(epsilon >= 0.0)) throw ConfigError("train: epsilon must be >= 0");
  }
};

/// Per-epoch mean MSE on normalized signals.
struct LossCurve {
  std::vector<double> train;
  std::vector<double> validation;

  std::string to_csv() const {
    std::string out = "epoch,train_loss,val_loss\n";
    char buf[96];
    for (std::size_t e = 0; e < train.size(); ++e) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", e + 1, train[e], validation[e]);
      out += buf;
    }
    return out;
  }
};

using EpochCallback = std::function<void(std::size_t epoch, double train_loss, double val_loss)>;

inline std::vector<std::string> layer_names(const engine::Sequential& net) {
  std::vector<std::string> names;
  for (const auto& l : net.layers()) names.push_back(l.name);
  return names;
}

/// Mean MSE of the model over a dataset, in dataset order.
inline double mean_loss(const engine::Sequential& net, const data::MixedDataset& ds) {
  if (ds.empty()) throw LengthError("mean_loss: empty dataset");
  double total = 0.0;
  for (const auto& ex : ds.examples) {
    const auto out = net.forward(engine::Tensor2::row_vector(ex.y_hat));
    total += mse(out.values(), ex.x_hat);
  }
  return total / static_cast<double>(ds.size());
}

/// Mini-batch RMSprop on the mean-over-batch MSE. The example order is reshuffled every epoch
/// from a stream seeded by config.seed. The train loss of an epoch is the mean of the
/// per-example losses seen during that epoch; the validation loss is measured after it.
inline LossCurve train(engine::Sequential& net, const data::MixedDataset& train_set,
                       const data::MixedDataset& validation_set, const TrainConfig& config,
                       const EpochCallback& on_epoch = {}) {
  config.validate();
  if (train_set.empty()) throw LengthError("train: empty training set");
  if (validation_set.empty()) throw LengthError("train: empty validation set");
  const std::size_t len = net.input_shape().length;
  if (train_set.examples.front().y_hat.size() != len || validation_set.examples.front().y_hat.size() != len) {
    throw ShapeError("train: model input length " + std::to_string(len) + " does not match epoch length");
  }

  Rmsprop opt(net.params(), {config.learning_rate, config.decay, config.epsilon});
  const auto names = layer_names(net);
  Rng rng(config.seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> example_loss(train_set.size());

  LossCurve curve;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t start = 0, batch = 0; start < order.size(); start += config.batch_size, ++batch) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      const double inv_batch = 1.0 / static_cast<double>(stop - start);
      engine::Gradients grads = net.zero_gradients();
      for (std::size_t b = start; b < stop; ++b) {
        const auto& ex = train_set.examples[order[b]];
        engine::Tape tape;
        const auto out = net.forward(engine::Tensor2::row_vector(ex.y_hat), tape);
        auto lg = mse_loss(out.values(), ex.x_hat);
        if (!std::isfinite(lg.loss)) {
          throw NumericError("train: non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                             std::to_string(batch + 1));
        }
        example_loss[order[b]] = lg.loss;
        for (double& g : lg.grad) g *= inv_batch;
        net.backward(engine::Tensor2(out.shape(), std::move(lg.grad)), tape, grads);
      }
      opt.step(net.params(), grads, names);
    }
    for (const auto& p : net.params()) {
      for (double v : p.weights) {
        if (!std::isfinite(v)) throw NumericError("train: non-finite parameter after epoch " + std::to_string(epoch + 1));
      }
    }
    // Summed in example-index order so the value does not depend on the shuffle.
    const double train_loss =
        std::accumulate(example_loss.begin(), example_loss.end(), 0.0) / static_cast<double>(example_loss.size());
    const double val_loss = mean_loss(net, validation_set);
    curve.train.push_back(train_loss);
    curve.validation.push_back(val_loss);
    if (on_epoch) on_epoch(epoch + 1, train_loss, val_loss);
  }
  return curve;
}

/// Runs the network on y / sigma_y and restores the original amplitude scale.
inline signal::Samples denoise(const engine::Sequential& net, std::span<const double> noisy) {
  if (noisy.size() != net.input_shape().length || net.input_shape().channels != 1) {
    throw ShapeError("denoise: epoch has " + std::to_string(noisy.size()) + " samples, model expects " +
                     std::to_string(net.input_shape().length));
  }
  const double sigma = signal::stddev(noisy);
  if (sigma == 0.0) throw ConstantSignalError("denoise: input epoch is constant");
  std::vector<double> scaled(noisy.begin(), noisy.end());
  for (double& v : scaled) v /= sigma;
  const auto out = net.forward(engine::Tensor2::row_vector(scaled));
  signal::Samples result(out.values().begin(), out.values().end());
  for (double& v : result) v *= sigma;
  return result;
}

}  // namespace eegdn::train
