#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "eegdn/engine/layers.hpp"
#include "eegdn/error.hpp"

namespace eegdn::train {

struct RmspropConfig {
  double learning_rate = 5e-5;
  double decay = 0.9;
  double epsilon = 1e-7;
};

/// Plain RMSprop (no momentum, no centering):
///   a <- decay * a + (1 - decay) * g^2
///   w <- w - learning_rate * g / (sqrt(a) + epsilon)
class Rmsprop {
 public:
  Rmsprop() = default;
  Rmsprop(const std::vector<engine::LayerParams>& params, RmspropConfig config) : config_(config) {
    if (!(config.learning_rate >= 0.0) || !(config.decay >= 0.0 && config.decay < 1.0) || !(config.epsilon >= 0.0)) {
      throw ConfigError("rmsprop: need learning_rate >= 0, 0 <= decay < 1, epsilon >= 0");
    }
    accum_.reserve(params.size());
    for (const auto& p : params) accum_.push_back(p.zeros_like());
  }

  /// Applies one update. Gradients are validated first, so a non-finite gradient leaves
  /// both parameters and accumulators untouched. `names` labels layers in error messages.
  void step(std::vector<engine::LayerParams>& params, const std::vector<engine::LayerParams>& grads,
            const std::vector<std::string>& names = {}) {
    if (params.size() != accum_.size() || grads.size() != accum_.size()) {
      throw ShapeError("rmsprop: parameter/gradient layout does not match optimizer state");
    }
    for (std::size_t i = 0; i < grads.size(); ++i) {
      if (grads[i].weights.size() != params[i].weights.size() || grads[i].bias.size() != params[i].bias.size()) {
        throw ShapeError("rmsprop: gradient shape mismatch at layer " + label(names, i));
      }
      for (double g : grads[i].weights) {
        if (!std::isfinite(g)) throw NumericError("rmsprop: non-finite gradient in " + label(names, i) + ".weight");
      }
      for (double g : grads[i].bias) {
        if (!std::isfinite(g)) throw NumericError("rmsprop: non-finite gradient in " + label(names, i) + ".bias");
      }
    }
    for (std::size_t i = 0; i < grads.size(); ++i) {
      update(params[i].weights, grads[i].weights, accum_[i].weights);
      update(params[i].bias, grads[i].bias, accum_[i].bias);
    }
  }

  const std::vector<engine::LayerParams>& accumulators() const { return accum_; }
  const RmspropConfig& config() const { return config_; }

 private:
  void update(std::vector<double>& w, const std::vector<double>& g, std::vector<double>& a) const {
    const double beta = config_.decay;
    const double lr = config_.learning_rate;
    for (std::size_t j = 0; j < w.size(); ++j) {
      a[j] = beta * a[j] + (1.0 - beta) * g[j] * g[j];
      const double denom = std::sqrt(a[j]) + config_.epsilon;
      // g == 0 with a == 0 and epsilon == 0 would be 0/0; the step is zero there.
      if (g[j] != 0.0) w[j] -= lr * g[j] / denom;
    }
  }

  static std::string label(const std::vector<std::string>& names, std::size_t i) {
    return i < names.size() ? names[i] : "layer " + std::to_string(i);
  }

  RmspropConfig config_;
  std::vector<engine::LayerParams> accum_;
};

}  // namespace eegdn::train
