#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "eegdn/error.hpp"

namespace eegdn::train {

struct LossAndGrad {
  double loss = 0.0;
  std::vector<double> grad;
};

/// Mean squared error over the N samples of one epoch and its gradient (2/N)(pred - target).
inline LossAndGrad mse_loss(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) {
    throw ShapeError("mse_loss: length mismatch (" + std::to_string(pred.size()) + " vs " +
                     std::to_string(target.size()) + ")");
  }
  if (pred.empty()) throw LengthError("mse_loss: empty input");
  const double n = static_cast<double>(pred.size());
  LossAndGrad out;
  out.grad.resize(pred.size());
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    s += d * d;
    out.grad[i] = 2.0 * d / n;
  }
  out.loss = s / n;
  return out;
}

/// Loss only.
inline double mse(std::span<const double> pred, std::span<const double> target) {
  if (pred.size() != target.size()) throw ShapeError("mse: length mismatch");
  if (pred.empty()) throw LengthError("mse: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    s += d * d;
  }
  return s / static_cast<double>(pred.size());
}

}  // namespace eegdn::train
