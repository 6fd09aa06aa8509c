#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "eegdn/engine/sequential.hpp"
#include "eegdn/error.hpp"
#include "eegdn/random.hpp"
#include "eegdn/train/loss.hpp"

namespace eegdn::engine {

struct GradcheckOptions {
  double step = 1e-5;
  double tolerance = 1e-4;
  /// Coordinates sampled per parameter group; groups at or below this size are checked exhaustively.
  std::size_t max_coords_per_group = 48;
  /// Denominator floor, relative to the group's largest analytic gradient magnitude.
  double relative_floor = 1e-3;
  std::uint64_t seed = 0;
};

struct GroupCheck {
  std::string name;
  std::size_t checked = 0;
  /// Coordinates whose +-step perturbation flips a ReLU input sign; finite differences are invalid there.
  std::size_t skipped_kinks = 0;
  double max_rel_error = 0.0;
};

struct GradcheckReport {
  std::vector<GroupCheck> groups;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

namespace detail {

struct Probe {
  double loss = 0.0;
  /// Sign pattern of every ReLU input, used to detect perturbations that cross a kink.
  std::vector<std::uint8_t> relu_signs;
};

inline Probe probe(const Sequential& model, const Tensor2& input, std::span<const double> target) {
  Tape tape;
  const Tensor2 out = model.forward(input, tape);
  Probe p{train::mse(out.values(), target), {}};
  if (!std::isfinite(p.loss)) throw NumericError("gradcheck: non-finite loss");
  for (std::size_t i = 0; i < model.layers().size(); ++i) {
    if (model.layers()[i].spec.kind != LayerKind::relu) continue;
    for (double v : tape[i].peek()->values()) p.relu_signs.push_back(v > 0.0 ? 1 : 0);
  }
  return p;
}

inline std::vector<std::size_t> pick_coords(std::size_t n, std::size_t max, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n <= max) return idx;
  // Partial Fisher-Yates: first `max` entries form a uniform sample without replacement.
  for (std::size_t i = 0; i < max; ++i) {
    const auto j = i + static_cast<std::size_t>(uniform_index(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(max);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace detail

/// Compares backprop gradients of the MSE loss against central finite differences for
/// every parameter tensor and for the input. Relative error per coordinate is
/// |a - n| / max(|a|, |n|, relative_floor * max_j |a_j|).
inline GradcheckReport gradcheck(const Sequential& model, const Tensor2& input, std::span<const double> target,
                                 const GradcheckOptions& opt = {}) {
  Sequential work = model;
  Tensor2 x = input;

  Tape tape;
  const Tensor2 out = work.forward(x, tape);
  const auto lg = train::mse_loss(out.values(), target);
  if (!std::isfinite(lg.loss)) throw NumericError("gradcheck: non-finite loss");
  Gradients grads = work.zero_gradients();
  const Tensor2 grad_in = work.backward(Tensor2(out.shape(), lg.grad), tape, grads);
  const auto base_sig = detail::probe(work, x, target).relu_signs;

  Rng rng(opt.seed);
  GradcheckReport report;
  report.tolerance = opt.tolerance;

  const auto check_group = [&](const std::string& name, std::vector<double>& values, std::span<const double> analytic) {
    GroupCheck gc{name};
    double scale = 0.0;
    for (double a : analytic) scale = std::max(scale, std::abs(a));
    const double floor = std::max(opt.relative_floor * scale, 1e-300);
    for (std::size_t j : detail::pick_coords(values.size(), opt.max_coords_per_group, rng)) {
      const double orig = values[j];
      values[j] = orig + opt.step;
      const auto plus = detail::probe(work, x, target);
      values[j] = orig - opt.step;
      const auto minus = detail::probe(work, x, target);
      values[j] = orig;
      if (plus.relu_signs != base_sig || minus.relu_signs != base_sig) {
        ++gc.skipped_kinks;
        continue;
      }
      const double numeric = (plus.loss - minus.loss) / (2.0 * opt.step);
      const double a = analytic[j];
      const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
      gc.max_rel_error = std::max(gc.max_rel_error, err);
      ++gc.checked;
    }
    report.groups.push_back(gc);
  };

  for (std::size_t i = 0; i < work.layers().size(); ++i) {
    if (!work.layers()[i].spec.has_params()) continue;
    const std::string& lname = work.layers()[i].name;
    check_group(lname + ".weight", work.params()[i].weights, grads[i].weights);
    check_group(lname + ".bias", work.params()[i].bias, grads[i].bias);
  }
  check_group("input", x.data(), grad_in.values());

  report.passed = true;
  for (const auto& g : report.groups) {
    report.max_rel_error = std::max(report.max_rel_error, g.max_rel_error);
    if (!(g.max_rel_error < opt.tolerance)) report.passed = false;
  }
  return report;
}

}  // namespace eegdn::engine
