#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eegdn/engine/gradcheck.hpp"
#include "eegdn/engine/sequential.hpp"
#include "eegdn/random.hpp"
#include "eegdn/zoo/builders.hpp"

namespace eegdn {

struct GradcheckSuiteOptions {
  std::size_t seeds = 20;
  std::uint64_t base_seed = 0;
  double tolerance = 1e-4;
  double step = 1e-5;
  std::size_t max_coords_per_group = 48;
  std::size_t novel_cnn_input_length = 128;
  double novel_cnn_width_scale = 1.0 / 16.0;
  /// Negative control: flip the sign of one layer's weight gradient in every checked model.
  bool corrupt_backward = false;
};

struct SuiteCase {
  std::string name;
  std::uint64_t seed = 0;
  engine::GradcheckReport report;
};

struct SuiteResult {
  std::vector<SuiteCase> cases;
  bool passed = true;
  double max_rel_error = 0.0;
};

namespace detail {

inline engine::Tensor2 random_tensor(engine::Shape s, Rng& rng) {
  engine::Tensor2 t(s);
  for (double& v : t.values()) v = standard_normal(rng);
  return t;
}

inline void randomize_params(engine::Sequential& net, Rng& rng) {
  for (auto& p : net.params()) {
    for (double& w : p.weights) w = 0.5 * standard_normal(rng);
    for (double& b : p.bias) b = 0.1 * standard_normal(rng);
  }
}

}  // namespace detail

/// Single-layer models, one per layer kind, sized so every coordinate is checked.
inline std::vector<std::pair<std::string, engine::Sequential>> layer_kind_models(Rng& rng) {
  using engine::LayerSpec;
  using engine::Sequential;
  const std::size_t c_in = 1 + static_cast<std::size_t>(uniform_index(rng, 3));
  const std::size_t c_out = 1 + static_cast<std::size_t>(uniform_index(rng, 3));
  const std::size_t len = 2 * (2 + static_cast<std::size_t>(uniform_index(rng, 6)));
  std::vector<std::pair<std::string, Sequential>> out;
  out.emplace_back("conv1d", Sequential({c_in, len}, {LayerSpec::conv1d(c_out)}));
  out.emplace_back("relu", Sequential({c_in, len}, {LayerSpec::relu()}));
  out.emplace_back("avgpool2", Sequential({c_in, len}, {LayerSpec::avgpool2()}));
  out.emplace_back("flatten", Sequential({c_in, len}, {LayerSpec::flatten()}));
  out.emplace_back("dense", Sequential({1, len}, {LayerSpec::dense(c_out + 2)}));
  for (auto& [name, net] : out) detail::randomize_params(net, rng);
  return out;
}

/// Runs every layer kind plus a scaled-down Novel CNN under `seeds` independent seeds.
inline SuiteResult run_gradcheck_suite(const GradcheckSuiteOptions& opt,
                                       const std::function<void(const SuiteCase&)>& on_case = {}) {
  SuiteResult result;
  engine::GradcheckOptions gopt;
  gopt.step = opt.step;
  gopt.tolerance = opt.tolerance;
  gopt.max_coords_per_group = opt.max_coords_per_group;

  const auto record = [&](std::string name, std::uint64_t seed, engine::GradcheckReport rep) {
    SuiteCase c{std::move(name), seed, std::move(rep)};
    result.max_rel_error = std::max(result.max_rel_error, c.report.max_rel_error);
    if (!c.report.passed) result.passed = false;
    if (on_case) on_case(c);
    result.cases.push_back(std::move(c));
  };

  for (std::size_t s = 0; s < opt.seeds; ++s) {
    const std::uint64_t seed = opt.base_seed + s;
    Rng rng(derive_seed(seed, 100));
    for (auto& [name, net] : layer_kind_models(rng)) {
      if (opt.corrupt_backward && net.layers()[0].spec.has_params()) net.inject_backward_fault(0);
      const auto input = detail::random_tensor(net.input_shape(), rng);
      const auto target = detail::random_tensor(net.output_shape(), rng);
      gopt.seed = derive_seed(seed, 101);
      record(name, seed, engine::gradcheck(net, input, target.values(), gopt));
    }

    auto g = zoo::build_novel_cnn(opt.novel_cnn_input_length, opt.novel_cnn_width_scale);
    zoo::init_params(g, derive_seed(seed, 102));
    if (opt.corrupt_backward) g.net.inject_backward_fault(0);
    const auto input = detail::random_tensor(g.net.input_shape(), rng);
    const auto target = detail::random_tensor(g.net.output_shape(), rng);
    gopt.seed = derive_seed(seed, 103);
    record("novel_cnn", seed, engine::gradcheck(g.net, input, target.values(), gopt));
  }
  return result;
}

}  // namespace eegdn
