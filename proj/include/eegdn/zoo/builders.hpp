#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eegdn/engine/sequential.hpp"
#include "eegdn/error.hpp"
#include "eegdn/random.hpp"

namespace eegdn::zoo {

using engine::LayerKind;
using engine::LayerSpec;
using engine::Sequential;

/// Feature maps per block of the full-size Novel CNN.
inline const std::vector<std::size_t> kNovelCnnWidths = {32, 64, 128, 256, 512, 1024, 2048};
inline constexpr std::size_t kNovelCnnPooledBlocks = 6;

struct ModelGraph {
  std::string arch;                  // "novel_cnn", "fcnn" or "custom"
  std::vector<std::size_t> widths;   // per-block feature maps (novel_cnn) or hidden widths (fcnn)
  double width_scale = 1.0;
  Sequential net;
};

/// Block widths after scaling; each must round to a whole channel count >= 1.
inline std::vector<std::size_t> novel_cnn_widths(double width_scale) {
  if (!(width_scale > 0.0) || width_scale * 32.0 < 1.0) {
    throw ShapeError("novel_cnn: width_scale * 32 must be >= 1");
  }
  std::vector<std::size_t> w;
  for (std::size_t base : kNovelCnnWidths) {
    const double scaled = static_cast<double>(base) * width_scale;
    w.push_back(static_cast<std::size_t>(std::llround(scaled)));
  }
  return w;
}

/// Seven conv blocks of (conv3, relu, conv3, relu), the first six closed by avgpool2,
/// the seventh by flatten, then a linear dense head back to input_len samples.
inline ModelGraph build_novel_cnn(std::size_t input_len, double width_scale = 1.0) {
  constexpr std::size_t divisor = std::size_t{1} << kNovelCnnPooledBlocks;
  if (input_len == 0 || input_len % divisor != 0) {
    throw ShapeError("novel_cnn: input length " + std::to_string(input_len) + " is not divisible by 64");
  }
  ModelGraph g{"novel_cnn", novel_cnn_widths(width_scale), width_scale, {}};
  std::vector<LayerSpec> specs;
  for (std::size_t b = 0; b < g.widths.size(); ++b) {
    specs.push_back(LayerSpec::conv1d(g.widths[b]));
    specs.push_back(LayerSpec::relu());
    specs.push_back(LayerSpec::conv1d(g.widths[b]));
    specs.push_back(LayerSpec::relu());
    specs.push_back(b + 1 < g.widths.size() ? LayerSpec::avgpool2() : LayerSpec::flatten());
  }
  specs.push_back(LayerSpec::dense(input_len));
  g.net = Sequential({1, input_len}, specs);
  return g;
}

/// Stand-in fully connected baseline: `hidden_layers` x (dense(hidden_width), relu), then linear dense(input_len).
/// A harness comparison point only; not any published benchmark architecture.
inline ModelGraph build_fcnn_baseline(std::size_t input_len, std::size_t hidden_layers, std::size_t hidden_width) {
  if (input_len == 0) throw ShapeError("fcnn: input length must be >= 1");
  if (hidden_layers > 0 && hidden_width == 0) throw ShapeError("fcnn: hidden width must be >= 1");
  ModelGraph g{"fcnn", std::vector<std::size_t>(hidden_layers, hidden_width), 1.0, {}};
  std::vector<LayerSpec> specs;
  for (std::size_t i = 0; i < hidden_layers; ++i) {
    specs.push_back(LayerSpec::dense(hidden_width));
    specs.push_back(LayerSpec::relu());
  }
  specs.push_back(LayerSpec::dense(input_len));
  g.net = Sequential({1, input_len}, specs);
  return g;
}

/// Input length at the start of each conv block (one entry per run of convs), e.g. 1024..16.
inline std::vector<std::size_t> block_lengths(const Sequential& net) {
  std::vector<std::size_t> out;
  bool in_block = false;
  for (const auto& l : net.layers()) {
    const bool is_conv = l.spec.kind == LayerKind::conv1d;
    if (is_conv && !in_block) out.push_back(l.input.length);
    if (l.spec.kind == LayerKind::avgpool2 || l.spec.kind == LayerKind::flatten) in_block = false;
    else if (is_conv) in_block = true;
  }
  return out;
}

/// Scaled-uniform fan-in initialization: w ~ U(-b, b), b = sqrt(6 / fan_in); biases zero.
/// Each layer draws from its own stream so layer order changes do not shift other layers.
inline void init_params(Sequential& net, std::uint64_t seed) {
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    auto& p = net.params()[i];
    if (p.weights.empty()) continue;
    std::size_t fan_in = 0;
    if (net.layers()[i].spec.kind == LayerKind::conv1d) {
      fan_in = p.weight_shape[1] * p.weight_shape[2];
    } else {
      fan_in = p.weight_shape[1];
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    Rng rng(derive_seed(seed, i));
    for (double& w : p.weights) w = uniform(rng, -bound, bound);
    std::fill(p.bias.begin(), p.bias.end(), 0.0);
  }
}

inline void init_params(ModelGraph& g, std::uint64_t seed) { init_params(g.net, seed); }

}  // namespace eegdn::zoo
