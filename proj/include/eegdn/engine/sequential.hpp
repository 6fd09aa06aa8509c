#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eegdn/engine/layers.hpp"
#include "eegdn/engine/tensor.hpp"
#include "eegdn/error.hpp"

namespace eegdn::engine {

enum class LayerKind : std::uint8_t { conv1d = 1, relu = 2, avgpool2 = 3, flatten = 4, dense = 5 };

inline const char* kind_name(LayerKind k) {
  switch (k) {
    case LayerKind::conv1d: return "conv1d";
    case LayerKind::relu: return "relu";
    case LayerKind::avgpool2: return "avgpool2";
    case LayerKind::flatten: return "flatten";
    case LayerKind::dense: return "dense";
  }
  return "unknown";
}

/// Declarative layer description. `units` is the output channel count for conv1d
/// and the output dimension for dense; unused otherwise.
struct LayerSpec {
  LayerKind kind = LayerKind::relu;
  std::size_t units = 0;
  std::size_t kernel = 0;

  static LayerSpec conv1d(std::size_t channels, std::size_t kernel = 3) { return {LayerKind::conv1d, channels, kernel}; }
  static LayerSpec relu() { return {LayerKind::relu, 0, 0}; }
  static LayerSpec avgpool2() { return {LayerKind::avgpool2, 0, 0}; }
  static LayerSpec flatten() { return {LayerKind::flatten, 0, 0}; }
  static LayerSpec dense(std::size_t units) { return {LayerKind::dense, units, 0}; }

  bool has_params() const { return kind == LayerKind::conv1d || kind == LayerKind::dense; }
  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

/// A spec bound to concrete input/output shapes.
struct Layer {
  LayerSpec spec;
  std::string name;
  Shape input;
  Shape output;
};

/// Per-layer forward inputs needed by backward. One tape per forward pass.
class Tape {
 public:
  explicit Tape(std::size_t layers = 0) : slots_(layers) {}
  TapeSlot& operator[](std::size_t i) { return slots_.at(i); }
  const TapeSlot& operator[](std::size_t i) const { return slots_.at(i); }
  std::size_t size() const { return slots_.size(); }

 private:
  std::vector<TapeSlot> slots_;
};

/// Gradients of every layer's parameters, same layout as Sequential::params().
using Gradients = std::vector<LayerParams>;

/// Resolves the output shape of `spec` applied to `in`; throws ShapeError if they do not compose.
inline Shape infer_output_shape(const LayerSpec& spec, const Shape& in, std::size_t index) {
  const auto where = [&] { return "layer " + std::to_string(index) + " (" + kind_name(spec.kind) + "): "; };
  if (in.size() == 0) throw ShapeError(where() + "empty input shape");
  switch (spec.kind) {
    case LayerKind::conv1d:
      if (spec.units == 0) throw ShapeError(where() + "zero output channels");
      if (spec.kernel == 0 || spec.kernel % 2 == 0) throw ShapeError(where() + "kernel size must be odd");
      return {spec.units, in.length};
    case LayerKind::relu:
      return in;
    case LayerKind::avgpool2:
      if (in.length % 2 != 0) {
        throw ShapeError(where() + "input length " + std::to_string(in.length) + " is odd");
      }
      return {in.channels, in.length / 2};
    case LayerKind::flatten:
      return {1, in.size()};
    case LayerKind::dense:
      if (spec.units == 0) throw ShapeError(where() + "zero output units");
      if (in.channels != 1) throw ShapeError(where() + "dense expects a flattened 1xN input, got " + to_string(in));
      return {1, spec.units};
  }
  throw ShapeError(where() + "unknown layer kind");
}

/// Sequential network over the fixed layer set. Shapes are validated at construction,
/// so forward/backward on a correctly sized input cannot fail on shape.
class Sequential {
 public:
  Sequential() = default;

  Sequential(Shape input_shape, const std::vector<LayerSpec>& specs) : input_shape_(input_shape) {
    if (specs.empty()) throw ShapeError("Sequential: no layers");
    Shape cur = input_shape;
    std::size_t conv_i = 0, dense_i = 0, relu_i = 0, pool_i = 0, flat_i = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      const Shape out = infer_output_shape(specs[i], cur, i);
      Layer layer{specs[i], {}, cur, out};
      LayerParams p;
      switch (specs[i].kind) {
        case LayerKind::conv1d:
          layer.name = "conv" + std::to_string(++conv_i);
          p = make_conv1d_params(cur.channels, specs[i].units, specs[i].kernel);
          break;
        case LayerKind::dense:
          layer.name = "dense" + std::to_string(++dense_i);
          p = make_dense_params(cur.size(), specs[i].units);
          break;
        case LayerKind::relu: layer.name = "relu" + std::to_string(++relu_i); break;
        case LayerKind::avgpool2: layer.name = "pool" + std::to_string(++pool_i); break;
        case LayerKind::flatten: layer.name = "flatten" + std::to_string(++flat_i); break;
      }
      layers_.push_back(std::move(layer));
      params_.push_back(std::move(p));
      cur = out;
    }
  }

  const Shape& input_shape() const { return input_shape_; }
  const Shape& output_shape() const { return layers_.back().output; }
  const std::vector<Layer>& layers() const { return layers_; }
  std::vector<LayerParams>& params() { return params_; }
  const std::vector<LayerParams>& params() const { return params_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.count();
    return n;
  }

  Gradients zero_gradients() const {
    Gradients g;
    g.reserve(params_.size());
    for (const auto& p : params_) g.push_back(p.zeros_like());
    return g;
  }

  /// Forward pass recording every layer's input on `tape`. Neither input nor parameters are modified.
  Tensor2 forward(const Tensor2& input, Tape& tape) const {
    check_input(input);
    tape = Tape(layers_.size());
    Tensor2 x = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const auto& p = params_[i];
      switch (layers_[i].spec.kind) {
        case LayerKind::conv1d: x = conv1d_forward(x, p, tape[i]); break;
        case LayerKind::relu: x = relu_forward(x, tape[i]); break;
        case LayerKind::avgpool2: x = avgpool2_forward(x, tape[i]); break;
        case LayerKind::flatten: x = flatten_forward(x, tape[i]); break;
        case LayerKind::dense: x = dense_forward(x, p, tape[i]); break;
      }
    }
    return x;
  }

  /// Inference-only forward pass.
  Tensor2 forward(const Tensor2& input) const {
    check_input(input);
    Tensor2 x = input;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      const auto& p = params_[i];
      switch (layers_[i].spec.kind) {
        case LayerKind::conv1d: x = conv1d_forward(x, p); break;
        case LayerKind::relu: x = relu_forward(x); break;
        case LayerKind::avgpool2: x = avgpool2_forward(x); break;
        case LayerKind::flatten: x = flatten_forward(x); break;
        case LayerKind::dense: x = dense_forward(x, p); break;
      }
    }
    return x;
  }

  /// Backpropagates `grad_output`, consuming `tape` and accumulating (+=) into `grads`.
  /// Returns the gradient with respect to the network input.
  Tensor2 backward(const Tensor2& grad_output, Tape& tape, Gradients& grads) const {
    if (tape.size() != layers_.size()) throw TapeError("Sequential backward: tape does not belong to this model");
    if (grads.size() != params_.size()) throw ShapeError("Sequential backward: gradient buffer layout mismatch");
    Tensor2 g = grad_output;
    for (std::size_t i = layers_.size(); i-- > 0;) {
      const auto& p = params_[i];
      std::vector<double> before;
      if (fault_layer_ && *fault_layer_ == i) before = grads[i].weights;
      switch (layers_[i].spec.kind) {
        case LayerKind::conv1d: g = conv1d_backward(g, tape[i], p, grads[i]); break;
        case LayerKind::relu: g = relu_backward(g, tape[i]); break;
        case LayerKind::avgpool2: g = avgpool2_backward(g, tape[i]); break;
        case LayerKind::flatten: g = flatten_backward(g, tape[i]); break;
        case LayerKind::dense: g = dense_backward(g, tape[i], p, grads[i]); break;
      }
      if (fault_layer_ && *fault_layer_ == i) {
        // Negate only this call's contribution: accumulated = before - contribution.
        for (std::size_t j = 0; j < grads[i].weights.size(); ++j) {
          grads[i].weights[j] = 2.0 * before[j] - grads[i].weights[j];
        }
      }
    }
    return g;
  }

  /// Debug hook: makes backward negate the weight gradient of `layer`.
  /// Exists so gradient checking has a negative control.
  void inject_backward_fault(std::optional<std::size_t> layer) { fault_layer_ = layer; }

 private:
  void check_input(const Tensor2& input) const {
    if (input.shape() != input_shape_) {
      throw ShapeError("Sequential: expected input " + to_string(input_shape_) + ", got " + to_string(input.shape()));
    }
  }

  Shape input_shape_;
  std::vector<Layer> layers_;
  std::vector<LayerParams> params_;
  std::optional<std::size_t> fault_layer_;
};

}  // namespace eegdn::engine
