#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eegdn/engine/tensor.hpp"
#include "eegdn/error.hpp"

namespace eegdn::engine {

/// Trainable tensors of one layer.
///   conv1d: weights (C_out, C_in, K), bias (C_out)
///   dense:  weights (out_dim, in_dim), bias (out_dim)
/// Parameter-free layers carry empty vectors.
struct LayerParams {
  std::vector<std::size_t> weight_shape;
  std::vector<double> weights;
  std::vector<double> bias;

  std::size_t count() const { return weights.size() + bias.size(); }

  /// Zero-filled tensors with the same shapes.
  LayerParams zeros_like() const {
    return {weight_shape, std::vector<double>(weights.size(), 0.0), std::vector<double>(bias.size(), 0.0)};
  }

  friend bool operator==(const LayerParams&, const LayerParams&) = default;
};

/// Cached forward input of one layer. Recorded once by forward, taken once by backward.
class TapeSlot {
 public:
  void record(Tensor2 input) {
    cached_ = std::move(input);
    consumed_ = false;
  }

  Tensor2 take(const char* layer) {
    if (!cached_) {
      throw TapeError(std::string(layer) + " backward: " +
                      (consumed_ ? "tape already consumed" : "no forward recorded"));
    }
    Tensor2 t = std::move(*cached_);
    cached_.reset();
    consumed_ = true;
    return t;
  }

  /// Read-only view of the recorded input, or nullptr.
  const Tensor2* peek() const { return cached_ ? &*cached_ : nullptr; }
  bool recorded() const { return cached_.has_value(); }

 private:
  std::optional<Tensor2> cached_;
  bool consumed_ = false;
};

/// Input gradient together with the layer's parameter gradients.
struct LayerGrads {
  Tensor2 grad_input;
  LayerParams grad_params;
};

// ---------------------------------------------------------------------------
// conv1d: stride 1, zero-padded "same" cross-correlation, odd kernel K.
//   out[c, t] = bias[c] + sum_{i,k} w[c, i, k] * in[i, t + k - K/2]

inline LayerParams make_conv1d_params(std::size_t in_channels, std::size_t out_channels, std::size_t kernel) {
  return {{out_channels, in_channels, kernel},
          std::vector<double>(out_channels * in_channels * kernel, 0.0),
          std::vector<double>(out_channels, 0.0)};
}

namespace detail {

struct ConvDims {
  std::size_t out_channels, in_channels, kernel;
};

inline ConvDims conv_dims(const LayerParams& p) {
  if (p.weight_shape.size() != 3) throw ShapeError("conv1d: weight shape must have rank 3");
  ConvDims d{p.weight_shape[0], p.weight_shape[1], p.weight_shape[2]};
  if (d.kernel % 2 == 0) throw ShapeError("conv1d: kernel size must be odd");
  if (p.weights.size() != d.out_channels * d.in_channels * d.kernel || p.bias.size() != d.out_channels) {
    throw ShapeError("conv1d: parameter storage does not match weight shape");
  }
  return d;
}

}  // namespace detail

inline Tensor2 conv1d_forward(const Tensor2& input, const LayerParams& params) {
  const auto d = detail::conv_dims(params);
  if (input.channels() != d.in_channels) {
    throw ShapeError("conv1d: expected " + std::to_string(d.in_channels) + " input channels, got " +
                     std::to_string(input.channels()));
  }
  const std::size_t len = input.length();
  const auto pad = static_cast<std::ptrdiff_t>(d.kernel / 2);
  Tensor2 out(d.out_channels, len);
  for (std::size_t c = 0; c < d.out_channels; ++c) {
    auto o = out.row(c);
    std::fill(o.begin(), o.end(), params.bias[c]);
    for (std::size_t i = 0; i < d.in_channels; ++i) {
      const auto in = input.row(i);
      const double* w = &params.weights[(c * d.in_channels + i) * d.kernel];
      for (std::size_t k = 0; k < d.kernel; ++k) {
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(k) - pad;
        const std::size_t t0 = off < 0 ? static_cast<std::size_t>(-off) : 0;
        const std::size_t t1 = off > 0 ? len - std::min(len, static_cast<std::size_t>(off)) : len;
        const double wk = w[k];
        for (std::size_t t = t0; t < t1; ++t) o[t] += wk * in[t + off];
      }
    }
  }
  return out;
}

inline Tensor2 conv1d_forward(const Tensor2& input, const LayerParams& params, TapeSlot& tape) {
  Tensor2 out = conv1d_forward(input, params);
  tape.record(input);
  return out;
}

/// Accumulates (+=) weight and bias gradients into `grad_params`, returns the input gradient.
inline Tensor2 conv1d_backward(const Tensor2& grad_out, TapeSlot& tape, const LayerParams& params,
                               LayerParams& grad_params) {
  const Tensor2 input = tape.take("conv1d");
  const auto d = detail::conv_dims(params);
  const std::size_t len = input.length();
  if (grad_out.channels() != d.out_channels || grad_out.length() != len) {
    throw ShapeError("conv1d backward: gradient shape " + to_string(grad_out.shape()) + " does not match output");
  }
  const auto pad = static_cast<std::ptrdiff_t>(d.kernel / 2);
  Tensor2 grad_in(d.in_channels, len);
  for (std::size_t c = 0; c < d.out_channels; ++c) {
    const auto g = grad_out.row(c);
    double gb = 0.0;
    for (double v : g) gb += v;
    grad_params.bias[c] += gb;
    for (std::size_t i = 0; i < d.in_channels; ++i) {
      const auto in = input.row(i);
      auto gi = grad_in.row(i);
      const std::size_t base = (c * d.in_channels + i) * d.kernel;
      for (std::size_t k = 0; k < d.kernel; ++k) {
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(k) - pad;
        const std::size_t t0 = off < 0 ? static_cast<std::size_t>(-off) : 0;
        const std::size_t t1 = off > 0 ? len - std::min(len, static_cast<std::size_t>(off)) : len;
        const double wk = params.weights[base + k];
        double gw = 0.0;
        for (std::size_t t = t0; t < t1; ++t) {
          gw += g[t] * in[t + off];
          gi[t + off] += wk * g[t];
        }
        grad_params.weights[base + k] += gw;
      }
    }
  }
  return grad_in;
}

inline LayerGrads conv1d_backward(const Tensor2& grad_out, TapeSlot& tape, const LayerParams& params) {
  LayerGrads g{Tensor2{}, params.zeros_like()};
  g.grad_input = conv1d_backward(grad_out, tape, params, g.grad_params);
  return g;
}

// ---------------------------------------------------------------------------
// relu

inline Tensor2 relu_forward(const Tensor2& input) {
  Tensor2 out = input;
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  return out;
}

inline Tensor2 relu_forward(const Tensor2& input, TapeSlot& tape) {
  Tensor2 out = relu_forward(input);
  tape.record(input);
  return out;
}

inline Tensor2 relu_backward(const Tensor2& grad_out, TapeSlot& tape) {
  const Tensor2 input = tape.take("relu");
  if (grad_out.shape() != input.shape()) throw ShapeError("relu backward: gradient shape mismatch");
  Tensor2 grad_in = grad_out;
  auto gi = grad_in.values();
  const auto in = input.values();
  for (std::size_t j = 0; j < gi.size(); ++j) {
    if (!(in[j] > 0.0)) gi[j] = 0.0;
  }
  return grad_in;
}

// ---------------------------------------------------------------------------
// avgpool2: non-overlapping windows of two samples.

inline Tensor2 avgpool2_forward(const Tensor2& input) {
  if (input.length() % 2 != 0) {
    throw ShapeError("avgpool2: input length " + std::to_string(input.length()) + " is odd");
  }
  Tensor2 out(input.channels(), input.length() / 2);
  for (std::size_t c = 0; c < input.channels(); ++c) {
    const auto in = input.row(c);
    auto o = out.row(c);
    for (std::size_t t = 0; t < o.size(); ++t) o[t] = 0.5 * (in[2 * t] + in[2 * t + 1]);
  }
  return out;
}

inline Tensor2 avgpool2_forward(const Tensor2& input, TapeSlot& tape) {
  Tensor2 out = avgpool2_forward(input);
  tape.record(Tensor2(input.channels(), input.length(), std::vector<double>(input.size())));
  return out;
}

inline Tensor2 avgpool2_backward(const Tensor2& grad_out, TapeSlot& tape) {
  const Tensor2 input = tape.take("avgpool2");
  if (grad_out.channels() != input.channels() || grad_out.length() * 2 != input.length()) {
    throw ShapeError("avgpool2 backward: gradient shape mismatch");
  }
  Tensor2 grad_in(input.shape());
  for (std::size_t c = 0; c < grad_out.channels(); ++c) {
    const auto g = grad_out.row(c);
    auto gi = grad_in.row(c);
    for (std::size_t t = 0; t < g.size(); ++t) {
      gi[2 * t] = 0.5 * g[t];
      gi[2 * t + 1] = 0.5 * g[t];
    }
  }
  return grad_in;
}

// ---------------------------------------------------------------------------
// flatten: C x T -> 1 x (C*T), channel-major (all of channel 0, then channel 1, ...).

inline Tensor2 flatten_forward(const Tensor2& input) { return input.reshaped({1, input.size()}); }

inline Tensor2 flatten_forward(const Tensor2& input, TapeSlot& tape) {
  tape.record(Tensor2(input.channels(), input.length(), std::vector<double>(input.size())));
  return flatten_forward(input);
}

inline Tensor2 flatten_backward(const Tensor2& grad_out, TapeSlot& tape) {
  const Tensor2 input = tape.take("flatten");
  if (grad_out.size() != input.size()) throw ShapeError("flatten backward: gradient size mismatch");
  return grad_out.reshaped(input.shape());
}

// ---------------------------------------------------------------------------
// dense: out = W * in + b over the flattened input, linear (no activation).

inline LayerParams make_dense_params(std::size_t in_dim, std::size_t out_dim) {
  return {{out_dim, in_dim}, std::vector<double>(out_dim * in_dim, 0.0), std::vector<double>(out_dim, 0.0)};
}

namespace detail {

inline std::pair<std::size_t, std::size_t> dense_dims(const LayerParams& p) {
  if (p.weight_shape.size() != 2) throw ShapeError("dense: weight shape must have rank 2");
  const std::size_t out = p.weight_shape[0], in = p.weight_shape[1];
  if (p.weights.size() != out * in || p.bias.size() != out) {
    throw ShapeError("dense: parameter storage does not match weight shape");
  }
  return {out, in};
}

}  // namespace detail

inline Tensor2 dense_forward(const Tensor2& input, const LayerParams& params) {
  const auto [out_dim, in_dim] = detail::dense_dims(params);
  if (input.size() != in_dim) {
    throw ShapeError("dense: expected input size " + std::to_string(in_dim) + ", got " + std::to_string(input.size()));
  }
  const auto in = input.values();
  Tensor2 out(1, out_dim);
  for (std::size_t o = 0; o < out_dim; ++o) {
    const double* w = &params.weights[o * in_dim];
    double acc = params.bias[o];
    for (std::size_t j = 0; j < in_dim; ++j) acc += w[j] * in[j];
    out(0, o) = acc;
  }
  return out;
}

inline Tensor2 dense_forward(const Tensor2& input, const LayerParams& params, TapeSlot& tape) {
  Tensor2 out = dense_forward(input, params);
  tape.record(input);
  return out;
}

inline Tensor2 dense_backward(const Tensor2& grad_out, TapeSlot& tape, const LayerParams& params,
                              LayerParams& grad_params) {
  const Tensor2 input = tape.take("dense");
  const auto [out_dim, in_dim] = detail::dense_dims(params);
  if (grad_out.size() != out_dim) throw ShapeError("dense backward: gradient size mismatch");
  const auto in = input.values();
  const auto g = grad_out.values();
  Tensor2 grad_in(input.shape());
  auto gi = grad_in.values();
  for (std::size_t o = 0; o < out_dim; ++o) {
    const double go = g[o];
    grad_params.bias[o] += go;
    if (go == 0.0) continue;
    const double* w = &params.weights[o * in_dim];
    double* gw = &grad_params.weights[o * in_dim];
    for (std::size_t j = 0; j < in_dim; ++j) {
      gw[j] += go * in[j];
      gi[j] += go * w[j];
    }
  }
  return grad_in;
}

inline LayerGrads dense_backward(const Tensor2& grad_out, TapeSlot& tape, const LayerParams& params) {
  LayerGrads g{Tensor2{}, params.zeros_like()};
  g.grad_input = dense_backward(grad_out, tape, params, g.grad_params);
  return g;
}

}  // namespace eegdn::engine
