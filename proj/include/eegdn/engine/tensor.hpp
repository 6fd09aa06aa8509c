#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "eegdn/error.hpp"

namespace eegdn::engine {

/// Activation map of `channels` rows by `length` samples, row-major.
struct Shape {
  std::size_t channels = 0;
  std::size_t length = 0;

  std::size_t size() const { return channels * length; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

inline std::string to_string(const Shape& s) {
  return std::to_string(s.channels) + "x" + std::to_string(s.length);
}

class Tensor2 {
 public:
  Tensor2() = default;
  Tensor2(std::size_t channels, std::size_t length, double fill = 0.0)
      : shape_{channels, length}, data_(channels * length, fill) {}
  explicit Tensor2(Shape shape, double fill = 0.0) : Tensor2(shape.channels, shape.length, fill) {}
  Tensor2(std::size_t channels, std::size_t length, std::vector<double> data)
      : shape_{channels, length}, data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
      throw ShapeError("Tensor2: data size " + std::to_string(data_.size()) + " does not match " + to_string(shape_));
    }
  }
  Tensor2(Shape shape, std::vector<double> data) : Tensor2(shape.channels, shape.length, std::move(data)) {}

  /// Builds a tensor from nested rows, e.g. {{1,2},{3,4}}.
  static Tensor2 from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t c = rows.size();
    const std::size_t t = c == 0 ? 0 : rows.begin()->size();
    std::vector<double> data;
    data.reserve(c * t);
    for (const auto& r : rows) {
      if (r.size() != t) throw ShapeError("Tensor2::from_rows: ragged rows");
      data.insert(data.end(), r.begin(), r.end());
    }
    return Tensor2(c, t, std::move(data));
  }

  /// 1 x n tensor over a copy of `samples`.
  static Tensor2 row_vector(std::span<const double> samples) {
    return Tensor2(1, samples.size(), std::vector<double>(samples.begin(), samples.end()));
  }

  const Shape& shape() const { return shape_; }
  std::size_t channels() const { return shape_.channels; }
  std::size_t length() const { return shape_.length; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t c, std::size_t t) { return data_[c * shape_.length + t]; }
  double operator()(std::size_t c, std::size_t t) const { return data_[c * shape_.length + t]; }

  std::span<double> row(std::size_t c) { return {data_.data() + c * shape_.length, shape_.length}; }
  std::span<const double> row(std::size_t c) const { return {data_.data() + c * shape_.length, shape_.length}; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  /// Same data reinterpreted with a new shape of equal size.
  Tensor2 reshaped(Shape s) const& { return Tensor2(s.channels, s.length, data_); }
  Tensor2 reshaped(Shape s) && { return Tensor2(s.channels, s.length, std::move(data_)); }

  bool all_finite() const {
    for (double v : data_) {
      if (!std::isfinite(v)) return false;
    }
    return true;
  }

  friend bool operator==(const Tensor2&, const Tensor2&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

}  // namespace eegdn::engine
