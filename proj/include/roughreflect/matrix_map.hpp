#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace roughreflect {

/// A C^1 map f: R^in_dim -> R^{rows x cols} (row-major) with its derivative.
/// The jacobian buffer holds d f / d u_i for i = 0..in_dim-1 stacked, i.e.
/// out[(i*rows + a)*cols + b] = d f_{ab} / d u_i.
struct MatrixMap {
  std::size_t in_dim = 1;
  std::size_t rows = 1;
  std::size_t cols = 1;
  std::function<void(std::span<const double>, std::span<double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> jacobian;

  std::size_t block() const noexcept { return rows * cols; }

  std::vector<double> operator()(std::span<const double> u) const {
    std::vector<double> out(block());
    value(u, out);
    return out;
  }

  /// f(u) = c.
  static MatrixMap constant(std::size_t in_dim, std::size_t rows, std::size_t cols, std::vector<double> c);
  /// Scalar-to-scalar map built from a function and its derivative.
  static MatrixMap scalar(std::function<double(double)> f, std::function<double(double)> df);
};

/// Scales a map by a constant factor.
MatrixMap scaled(const MatrixMap& f, double c);

}  // namespace roughreflect
