#include "roughreflect/matrix_map.hpp"

#include <algorithm>

#include "roughreflect/errors.hpp"

namespace roughreflect {

MatrixMap MatrixMap::constant(std::size_t in_dim, std::size_t rows, std::size_t cols, std::vector<double> c) {
  if (c.size() != rows * cols) throw ArgumentError("constant map: value has the wrong size");
  MatrixMap m;
  m.in_dim = in_dim;
  m.rows = rows;
  m.cols = cols;
  m.value = [c](std::span<const double>, std::span<double> out) { std::copy(c.begin(), c.end(), out.begin()); };
  m.jacobian = [](std::span<const double>, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); };
  return m;
}

MatrixMap MatrixMap::scalar(std::function<double(double)> f, std::function<double(double)> df) {
  MatrixMap m;
  m.value = [f](std::span<const double> u, std::span<double> out) { out[0] = f(u[0]); };
  m.jacobian = [df](std::span<const double> u, std::span<double> out) { out[0] = df(u[0]); };
  return m;
}

MatrixMap scaled(const MatrixMap& f, double c) {
  MatrixMap m = f;
  m.value = [f, c](std::span<const double> u, std::span<double> out) {
    f.value(u, out);
    for (double& v : out) v *= c;
  };
  m.jacobian = [f, c](std::span<const double> u, std::span<double> out) {
    f.jacobian(u, out);
    for (double& v : out) v *= c;
  };
  return m;
}

}  // namespace roughreflect
