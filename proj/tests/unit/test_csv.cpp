#include <cmath>
#include <sstream>

#include "doctest.h"
#include "roughreflect/csv.hpp"
#include "roughreflect/tensor.hpp"

using namespace roughreflect;

TEST_CASE("path CSV round trip is exact") {
  const Grid g = Grid::delay_grid(1.0, 16, 2.0);
  const GridPath p = GridPath::from_function(g, 2, [](double t, std::span<double> v) {
    v[0] = std::sin(7.0 * t) / 3.0;
    v[1] = std::exp(t);
  });
  std::stringstream ss;
  write_path(ss, p);
  const GridPath q = read_path(ss);
  CHECK(q.grid() == p.grid());
  CHECK(q.values() == p.values());
}

TEST_CASE("field CSV round trip is exact") {
  const Grid g = Grid::interval(0.0, 1.0, 12);
  const GridPath x = GridPath::from_function(g, 1, [](double t, std::span<double> v) { v[0] = std::cos(t); });
  const TwoParamField xy = smooth_tensor(x, x);
  std::stringstream ss;
  write_field(ss, xy);
  const TwoParamField back = read_field(ss, 1, 1);
  CHECK(back.grid() == xy.grid());
  CHECK(back.data() == xy.data());
}

TEST_CASE("format_double round trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("malformed CSV is rejected") {
  std::stringstream ss("t,x\n0,1\n0.5,abc\n");
  CHECK_THROWS(read_path(ss));
}
