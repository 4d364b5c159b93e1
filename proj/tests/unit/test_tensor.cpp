#include <cmath>

#include "doctest.h"
#include "roughreflect/tensor.hpp"

using namespace roughreflect;

namespace {

GridPath smooth(const Grid& g, double w) {
  return GridPath::from_function(g, 2, [w](double t, std::span<double> v) {
    v[0] = std::sin(w * t);
    v[1] = t * std::cos(t);
  });
}

}  // namespace

TEST_CASE("trapezoid tensor satisfies Chen's identity on all triples") {
  const Grid g = Grid::interval(0.0, 1.0, 40);
  const GridPath x = smooth(g, 3.0), y = smooth(g, 5.0);
  ChenOptions o;
  o.full = true;
  const ChenReport r = check_multiplicative(x, y, smooth_tensor(x, y), o);
  CHECK(r.pass);
  CHECK(r.max_residual <= 1e-13);
  CHECK(r.triples == 41 * 40 * 39 / 6);
}

TEST_CASE("tensor of linear paths is the exact iterated integral") {
  const Grid g = Grid::interval(0.0, 1.0, 8);
  const GridPath x = GridPath::from_function(g, 1, [](double t, std::span<double> v) { v[0] = 2.0 * t; });
  const TwoParamField xx = smooth_tensor(x, x);
  for (std::size_t s = 0; s < g.size(); ++s)
    for (std::size_t t = s; t < g.size(); ++t) {
      const double d = 2.0 * (g.time(t) - g.time(s));
      CHECK(xx.at(s, t)[0] == doctest::Approx(0.5 * d * d).epsilon(1e-14));
    }
}

TEST_CASE("a tampered entry breaks Chen's identity") {
  const Grid g = Grid::interval(0.0, 1.0, 20);
  const GridPath x = smooth(g, 2.0);
  TwoParamField xy = smooth_tensor(x, x);
  xy.at(3, 11)[1] += 1e-3;
  ChenOptions o;
  o.full = true;
  const ChenReport r = check_multiplicative(x, x, xy, o);
  CHECK_FALSE(r.pass);
  CHECK(r.max_residual == doctest::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("shift_tensor is a pure re-indexing") {
  const Grid g = Grid::delay_grid(1.0, 8, 1.0);
  const GridPath x = smooth(g, 2.0);
  const TwoParamField xy = smooth_tensor(x, x);
  const TwoParamField sh = shift_tensor(xy, 1.0);
  CHECK(sh.lo() == doctest::Approx(xy.lo() + 1.0));
  CHECK(sh.hi() == doctest::Approx(xy.hi() + 1.0));
  CHECK(sh.data() == xy.data());
  CHECK(sh.at_times(0.5, 1.5)[0] == xy.at_times(-0.5, 0.5)[0]);
}

TEST_CASE("2beta constant of a zero tensor") {
  const Grid g = Grid::interval(0.0, 1.0, 8);
  const GridPath zero(g, 1);
  CHECK(two_beta_constant(smooth_tensor(zero, zero), 0.4).norm == 0.0);
}

TEST_CASE("refined lift at refinement 1 is the trapezoid lift") {
  const Grid g = Grid::interval(0.0, 1.0, 16);
  const GridPath x = smooth(g, 3.0), y = smooth(g, 1.0);
  const TwoParamField a = refined_lift(x, y, 1, 0.0, 1.0);
  const TwoParamField b = smooth_tensor(x, y);
  REQUIRE(a.data().size() == b.data().size());
  for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(a.data()[i] == doctest::Approx(b.data()[i]).epsilon(1e-14));
}
