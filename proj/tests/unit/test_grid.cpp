#include <cmath>

#include "doctest.h"
#include "roughreflect/errors.hpp"
#include "roughreflect/grid.hpp"

using namespace roughreflect;

TEST_CASE("delay grid is anchored at zero") {
  const Grid g = Grid::delay_grid(1.0, 8, 2.5);
  CHECK(g.step() == doctest::Approx(0.125));
  CHECK(g.first() == -8);
  CHECK(g.last() == 20);
  CHECK(g.t0() == doctest::Approx(-1.0));
  CHECK(g.t1() == doctest::Approx(2.5));
  CHECK(g.windows() == 3);
  CHECK(g.lattice(0.5) == 4);
  CHECK(g.index(0.0) == 8);
  CHECK(g.lag_of(1.0) == 8);
}

TEST_CASE("off-lattice times are rejected") {
  const Grid g = Grid::delay_grid(1.0, 8, 1.0);
  CHECK_THROWS_AS(g.lattice(0.1), AlignmentError);
  CHECK_THROWS_AS(g.index(3.0), RangeError);
  CHECK_THROWS_AS(g.lag_of(0.3), AlignmentError);
}

TEST_CASE("slicing and shifting are re-indexings") {
  const Grid g = Grid::delay_grid(1.0, 4, 2.0);
  const Grid s = g.slice(0, 4);
  CHECK(s.t0() == 0.0);
  CHECK(s.t1() == doctest::Approx(1.0));
  CHECK(s.size() == 5);
  const Grid t = s.shifted(4);
  CHECK(t.first() == 4);
  CHECK(t.size() == s.size());
}

TEST_CASE("path shift and restriction agree on the lattice") {
  const Grid g = Grid::delay_grid(1.0, 16, 2.0);
  const GridPath p = GridPath::from_function(g, 1, [](double t, std::span<double> v) { v[0] = t * t; });
  const GridPath q = shift_path(p, 1.0);
  CHECK(q.grid().t0() == doctest::Approx(0.0));
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double t = q.grid().time(k);
    CHECK(q(k, 0) == doctest::Approx((t - 1.0) * (t - 1.0)).epsilon(1e-15));
  }
  const GridPath r = p.restrict(0.5, 1.5);
  CHECK(r.size() == 17);
  CHECK(r(0, 0) == p.at(0.5)[0]);
  CHECK_THROWS_AS(p.at(3.0), RangeError);
}

TEST_CASE("Hölder norm of a linear path") {
  const Grid g = Grid::interval(0.0, 1.0, 64);
  const GridPath p = GridPath::from_function(g, 1, [](double t, std::span<double> v) { v[0] = 3.0 * t; });
  CHECK(holder_norm(p, 1.0).norm == doctest::Approx(3.0));
  // For beta < 1 the worst pair is the longest one.
  const HolderReport h = holder_norm(p, 0.4);
  CHECK(h.norm == doctest::Approx(3.0));
  CHECK(h.s == 0.0);
  CHECK(h.t == doctest::Approx(1.0));
}

TEST_CASE("sup norms") {
  const Grid g = Grid::interval(0.0, 1.0, 10);
  const GridPath p = GridPath::from_function(g, 2, [](double t, std::span<double> v) {
    v[0] = 3.0 * t;
    v[1] = 4.0 * t;
  });
  CHECK(sup_norm(p) == doctest::Approx(5.0));
  CHECK(sup_norm(p, 0.0, 0.5) == doctest::Approx(2.5));
  CHECK(weighted_sup_norm(p, 1.0, 0.0, 1.0) == doctest::Approx(5.0 * std::exp(-1.0)));
}

TEST_CASE("non-finite values are reported") {
  GridPath p(Grid::interval(0.0, 1.0, 4), 1);
  p(2, 0) = NAN;
  CHECK_THROWS_AS(p.require_finite(), DomainError);
}
