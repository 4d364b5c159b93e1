#include <random>

#include "doctest.h"
#include "roughreflect/errors.hpp"
#include "roughreflect/skorokhod.hpp"

using namespace roughreflect;

TEST_CASE("frozen reflection oracle") {
  const GridPath xi(Grid::interval(0.0, 1.0, 4), 1, {0.5, -0.2, 0.3, -0.6, 0.1});
  const auto dec = solve_skorokhod(xi);
  const std::vector<double> z{0.0, 0.2, 0.2, 0.6, 0.6};
  const std::vector<double> x{0.5, 0.0, 0.5, 0.0, 0.7};
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(dec.z(k, 0) == doctest::Approx(z[k]).epsilon(1e-15));
    CHECK(dec.x(k, 0) == doctest::Approx(x[k]).epsilon(1e-15));
  }
  CHECK(verify_decomposition(dec).pass);
}

TEST_CASE("reflection needs a nonnegative start") {
  const GridPath xi(Grid::interval(0.0, 1.0, 2), 1, {-0.1, 0.0, 0.0});
  CHECK_THROWS_AS(solve_skorokhod(xi), DomainError);
}

TEST_CASE("nonnegative paths are fixed points") {
  const GridPath xi(Grid::interval(0.0, 1.0, 3), 2, {0.0, 1.0, 0.5, 2.0, 0.1, 0.0, 3.0, 0.2});
  const auto dec = solve_skorokhod(xi);
  CHECK(dec.x.values() == xi.values());
  for (double v : dec.z.values()) CHECK(v == 0.0);
}

TEST_CASE("window-by-window reflection matches the global map") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  GridPath xi(Grid::interval(0.0, 1.0, 200), 2);
  for (std::size_t k = 1; k < xi.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) xi(k, i) = xi(k - 1, i) + 0.1 * nd(rng);
  const auto ref = solve_skorokhod(xi);
  GridPath x(xi.grid(), 2), z(xi.grid(), 2);
  x.point(0)[0] = xi(0, 0);
  x.point(0)[1] = xi(0, 1);
  reflect_in_place(xi, x, z, 1, 80);
  reflect_in_place(xi, x, z, 80);
  CHECK(x.values() == ref.x.values());
  CHECK(z.values() == ref.z.values());
}

TEST_CASE("Lipschitz and Hölder properties on random paths") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 20; ++rep) {
    GridPath a(Grid::interval(0.0, 1.0, 128), 3), b(Grid::interval(0.0, 1.0, 128), 3);
    for (std::size_t i = 0; i < 3; ++i) a(0, i) = b(0, i) = 0.1;
    for (std::size_t k = 1; k < a.size(); ++k)
      for (std::size_t i = 0; i < 3; ++i) {
        a(k, i) = a(k - 1, i) + 0.1 * nd(rng);
        b(k, i) = a(k, i) + 0.05 * nd(rng);
      }
    const auto r = lipschitz_probe(a, b);
    CHECK(r.ratio_z <= 1.0 + 1e-12);
    CHECK(r.ratio_x <= 2.0 + 1e-12);
    const auto h = regulator_holder_bound_probe(a, 0.4, 0.0, 1.0);
    CHECK(h.lhs <= h.rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("corrupted decompositions are caught") {
  const GridPath xi(Grid::interval(0.0, 1.0, 4), 1, {0.5, -0.2, 0.3, -0.6, 0.1});
  auto dec = solve_skorokhod(xi);
  dec.z(3, 0) = 0.1;
  dec.x(3, 0) = -0.5;
  const auto vr = verify_decomposition(dec);
  CHECK_FALSE(vr.pass);
  CHECK(vr.negativity == doctest::Approx(0.5));
  CHECK(vr.monotonicity == doctest::Approx(0.1));
}
