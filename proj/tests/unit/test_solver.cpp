#include <cmath>

#include "doctest.h"
#include "roughreflect/errors.hpp"
#include "roughreflect/solver.hpp"

using namespace roughreflect;

namespace {

GridPath history(std::size_t n, std::vector<double> v) {
  GridPath p(Grid::history(1.0, n), v.size());
  for (std::size_t k = 0; k < p.size(); ++k)
    for (std::size_t i = 0; i < v.size(); ++i) p(k, i) = v[i];
  return p;
}

GridPath sine(const Grid& g, std::size_t m, double w) {
  return GridPath::from_function(g, m, [w](double t, std::span<double> v) {
    for (std::size_t b = 0; b < v.size(); ++b) v[b] = std::sin(w * (b + 1) * t);
  });
}

}  // namespace

TEST_CASE("diffusion catalog norms") {
  const Diffusion z = sigma_zero(2, 1);
  CHECK(z.zero);
  CHECK(z.bounded());
  const Diffusion c = sigma_constant(1, 2, {3.0, 4.0});
  CHECK(c.constant);
  CHECK(c.sup == doctest::Approx(5.0));
  CHECK(c.sup_prime == 0.0);
  const Diffusion b = sigma_bounded(1, 1, {2.0});
  CHECK(b.bounded());
  CHECK(b.sup == doctest::Approx(2.0));
  CHECK(b.map(std::vector<double>{0.0})[0] == doctest::Approx(2.0));
  const Diffusion l = sigma_linear(1, 1, {1.0}, {0.5});
  CHECK_FALSE(l.bounded());
  CHECK_THROWS(sigma_constant(2, 2, {1.0}));
}

TEST_CASE("drift evaluation against its definition") {
  const Grid g = Grid::delay_grid(1.0, 8, 2.0);
  const GridPath x = GridPath::from_function(g, 1, [](double t, std::span<double> v) { v[0] = t * t; });
  const Drift b = Drift::delayed({0.5}, {-1.0}, {2.0}, Phi::tanh);
  std::vector<double> out(1);
  const std::size_t k = g.index(1.5);
  drift_eval(b, x, k, out);
  CHECK(out[0] == doctest::Approx(0.5 - std::tanh(2.25) + 2.0 * std::tanh(0.25)));
  CHECK(b.bounded());
  CHECK(b.sup() == doctest::Approx(3.5));
  CHECK(b.lipschitz() == doctest::Approx(3.0));
  CHECK_FALSE(Drift::instantaneous({0.0}, {1.0}).bounded());
}

TEST_CASE("running-sup functional") {
  const Grid g = Grid::delay_grid(1.0, 4, 1.0);
  const GridPath x = GridPath::from_function(g, 1, [](double t, std::span<double> v) { v[0] = -2.0 * t; });
  Drift b = Drift::zero(1);
  b.kappa = {1.0};
  b.functional = HistoryFunctional::running_sup;
  std::vector<double> out(1);
  drift_eval(b, x, g.index(0.5), out);
  CHECK(out[0] == doctest::Approx(2.0));
}

TEST_CASE("zero coefficients keep the initial value") {
  Coefficients c;
  c.eta = history(16, {0.7, 0.0});
  c.sigma = sigma_zero(2, 1);
  c.drift = Drift::zero(2);
  c.frac = FracParams::with_default_alpha(0.4, 1.0);
  const Grid g = Grid::delay_grid(1.0, 16, 2.0);
  const Solution s = solve(c, smooth_driver(sine(g, 1, 3.0), c.eta));
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(s.x(k, 0) == 0.7);
    CHECK(s.x(k, 1) == 0.0);
  }
  CHECK(check_solution(s, c).pass);
}

TEST_CASE("reflected constant-sigma solution is the reflection of the free path") {
  Coefficients c;
  c.eta = history(64, {0.2});
  c.sigma = sigma_constant(1, 1, {1.0});
  c.drift = Drift::zero(1);
  c.frac = FracParams::with_default_alpha(0.4, 1.0);
  const Grid g = Grid::delay_grid(1.0, 64, 2.0);
  const GridPath y = sine(g, 1, 6.0);
  const Solution s = solve(c, smooth_driver(y, c.eta));
  double z = 0.0;
  for (std::size_t k = g.index(0.0); k < g.size(); ++k) {
    const double xi = 0.2 + y(k, 0);
    z = std::max(z, -xi);
    CHECK(s.x(k, 0) == doctest::Approx(xi + z).epsilon(1e-13));
  }
}

TEST_CASE("drift trapezoid matches the cumulative drift of a solution") {
  Coefficients c;
  c.eta = history(32, {1.0});
  c.sigma = sigma_bounded(1, 1, {0.5});
  c.drift = Drift::delayed({0.1}, {-0.5}, {0.3}, Phi::tanh);
  c.frac = FracParams::with_default_alpha(0.4, 1.0);
  const Grid g = Grid::delay_grid(1.0, 32, 2.0);
  const Solution s = solve(c, smooth_driver(sine(g, 1, 4.0), c.eta));
  const std::size_t k0 = g.index(0.0);
  double acc = 0.0;
  std::vector<double> a(1), b(1);
  for (std::size_t k = k0; k + 1 < g.size(); ++k) {
    drift_eval(c.drift, s.x, k, a);
    drift_eval(c.drift, s.x, k + 1, b);
    acc += 0.5 * g.step() * (a[0] + b[0]);
    CHECK(s.drift(k + 1 - k0, 0) - s.drift(0, 0) == doctest::Approx(acc).epsilon(1e-9));
  }
  CHECK(s.residual <= 1e-9);
  const auto ch = check_solution(s, c);
  CHECK(ch.pass);
  CHECK(ch.skorokhod_consistent);
}

TEST_CASE("window bounds") {
  const Grid g = Grid::delay_grid(1.0, 4, 2.5);
  CHECK(window_bounds(g, 0).first == 0.0);
  CHECK(window_bounds(g, 0).second == doctest::Approx(1.0));
  CHECK(window_bounds(g, 2).second == doctest::Approx(2.5));
  CHECK(window_bounds(g, 1, 1.5).second == doctest::Approx(1.5));
}

TEST_CASE("non-contraction is reported with diagnostics") {
  Coefficients c;
  c.eta = history(16, {1.0});
  c.sigma = sigma_zero(1, 1);
  c.drift = Drift::instantaneous({0.0}, {3.0});
  c.frac = FracParams::with_default_alpha(0.4, 1.0);
  const Grid g = Grid::delay_grid(1.0, 16, 1.0);
  SolverConfig cfg;
  cfg.max_iter = 3;
  try {
    solve(c, smooth_driver(GridPath(g, 1), c.eta), cfg);
    FAIL("expected NonContractionError");
  } catch (const NonContractionError& e) {
    CHECK(e.window() == 0);
    CHECK(e.change() > cfg.tol);
  }
}

TEST_CASE("a-priori bound requires bounded coefficients") {
  Coefficients c;
  c.eta = history(16, {1.0});
  c.sigma = sigma_linear(1, 1, {1.0}, {1.0});
  c.drift = Drift::zero(1);
  c.frac = FracParams::with_default_alpha(0.4, 1.0);
  const Grid g = Grid::delay_grid(1.0, 16, 2.0);
  const Driver d = smooth_driver(sine(g, 1, 2.0), c.eta);
  const Solution s = solve(c, d);
  CHECK_THROWS_AS(a_priori_bound(c, d, s, kCalibratedBoundConstant), ArgumentError);
}

TEST_CASE("a-priori bound is monotone in K") {
  Coefficients c;
  c.eta = history(32, {0.5});
  c.sigma = sigma_bounded(1, 1, {1.0});
  c.drift = Drift::delayed({0.2}, {}, {-0.5}, Phi::tanh);
  c.frac = FracParams::with_default_alpha(0.4, 1.0);
  const Grid g = Grid::delay_grid(1.0, 32, 3.0);
  const Driver d = smooth_driver(sine(g, 1, 2.0), c.eta);
  const Solution s = solve(c, d);
  const BoundReport a = a_priori_bound(c, d, s, 0.01);
  const BoundReport b = a_priori_bound(c, d, s, 0.02);
  CHECK(a.rhs <= b.rhs);
  CHECK(a.lhs == b.lhs);
  CHECK(a.minimal_K == doctest::Approx(b.minimal_K));
  CHECK(b.pass);
}
