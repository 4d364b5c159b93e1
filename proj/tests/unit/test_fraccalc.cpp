#include <cmath>

#include "doctest.h"
#include "roughreflect/errors.hpp"
#include "roughreflect/fraccalc.hpp"
#include "roughreflect/tensor.hpp"

using namespace roughreflect;

namespace {

GridPath on_unit(std::size_t n, double (*f)(double)) {
  return GridPath::from_function(Grid::interval(0.0, 1.0, n), 1, [f](double t, std::span<double> v) { v[0] = f(t); });
}

MatrixMap identity() {
  return MatrixMap::scalar([](double u) { return u; }, [](double) { return 1.0; });
}

}  // namespace

TEST_CASE("admissible alpha window") {
  const double a = FracParams::default_alpha(0.4, 1.0);
  CHECK(a > 0.6);
  CHECK(a < FracParams::alpha_upper(0.4, 1.0));
  CHECK(FracParams::alpha_upper(0.4, 1.0) == doctest::Approx(0.7));
  CHECK_NOTHROW(FracParams::with_default_alpha(0.4, 1.0).validate());
  CHECK_THROWS(FracParams({0.95, 0.4, 1.0}).validate());
  CHECK_THROWS(FracParams({0.6, 0.3, 1.0}).validate());
  CHECK_THROWS(FracParams({0.6, 0.5, 1.0}).validate());
}

TEST_CASE("Riemann-Liouville integral of a constant") {
  const GridPath one = on_unit(64, [](double) { return 1.0; });
  for (double alpha : {0.3, 0.65}) {
    const GridPath I = rl_integral(one, alpha, Side::left, 0.0, 1.0);
    for (std::size_t k = 0; k < I.size(); ++k) {
      const double t = I.grid().time(k);
      CHECK(I(k, 0) == doctest::Approx(std::pow(t, alpha) / std::tgamma(alpha + 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("left Weyl derivative of t^2 away from the base point") {
  const double alpha = 0.4;
  const GridPath f = on_unit(2048, [](double t) { return t * t; });
  const GridPath D = weyl_left(f, alpha, 0.0, 1.0);
  for (std::size_t k = 0; k < D.size(); ++k) {
    const double t = D.grid().time(k);
    if (t < 0.1) continue;
    const double exact = 2.0 / std::tgamma(3.0 - alpha) * std::pow(t, 2.0 - alpha);
    CHECK(D(k, 0) == doctest::Approx(exact).epsilon(1e-4));
  }
}

TEST_CASE("rough integral of x dx for a smooth path") {
  const GridPath x = on_unit(512, [](double t) { return std::sin(2.0 * t); });
  const TwoParamField xx = smooth_tensor(x, x);
  const double exact = 0.5 * std::sin(2.0) * std::sin(2.0);
  const auto frac = rough_integral(identity(), x, x, xx, FracParams::with_default_alpha(0.4, 1.0), 0.0, 1.0);
  CHECK(frac[0] == doctest::Approx(exact).epsilon(1e-4));
  const GridPath I = interpolated_rough_integral_cumulative(identity(), x, x, xx, 0.0, 1.0);
  // Linear integrand with the trapezoid lift: exact up to rounding.
  CHECK(I(I.size() - 1, 0) == doctest::Approx(exact).epsilon(1e-13));
  CHECK(I(0, 0) == 0.0);
}

TEST_CASE("cumulative and endpoint evaluations agree") {
  const GridPath x = on_unit(64, [](double t) { return std::cos(3.0 * t); });
  const GridPath y = on_unit(64, [](double t) { return t * t; });
  const TwoParamField xy = smooth_tensor(x, y);
  const MatrixMap f = MatrixMap::scalar([](double u) { return std::sin(u); }, [](double u) { return std::cos(u); });
  const FracParams p = FracParams::with_default_alpha(0.4, 1.0);
  const GridPath C = rough_integral_cumulative(f, x, y, xy, p, 0.0, 1.0);
  const auto e = rough_integral(f, x, y, xy, p, 0.0, 0.5);
  CHECK(C.at(0.5)[0] == doctest::Approx(e[0]).epsilon(1e-12));
}

TEST_CASE("integrals need a covering tensor") {
  const GridPath x = on_unit(16, [](double t) { return t; });
  const TwoParamField xy = smooth_tensor(x.restrict(0.0, 0.5), x.restrict(0.0, 0.5));
  CHECK_THROWS(interpolated_rough_integral_cumulative(identity(), x, x, xy, 0.0, 1.0));
}
