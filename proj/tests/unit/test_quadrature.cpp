#include <cmath>

#include "doctest.h"
#include "roughreflect/quadrature.hpp"

using namespace roughreflect;

namespace {

double weighted_sum(const PowerWeights& w, std::size_t L, double (*phi)(double)) {
  double s = 0.0;
  for (std::size_t j = 0; j <= L; ++j) s += w.node(j, L) * phi(static_cast<double>(j));
  return s;
}

}  // namespace

TEST_CASE("p = 0 gives the trapezoid rule") {
  const PowerWeights w(0.0, 8);
  CHECK(w.node(0, 8) == doctest::Approx(0.5));
  CHECK(w.node(3, 8) == doctest::Approx(1.0));
  CHECK(w.node(8, 8) == doctest::Approx(0.5));
}

TEST_CASE("weights integrate piecewise-linear functions exactly") {
  for (double p : {-0.6, -0.3, 0.4}) {
    const std::size_t L = 17;
    const PowerWeights w(p, L);
    const double Ld = static_cast<double>(L);
    CHECK(weighted_sum(w, L, [](double) { return 1.0; }) == doctest::Approx(std::pow(Ld, p + 1) / (p + 1)));
    CHECK(weighted_sum(w, L, [](double v) { return v; }) == doctest::Approx(std::pow(Ld, p + 2) / (p + 2)));
  }
}

TEST_CASE("strongly singular kernels drop the pole node") {
  const PowerWeights w(-1.4, 10);
  CHECK(w.left(0) == 0.0);
  // phi(v) = v vanishes at the pole: int_0^L v^{-0.4} dv.
  CHECK(weighted_sum(w, 10, [](double v) { return v; }) == doctest::Approx(std::pow(10.0, 0.6) / 0.6));
}

TEST_CASE("total is the sum of the nodes after the first") {
  const PowerWeights w(-0.5, 12);
  for (std::size_t L = 1; L <= 12; ++L) {
    double s = 0.0;
    for (std::size_t j = 1; j <= L; ++j) s += w.node(j, L);
    CHECK(w.total(L) == doctest::Approx(s));
  }
}
