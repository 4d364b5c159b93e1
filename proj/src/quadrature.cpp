#include "roughreflect/quadrature.hpp"

#include <array>
#include <cmath>

#include "roughreflect/errors.hpp"

namespace roughreflect {

namespace {

// Eight-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNode = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                            0.9602898564975363};
constexpr std::array<double, 4> kGlWeight = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                              0.1012285362903763};

// Past this cell index v^p is smooth enough on [l, l+1] for eight-point
// Gauss-Legendre to reach rounding level, and the closed form starts to
// lose digits to cancellation.
constexpr std::size_t kQuadratureFrom = 16;

// int_l^{l+1} v^q dv for l >= 1.
double power_moment(double l, double q) {
  const double e = q + 1.0;
  if (std::abs(e) < 1e-14) return std::log1p(1.0 / l);
  return std::pow(l, e) * std::expm1(e * std::log1p(1.0 / l)) / e;
}

}  // namespace

PowerWeights::PowerWeights(double p, std::size_t cells) : p_(p), a_(cells), b_(cells), interior_(cells + 1), prefix_(cells) {
  if (!(p > -2.0)) throw ArgumentError("power kernel exponent must exceed -2");
  if (cells == 0) throw ArgumentError("need at least one cell");
  a_[0] = p > -1.0 ? 1.0 / (p + 1.0) - 1.0 / (p + 2.0) : 0.0;
  b_[0] = 1.0 / (p + 2.0);
  for (std::size_t l = 1; l < cells; ++l) {
    const double dl = static_cast<double>(l);
    if (l < kQuadratureFrom) {
      const double m0 = power_moment(dl, p);
      const double m1 = power_moment(dl, p + 1.0);
      a_[l] = (dl + 1.0) * m0 - m1;
      b_[l] = m1 - dl * m0;
    } else {
      double sa = 0.0, sb = 0.0;
      for (std::size_t q = 0; q < kGlNode.size(); ++q) {
        for (double sign : {-1.0, 1.0}) {
          const double u = 0.5 + 0.5 * sign * kGlNode[q];  // in (0,1)
          const double w = 0.5 * kGlWeight[q] * std::pow(dl + u, p);
          sa += w * (1.0 - u);
          sb += w * u;
        }
      }
      a_[l] = sa;
      b_[l] = sb;
    }
  }
  interior_[0] = a_[0];
  double acc = 0.0;
  for (std::size_t j = 1; j <= cells; ++j) {
    interior_[j] = (j < cells ? a_[j] : 0.0) + b_[j - 1];
  }
  // prefix_[L-1] = sum_{j=1}^{L-1} interior(j)
  for (std::size_t L = 1; L <= cells; ++L) {
    prefix_[L - 1] = acc;
    acc += interior_[L];
  }
}

}  // namespace roughreflect
