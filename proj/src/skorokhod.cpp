#include "roughreflect/skorokhod.hpp"

#include <algorithm>
#include <cmath>

#include "roughreflect/errors.hpp"

namespace roughreflect {

void reflect_in_place(const GridPath& xi, GridPath& x, GridPath& z, std::size_t from, std::size_t to) {
  const std::size_t d = xi.dim();
  const std::size_t end = std::min(to, xi.size());
  for (std::size_t i = 0; i < d; ++i) {
    double run = from == 0 ? 0.0 : z(from - 1, i);
    for (std::size_t k = from; k < end; ++k) {
      run = std::max(run, -xi(k, i));
      z(k, i) = run;
      x(k, i) = xi(k, i) + run;
    }
  }
}

SkorokhodDecomposition solve_skorokhod(const GridPath& xi) {
  xi.require_finite();
  for (std::size_t i = 0; i < xi.dim(); ++i) {
    if (xi(0, i) < 0.0) throw DomainError("reflection needs xi(0) >= 0 componentwise");
  }
  SkorokhodDecomposition dec{xi, GridPath(xi.grid(), xi.dim()), GridPath(xi.grid(), xi.dim())};
  reflect_in_place(xi, dec.x, dec.z, 0);
  return dec;
}

DecompositionReport verify_decomposition(const SkorokhodDecomposition& dec, double tol, double tol_comp) {
  const auto& xi = dec.xi;
  const auto& x = dec.x;
  const auto& z = dec.z;
  if (!(xi.grid() == x.grid()) || !(xi.grid() == z.grid()) || xi.dim() != x.dim() || xi.dim() != z.dim()) {
    throw ArgumentError("decomposition parts live on different grids");
  }
  DecompositionReport rep;
  const std::size_t d = xi.dim(), n = xi.size();
  for (std::size_t i = 0; i < d; ++i) {
    rep.start = std::max(rep.start, std::abs(z(0, i)));
    double comp = 0.0, comp_left = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      rep.negativity = std::max(rep.negativity, -x(k, i));
      rep.additivity = std::max(rep.additivity, std::abs(x(k, i) - xi(k, i) - z(k, i)));
      rep.xi_sup = std::max(rep.xi_sup, std::abs(xi(k, i)));
      if (k + 1 < n) {
        const double dz = z(k + 1, i) - z(k, i);
        rep.monotonicity = std::max(rep.monotonicity, -dz);
        comp += x(k + 1, i) * dz;
        comp_left += x(k, i) * dz;
      }
    }
    rep.complementarity = std::max(rep.complementarity, std::abs(comp));
    rep.complementarity_left = std::max(rep.complementarity_left, std::abs(comp_left));
  }
  rep.pass = rep.negativity <= tol && rep.monotonicity <= tol && rep.additivity <= tol && rep.start <= tol &&
             rep.complementarity <= tol_comp * std::max(1.0, rep.xi_sup);
  return rep;
}

namespace {

double max_norm_diff(const GridPath& a, const GridPath& b) {
  double best = 0.0;
  for (std::size_t q = 0; q < a.values().size(); ++q) {
    best = std::max(best, std::abs(a.values()[q] - b.values()[q]));
  }
  return best;
}

}  // namespace

LipschitzRatios lipschitz_probe(const GridPath& xi1, const GridPath& xi2) {
  if (!(xi1.grid() == xi2.grid()) || xi1.dim() != xi2.dim()) throw ArgumentError("probe paths live on different grids");
  const double den = max_norm_diff(xi1, xi2);
  if (den == 0.0) return {};
  const auto d1 = solve_skorokhod(xi1);
  const auto d2 = solve_skorokhod(xi2);
  return {max_norm_diff(d1.x, d2.x) / den, max_norm_diff(d1.z, d2.z) / den};
}

HolderBoundProbe regulator_holder_bound_probe(const GridPath& xi, double beta, double s, double t) {
  const auto dec = solve_skorokhod(xi);
  HolderBoundProbe out;
  out.lhs = holder_norm(dec.z, beta, s, t).norm;
  out.rhs = std::sqrt(static_cast<double>(xi.dim())) * holder_norm(xi, beta, s, t).norm;
  return out;
}

}  // namespace roughreflect
