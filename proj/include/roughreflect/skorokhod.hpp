#pragma once

#include <cstddef>

#include "roughreflect/grid.hpp"

namespace roughreflect {

/// xi = x - z with x >= 0, z nondecreasing from 0 and growing only while x = 0.
struct SkorokhodDecomposition {
  GridPath xi;
  GridPath x;  ///< reflector
  GridPath z;  ///< regulator
};

/// Componentwise normal reflection at the origin:
///   z^i(t_k) = max_{j<=k} max(0, -xi^i(t_j)),  x = xi + z.
/// The running max starts at the first grid point of xi.
SkorokhodDecomposition solve_skorokhod(const GridPath& xi);

/// Recomputes x and z on the local indices [from, to), continuing the
/// running max stored in z(from - 1).  Used when a path is reflected
/// window by window; `to` defaults to the end of the path.
void reflect_in_place(const GridPath& xi, GridPath& x, GridPath& z, std::size_t from,
                      std::size_t to = static_cast<std::size_t>(-1));

struct DecompositionReport {
  double negativity = 0.0;       ///< max(0, -min x)
  double monotonicity = 0.0;     ///< max(0, -min increment of z)
  double additivity = 0.0;       ///< max |x - xi - z|
  double start = 0.0;            ///< max |z(t_0)|
  double complementarity = 0.0;  ///< sum_k x(t_{k+1}) (z(t_{k+1}) - z(t_k)), max over components
  double complementarity_left = 0.0;  ///< same with x(t_k); reported, not asserted
  double xi_sup = 0.0;
  bool pass = false;
};

/// Checks the three defining conditions.  `tol` bounds the first four
/// residuals; complementarity is held to tol_comp * max(1, ||xi||_inf).
DecompositionReport verify_decomposition(const SkorokhodDecomposition& dec, double tol = 1e-12,
                                         double tol_comp = 1e-10);

struct LipschitzRatios {
  double ratio_x = 0.0;
  double ratio_z = 0.0;
};

/// ||x1 - x2|| / ||xi1 - xi2|| and ||z1 - z2|| / ||xi1 - xi2|| in the
/// componentwise max-norm sup_t max_i |.| (0 when the inputs coincide).
LipschitzRatios lipschitz_probe(const GridPath& xi1, const GridPath& xi2);

struct HolderBoundProbe {
  double lhs = 0.0;  ///< ||z||_beta on [s,t]
  double rhs = 0.0;  ///< sqrt(d) ||xi||_beta on [s,t]
};

HolderBoundProbe regulator_holder_bound_probe(const GridPath& xi, double beta, double s, double t);

}  // namespace roughreflect
