#pragma once

#include <cstddef>
#include <cstdint>

#include "roughreflect/fraccalc.hpp"
#include "roughreflect/grid.hpp"
#include "roughreflect/matrix_map.hpp"

namespace roughreflect {

/// (x, y, x(x)y) with the Hölder exponent it is meant to carry.
struct MultiplicativeFunctional {
  GridPath x;
  GridPath y;
  TwoParamField xy;
  double beta = 0.0;
};

/// (x(x)y)_{s,t} = sum_{k=s}^{t-1} ((x_k - x_s) + (x_{k+1} - x_s))/2 (x) (y_{k+1} - y_k)
/// for every grid pair.  Chen's identity holds by telescoping.
TwoParamField smooth_tensor(const GridPath& x, const GridPath& y);

/// Trapezoid lift of x_{.-r} against y on [lo, hi]; x must cover
/// [lo - r, hi - r] and y must cover [lo, hi].
TwoParamField delayed_lift(const GridPath& x, const GridPath& y, double r, double lo, double hi);

/// The same trapezoid lift computed on a fine grid and recorded only at
/// the coarse pairs of [lo, hi] (coarse step = refinement * fine step).
TwoParamField refined_lift(const GridPath& x_fine, const GridPath& y_fine, std::size_t refinement, double lo,
                           double hi);

struct ChenOptions {
  double tol = 1e-10;
  bool full = false;           ///< all triples (O(n^3)); otherwise random sample
  std::size_t samples = 10000;
  std::uint64_t seed = 20240611;
};

struct ChenReport {
  double max_residual = 0.0;
  double s = 0.0, u = 0.0, t = 0.0;  ///< witness triple
  std::size_t triples = 0;
  bool pass = true;
};

/// max over s < u < t of |xy(s,u) + xy(u,t) + (x_u - x_s)(x)(y_t - y_u) - xy(s,t)|.
ChenReport check_multiplicative(const GridPath& x, const GridPath& y, const TwoParamField& xy,
                                const ChenOptions& opt = {});
ChenReport check_multiplicative(const MultiplicativeFunctional& F, const ChenOptions& opt = {});

/// Pure re-indexing: the result at (s, t) is xy(s - r, t - r), on [lo + r, hi + r].
TwoParamField shift_tensor(const TwoParamField& xy, double r);

/// Smallest c with |xy(s,t)| <= c (t - s)^{2 beta} on grid pairs, with witness.
HolderReport two_beta_constant(const TwoParamField& xy, double beta);

/// Pieces of xi on a solved window, as cumulative paths on that window:
/// xi(t) - xi(start) = drift(t) - drift(start) + rough(t) - rough(start).
struct WindowIncrements {
  GridPath drift;
  GridPath rough;
  GridPath z;
};

/// Delayed tensor (x_{.-r} (x) y) on the window [w, e] that follows a solved
/// window [w - r, w].  Built cell by cell from the increments of the solved
/// window so that Chen's identity is inherited:
///   J(s,t) = sum_{cells [v, v']} (db + dz)(v - r) (x) (y_t - y_v)
///          + rho(v - r) (x) (y_t - y_v') + sigma(x(v - 2r)) (y_{.-r}(x)y)_{v,v'},
/// where rho is the rough-integral increment over the shifted cell.
/// x must cover [w - 2r, w]; y and yy must cover [w, e].
TwoParamField delayed_window_tensor(const MatrixMap& sigma, const GridPath& x, const GridPath& y,
                                    const TwoParamField& yy, const WindowIncrements& inc, double w, double e);

/// Full delayed tensor on [w - r, e]: `previous` on [w - r, w], the window
/// tensor on [w, e], and cross pairs glued by
///   F(s,t) = previous(s, w) + J(w, t) + (x(w - r) - x(s - r)) (x) (y_t - y_w).
TwoParamField extend_delayed_tensor(const TwoParamField& previous, const TwoParamField& window, const GridPath& x,
                                    const GridPath& y);

}  // namespace roughreflect
