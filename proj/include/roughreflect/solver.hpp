#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "roughreflect/fbm.hpp"
#include "roughreflect/fraccalc.hpp"
#include "roughreflect/grid.hpp"
#include "roughreflect/matrix_map.hpp"
#include "roughreflect/tensor.hpp"

/// Reflected delay equation
///   x(t) = eta(0) + int_0^t b(s, x) ds + int_0^t sigma(x(s - r)) dy_s + z(t),
///   x = eta on [-r, 0],
/// solved window by window: on [nr, (n+1)r] the rough integral only sees
/// x on the previous window, so it is computed once and Picard iteration
/// resolves the drift and the reflection.
namespace roughreflect {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Universal constant of the a-priori bound: the largest minimal K over the
/// calibration corpus (`rough-reflect calibrate`, 0.01570 on case 15),
/// rounded up.
inline constexpr double kCalibratedBoundConstant = 0.02;

// ------------------------------------------------------------- diffusion

/// sigma: R^d -> R^{d x m} with the norms used by the a-priori bound.
struct Diffusion {
  std::string name;
  MatrixMap map;
  double sup = kInfinity;           ///< sup_u |sigma(u)|
  double sup_prime = kInfinity;     ///< sup_u |sigma'(u)|
  double holder_prime = kInfinity;  ///< gamma-Hölder constant of sigma'
  double gamma = 1.0;
  bool constant = false;            ///< sigma(u) independent of u
  bool zero = false;

  std::size_t d() const noexcept { return map.rows; }
  std::size_t m() const noexcept { return map.cols; }
  bool bounded() const noexcept {
    return sup < kInfinity && sup_prime < kInfinity && holder_prime < kInfinity;
  }
};

/// sigma = 0.
Diffusion sigma_zero(std::size_t d, std::size_t m);
/// sigma = C (C row-major d x m).
Diffusion sigma_constant(std::size_t d, std::size_t m, std::vector<double> C);
/// sigma_ab(u) = C_ab + A_ab u_a.
Diffusion sigma_linear(std::size_t d, std::size_t m, std::vector<double> C, std::vector<double> A);
/// sigma_ab(u) = C_ab (1 + |u|^2)^{-1/2}.
Diffusion sigma_bounded(std::size_t d, std::size_t m, std::vector<double> C);
/// sigma_ab(u) = C_ab sin(u_a).
Diffusion sigma_sine(std::size_t d, std::size_t m, std::vector<double> C);
/// sigma_ab(u) = C_ab g(u_a), g the monotone cubic Hermite interpolant of
/// (nodes, values), continued linearly outside the table.
Diffusion sigma_tabulated(std::size_t d, std::size_t m, std::vector<double> C, std::vector<double> nodes,
                          std::vector<double> values);

// ----------------------------------------------------------------- drift

enum class Phi { linear, tanh };
enum class HistoryFunctional { none, running_sup, window_mean };

/// b(t, x) = c + A phi(x(t)) + B phi(x(t - r)) + kappa .* F(x)(t) with
///   F = sup_{[-r,t]} |x| (every component)  or  F_i = (1/r) int_{t-r}^t x_i.
/// A and B are row-major d x d; empty means zero.
struct Drift {
  std::size_t dim = 1;
  std::vector<double> c, A, B, kappa;
  Phi phi = Phi::linear;
  HistoryFunctional functional = HistoryFunctional::none;

  static Drift zero(std::size_t d);
  /// c + A x(t).
  static Drift instantaneous(std::vector<double> c, std::vector<double> A, Phi phi = Phi::linear);
  /// c + A phi(x(t)) + B phi(x(t - r)).
  static Drift delayed(std::vector<double> c, std::vector<double> A, std::vector<double> B, Phi phi = Phi::linear);

  void validate() const;
  bool is_zero() const;
  /// b is bounded over all histories (tanh nonlinearity, no functional).
  bool bounded() const;
  /// sup over (t, x) of |b|; infinite when unbounded.
  double sup() const;
  /// Lipschitz constant in the sup-norm of the history.
  double lipschitz() const;
};

/// b(t_k, x) from the history of x up to local index k (x must cover
/// [t_k - r, t_k]; r is the delay carried by x's grid).
void drift_eval(const Drift& b, const GridPath& x, std::size_t k, std::span<double> out);

// ----------------------------------------------------------- coefficients

struct Coefficients {
  Diffusion sigma;
  Drift drift;
  GridPath eta;  ///< on [-r, 0], componentwise >= 0
  FracParams frac;

  std::size_t d() const noexcept { return eta.dim(); }
  std::size_t m() const noexcept { return sigma.m(); }
  double delay() const noexcept { return eta.grid().t1() - eta.grid().t0(); }
  void validate() const;
};

/// The driver y with the two tensors the equation needs:
/// eta_{.-r} (x) y on [0, r] and y_{.-r} (x) y on [r, T].
struct Driver {
  GridPath y;
  TwoParamField eta_tensor;
  TwoParamField yy;
};

/// Driver from a deterministic y on [-r, T]: both tensors by trapezoid sums.
Driver smooth_driver(const GridPath& y, const GridPath& eta);
/// Driver from an fBm sample: yy by midpoint sums on the fine grid, the
/// eta tensor against the fine path with eta interpolated linearly.
Driver fbm_driver(const FbmSample& sample, const GridPath& eta);

// ---------------------------------------------------------------- solving

/// Discretization of the rough integral on a window.
///   fractional:   the fractional-derivative formula by product integration
///                 (O(K^3) per window; accurate for smooth inputs only).
///   interpolated: the same formula evaluated exactly on the piecewise-linear
///                 interpolants (O(K); consistent for rough drivers).
enum class RoughScheme { interpolated, fractional };

struct SolverConfig {
  double tol = 1e-10;
  std::size_t max_iter = 500;
  /// Picard start u_0 = x(window start) + init_offset (interior points).
  double init_offset = 0.0;
  /// Solve only up to this time (default: the end of the driver).
  double horizon = kInfinity;
  /// Use c (y_t - y_w) for constant sigma instead of the fractional integral.
  bool closed_form_constant_sigma = true;
  RoughScheme scheme = RoughScheme::interpolated;
  /// Apply the Skorokhod map (false gives the unreflected equation).
  bool reflect = true;
  bool validate_tensors = true;
  double tensor_tol = 1e-9;
};

struct WindowReport {
  std::size_t index = 0;
  double start = 0.0, end = 0.0;
  std::size_t iterations = 0;
  double change = 0.0;  ///< last sup-change of the Picard iterate
  double ratio = 0.0;   ///< last ratio of successive changes
  HolderReport holder_x;
};

struct Solution {
  GridPath x, z, xi;       ///< on [-r, T]
  GridPath drift, rough;   ///< cumulative integrals on [0, T]
  std::vector<TwoParamField> tensors;  ///< x_{.-r} (x) y on each window
  std::vector<WindowReport> windows;
  double residual = 0.0;   ///< self-consistency, drift recomputed from x
};

/// Time span [w, e] of window n on the solver grid (e clipped to the horizon).
std::pair<double, double> window_bounds(const Grid& grid, std::size_t n, double horizon = kInfinity);

/// t -> int_w^t sigma(x(s - r)) dy_s on the grid points of [w, e].
/// `tensor` is x_{.-r} (x) y on [w, e]; x must cover [w - r, e - r].
GridPath window_rough_term(const Coefficients& coefs, const GridPath& x, const TwoParamField& tensor,
                           const GridPath& y, double w, double e, RoughScheme scheme = RoughScheme::interpolated,
                           bool closed_form_constant_sigma = true);

struct PicardResult {
  std::size_t iterations = 0;
  double change = 0.0;
  double ratio = 0.0;
};

/// Fixed point on [w, e] of
///   u -> phi(xi(w) + int_w^. b(s, u) ds + rough),
/// written into x, z, xi (full paths on [-r, T]) and the cumulative drift
/// path.  Values before w are read as history and never modified.
/// Throws NonContractionError after max_iter sweeps.
PicardResult picard_window(const Coefficients& coefs, const GridPath& rough, double w, double e,
                           const SolverConfig& cfg, std::size_t window, GridPath& x, GridPath& z, GridPath& xi,
                           GridPath& drift_cum);

Solution solve(const Coefficients& coefs, const Driver& driver, const SolverConfig& cfg = {});

struct SolutionChecks {
  double negativity = 0.0;      ///< max(0, -min x)
  bool skorokhod_consistent = false;  ///< bit-for-bit against solve_skorokhod(xi)
  double eta_mismatch = 0.0;    ///< max |x - eta| on [-r, 0]
  double residual = 0.0;
  bool pass = false;
};

SolutionChecks check_solution(const Solution& sol, const Coefficients& coefs, double residual_tol = 1e-6);

// ------------------------------------------------------------ a-priori bound

struct BoundReport {
  double mu = 0.0;
  double eta_holder = 0.0;     ///< ||eta||_beta on [-r, 0]
  double eta_tensor = 0.0;     ///< ||eta_{.-r} (x) y||_2beta on [0, r]
  double y_holder = 0.0;       ///< ||y||_beta on [0, T]
  double yy_tensor = 0.0;      ///< ||y_{.-r} (x) y||_2beta on [r, T]
  double scale = 0.0;          ///< the bracket raised to 1/beta (K = 1)
  double delta_y = 0.0;
  double K = 0.0;
  double rhs = 0.0;
  double lhs = 0.0;            ///< ||x||_inf
  double minimal_K = 0.0;      ///< smallest K with lhs <= rhs
  bool pass = false;
};

/// Evaluates the bound for the solved x.  k is the proof constant entering
/// delta_y.  Throws ArgumentError unless b, sigma and sigma' are bounded.
BoundReport a_priori_bound(const Coefficients& coefs, const Driver& driver, const Solution& sol, double K,
                           double k = 1.0);

}  // namespace roughreflect
