#pragma once

#include <cstddef>
#include <vector>

#include "roughreflect/grid.hpp"
#include "roughreflect/matrix_map.hpp"

/// Fractional integrals and derivatives on uniform grids, and the rough
/// integral of f(x) against y given the tensor x(x)y.
///
/// Singular kernels are never sampled at their poles: every kernel power
/// is integrated exactly against the piecewise-linear interpolant of the
/// integrand (product integration, see PowerWeights).
///
/// Phase convention.  The right-sided operators carry complex factors
/// (-1)^alpha, (-1)^{1-alpha}; they always occur in pairs whose product
/// is real:
///   (-1)^alpha (-1)^{1-alpha} = -1,
///   -(-1)^{2alpha-1} (-1)^{2(1-alpha)} = +1.
/// All right-sided operators here return the phase-free real part and the
/// rough integral is assembled in the resulting real form
///   int f(x) dy = - sum_j int F_j G_j dr + sum_{ij} int A_ij E_ij dr,
/// with F = compensated left derivative of order alpha of f_j(x),
/// G = right derivative of order 1-alpha of y_{b-}, A = left derivative
/// of order 2alpha-1 of d_i f_j(x), E = right derivative of order 1-alpha
/// of the extended derivative of (x(x)y)^{ij}.
namespace roughreflect {

struct FracParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 1.0;

  /// Midpoint of the admissible window for alpha.
  static double default_alpha(double beta, double gamma);
  static FracParams with_default_alpha(double beta, double gamma);
  /// Upper end of the admissible window, min(2 beta, (gamma beta + 1)/2).
  static double alpha_upper(double beta, double gamma);

  /// beta in (1/3,1/2), gamma > 1/beta - 2, 1-beta < alpha < upper.
  void validate() const;
};

enum class Side { left, right };

/// Riemann-Liouville integral of order alpha in (0,1] at every grid point
/// of [a,b].  Right side returns the phase-free value.
GridPath rl_integral(const GridPath& f, double alpha, Side side, double a, double b);

/// Left Weyl derivative at the grid points of (a, b].
GridPath weyl_left(const GridPath& f, double alpha, double a, double b);
/// Right Weyl derivative (phase-free) at the grid points of [a, b).
GridPath weyl_right(const GridPath& f, double alpha, double a, double b);

/// Compensated left derivative of f(x) on (a, b]; the value at r is the
/// rows*cols matrix
///   (f(x_r)(r-a)^{-alpha} + alpha int_a^r R(r,th)(r-th)^{-alpha-1} dth) / Gamma(1-alpha),
///   R(r,th) = f(x_r) - f(x_th) - sum_i d_i f(x_th)(x^i_r - x^i_th).
/// The remainder is interpolated as R/(r-th), which is exact for a
/// quadratic remainder.
GridPath compensated_weyl(const MatrixMap& f, const GridPath& x, double alpha, double a, double b);

/// Extended derivative (phase-free) of a two-parameter field at [lo, b):
///   (g(r,b)(b-r)^{alpha-1} + (1-alpha) int_r^b g(r,s)(s-r)^{alpha-2} ds) / Gamma(alpha).
GridPath extended_tensor_derivative(const TwoParamField& g, double alpha, double b);

/// int_a^b f(x) dy, a vector of length f.rows.  f maps R^d to
/// R^{rows x m}; xy holds the d x m tensor on pairs covering [a,b].
std::vector<double> rough_integral(const MatrixMap& f, const GridPath& x, const GridPath& y, const TwoParamField& xy,
                                   const FracParams& params, double a, double b);

/// t -> int_a^t f(x) dy at every grid t in [a,b] (zero at a).  Costs
/// O(K^3) for K steps against O(K^2) for a single endpoint.
GridPath rough_integral_cumulative(const MatrixMap& f, const GridPath& x, const GridPath& y, const TwoParamField& xy,
                                   const FracParams& params, double a, double b);

/// The same integral with (x, y) replaced by their piecewise-linear
/// interpolants, for which the fractional formula reduces exactly to
///   int f(x^) dy^ + int f'(x^) dD^,
/// D the cumulative defect of xy from the lift of the interpolants
/// (D jumps by xy(t_k, t_k+1) - (x_k+1 - x_k)(x)(y_k+1 - y_k)/2 over a cell).
/// Both cell integrals are evaluated by 4-point Gauss-Legendre.  Linear in
/// the number of steps and consistent for rough inputs, where the grid
/// discretization of the fractional derivatives is not.
GridPath interpolated_rough_integral_cumulative(const MatrixMap& f, const GridPath& x, const GridPath& y,
                                                const TwoParamField& xy, double a, double b);

/// ||x(x)y||_{2beta} + ||x||_beta ||y||_beta on [a,b].
double estimate_phi(const GridPath& x, const GridPath& y, const TwoParamField& xy, double beta, double a, double b);

/// Three-path combination
///   ||x||_b ||y||_b ||z||_b + ||x||_b ||y(x)z||_2b + ||z||_b ||x(x)y||_2b.
double estimate_phi3(const GridPath& x, const GridPath& y, const GridPath& z, const TwoParamField& xy,
                     const TwoParamField& yz, double beta, double a, double b);

}  // namespace roughreflect
