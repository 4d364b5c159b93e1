#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "roughreflect/grid.hpp"

/// Fractional Brownian motion drivers: exact-covariance sampling, the
/// delayed Stratonovich tensor (W_{.-r} (x) W) and a Monte-Carlo check of
/// its moment scaling.
namespace roughreflect {

/// R(s,t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2 for s, t >= 0.
double fbm_covariance(double hurst, double s, double t);

/// Autocovariance of unit-step fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, std::size_t k);

enum class FgnMethod { automatic, cholesky, circulant };

/// Largest number of increments for which `automatic` factorizes the
/// covariance matrix directly.
inline constexpr std::size_t kCholeskyLimit = 4096;

/// Samples n consecutive unit-step fGn increments.  The factorization
/// (Cholesky factor or circulant eigenvalues) is computed once.
class FgnSampler {
 public:
  FgnSampler(double hurst, std::size_t n, FgnMethod method = FgnMethod::automatic);
  ~FgnSampler();
  FgnSampler(const FgnSampler&) = delete;
  FgnSampler& operator=(const FgnSampler&) = delete;

  std::size_t size() const noexcept { return n_; }
  double hurst() const noexcept { return hurst_; }
  /// Method actually in use (after a possible fallback).
  FgnMethod method() const noexcept { return method_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// Fills out[0..n) with one draw.
  void draw(std::mt19937_64& rng, std::span<double> out) const;

 private:
  struct Impl;
  double hurst_;
  std::size_t n_;
  FgnMethod method_;
  std::vector<std::string> warnings_;
  Impl* impl_;
};

/// Random stream for (seed, replication, component).  Streams with
/// different keys are independent; a stream does not depend on how many
/// others were consumed before it.
std::mt19937_64 keyed_stream(std::uint64_t seed, std::uint64_t replication, std::uint64_t component);

struct FbmSpec {
  double hurst = 0.4;
  std::size_t dims = 1;
  Grid grid;               ///< coarse grid over [-r, T] (must contain t = 0)
  std::uint64_t seed = 0;
  std::size_t refinement = 8;  ///< fine steps per coarse step
  FgnMethod method = FgnMethod::automatic;

  /// H in (1/3, 1/2), refinement >= 1, dims >= 1, 0 on the grid.
  void validate() const;
};

struct FbmSample {
  GridPath path;  ///< on the coarse grid, W(0) = 0
  GridPath fine;  ///< on the refined grid, path = fine at coarse points
  std::size_t refinement = 1;
  std::vector<std::string> warnings;
};

/// m independent two-sided fBm components on [-r, T], pinned at W(0) = 0:
/// stationary fGn increments over the whole grid, summed and re-centred.
FbmSample sample_fbm(const FbmSpec& spec, std::uint64_t replication = 0);

/// The same sample seen on a grid `factor` times coarser (same fine path).
FbmSample coarsen(const FbmSample& sample, std::size_t factor);

/// (W^i_{.-r} (x) W^j)_{s,t} by midpoint sums on the fine grid, recorded at
/// the coarse pairs of [lo, hi] (default: every coarse pair with s - r on
/// the grid).  Chen's identity holds exactly for these sums.
TwoParamField stratonovich_tensor(const FbmSample& sample, double r);
TwoParamField stratonovich_tensor(const FbmSample& sample, double r, double lo, double hi);

struct MomentOptions {
  double hurst = 0.4;
  double p = 2.0;
  std::size_t samples = 10000;
  std::vector<std::size_t> lags{1, 2, 4, 8, 16};  ///< in coarse steps
  std::size_t delay = 16;       ///< r in coarse steps (0 allowed)
  double step = 1.0 / 64.0;     ///< coarse step
  std::size_t refinement = 8;
  std::size_t i = 0, j = 1;     ///< tensor entry (i != j uses two components)
  std::uint64_t seed = 1;
  double tol_slope = 0.2;
};

struct MomentFit {
  std::vector<double> lag_times;
  std::vector<double> moments;         ///< E|(W_{.-r}(x)W)^{ij}_{s,s+lag}|^p
  std::vector<double> standard_errors;
  double slope = 0.0;
  double constant = 0.0;  ///< exp(intercept) of the log-log fit
  double target = 0.0;    ///< 2 p H
  bool pass = false;
  std::vector<std::string> warnings;
};

/// Least-squares slope of log E|tensor|^p against log lag; pass iff the
/// slope is >= 2pH - tol_slope.  H may be 1/2 here (Brownian baseline).
MomentFit tensor_moment_diagnostic(const MomentOptions& opt);

}  // namespace roughreflect
