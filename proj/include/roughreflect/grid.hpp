#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace roughreflect {

/// Uniform lattice t_j = j*h (j integer, possibly negative) restricted to
/// the index range [first, first + count).  Every grid shares the anchor
/// t = 0, so two grids with the same step agree on which lattice index a
/// time belongs to and shifts by multiples of h are exact re-indexings.
class Grid {
 public:
  Grid() = default;
  Grid(double step, std::int64_t first, std::size_t count, std::size_t per_window = 0);

  /// Grid over [-r, T] with h = r/N.  T must be a multiple of h (not
  /// necessarily of r; a trailing short window is allowed).
  static Grid delay_grid(double r, std::size_t n_per_window, double horizon);

  /// Grid over [-r, 0] with h = r/N (the initial segment).
  static Grid history(double r, std::size_t n_per_window);

  /// Grid over [a, b] with n intervals.  a must be a lattice point of h = (b-a)/n.
  static Grid interval(double a, double b, std::size_t n);

  double step() const noexcept { return h_; }
  std::int64_t first() const noexcept { return first_; }
  std::int64_t last() const noexcept { return first_ + static_cast<std::int64_t>(count_) - 1; }
  std::size_t size() const noexcept { return count_; }
  /// Steps per delay window (0 when the grid carries no delay structure).
  std::size_t per_window() const noexcept { return per_window_; }
  double window() const noexcept { return static_cast<double>(per_window_) * h_; }

  double t0() const noexcept { return time_of(first_); }
  double t1() const noexcept { return time_of(last()); }
  /// Number of full or partial windows after t = 0.
  std::size_t windows() const;

  double time(std::size_t k) const noexcept { return time_of(first_ + static_cast<std::int64_t>(k)); }
  double time_of(std::int64_t j) const noexcept { return static_cast<double>(j) * h_; }

  /// Lattice index of t; throws AlignmentError if t is off the lattice.
  std::int64_t lattice(double t) const;
  /// Local index of t; throws RangeError if outside the grid.
  std::size_t index(double t) const;
  bool contains_lattice(std::int64_t j) const noexcept { return j >= first_ && j <= last(); }

  /// Lattice offset of a delay r (r = L*h); AlignmentError otherwise.
  std::int64_t lag_of(double r) const;

  /// Sub-grid between lattice indices j0 <= j1 (inclusive).
  Grid slice(std::int64_t j0, std::int64_t j1) const;
  Grid sub(double a, double b) const;
  Grid shifted(std::int64_t lag) const;

  bool same_step(const Grid& o) const noexcept { return h_ == o.h_; }
  bool operator==(const Grid& o) const noexcept {
    return h_ == o.h_ && first_ == o.first_ && count_ == o.count_;
  }

 private:
  double h_ = 0.0;
  std::int64_t first_ = 0;
  std::size_t count_ = 0;
  std::size_t per_window_ = 0;
};

/// A d-dimensional path sampled at every point of its grid.
class GridPath {
 public:
  GridPath() = default;
  GridPath(Grid grid, std::size_t dim);
  GridPath(Grid grid, std::size_t dim, std::vector<double> values);

  template <class F>
  static GridPath from_function(const Grid& grid, std::size_t dim, F&& f) {
    GridPath p(grid, dim);
    for (std::size_t k = 0; k < grid.size(); ++k) f(grid.time(k), p.point(k));
    return p;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return grid_.size(); }

  std::span<double> point(std::size_t k) noexcept { return {values_.data() + k * dim_, dim_}; }
  std::span<const double> point(std::size_t k) const noexcept { return {values_.data() + k * dim_, dim_}; }
  double operator()(std::size_t k, std::size_t i) const noexcept { return values_[k * dim_ + i]; }
  double& operator()(std::size_t k, std::size_t i) noexcept { return values_[k * dim_ + i]; }

  /// Point at lattice index j; RangeError if j is outside the grid.
  std::span<const double> at_lattice(std::int64_t j) const;
  std::span<const double> at(double t) const;

  const std::vector<double>& values() const noexcept { return values_; }
  std::vector<double>& values() noexcept { return values_; }

  /// Restriction to [a, b] (grid times).
  GridPath restrict(double a, double b) const;
  GridPath restrict_lattice(std::int64_t j0, std::int64_t j1) const;
  /// Component i as a scalar path.
  GridPath component(std::size_t i) const;

  /// Throws DomainError if any value is not finite.
  void require_finite() const;

 private:
  Grid grid_;
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

/// Values g(s,t) (rows x cols matrices, row-major) on ordered grid pairs
/// s <= t of a grid.  The diagonal is stored (and is zero for all the
/// fields built here) so that index arithmetic stays branch free.
class TwoParamField {
 public:
  TwoParamField() = default;
  TwoParamField(Grid grid, std::size_t rows, std::size_t cols);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t block() const noexcept { return rows_ * cols_; }
  double lo() const noexcept { return grid_.t0(); }
  double hi() const noexcept { return grid_.t1(); }

  /// Local indices s <= t.
  std::span<double> at(std::size_t s, std::size_t t) noexcept { return {data_.data() + offset(s, t), block()}; }
  std::span<const double> at(std::size_t s, std::size_t t) const noexcept {
    return {data_.data() + offset(s, t), block()};
  }
  /// Lattice indices j0 <= j1; RangeError outside the domain.
  std::span<const double> at_lattice(std::int64_t j0, std::int64_t j1) const;
  std::span<const double> at_times(double s, double t) const;

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  /// Restriction to pairs inside [a, b] (times).
  TwoParamField restrict(double a, double b) const;
  TwoParamField restrict_lattice(std::int64_t j0, std::int64_t j1) const;

 private:
  std::size_t offset(std::size_t s, std::size_t t) const noexcept {
    const std::size_t n = grid_.size();
    return (s * (2 * n - s + 1) / 2 + (t - s)) * block();
  }

  Grid grid_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct HolderReport {
  double norm = 0.0;
  double s = 0.0;  ///< witness pair (times)
  double t = 0.0;
  std::int64_t s_lattice = 0;
  std::int64_t t_lattice = 0;
  double exponent = 0.0;
};

/// sup over grid pairs u < v in [s,t] of |p(v) - p(u)| / (v-u)^gamma.
HolderReport holder_norm(const GridPath& p, double gamma, double s, double t);
HolderReport holder_norm(const GridPath& p, double gamma);

/// sup over grid pairs u < v in [s,t] of |g(u,v)| / (v-u)^gamma (Frobenius).
HolderReport holder_norm_2param(const TwoParamField& g, double gamma, double s, double t);
HolderReport holder_norm_2param(const TwoParamField& g, double gamma);

/// max over grid t in [a,b] of exp(-lambda t) |p(t)|; requires lambda >= 1.
double weighted_sup_norm(const GridPath& p, double lambda, double a, double b);

/// max over grid t in [a,b] of |p(t)| (Euclidean).
double sup_norm(const GridPath& p, double a, double b);
double sup_norm(const GridPath& p);

/// q(t) = p(t - r) on the grid points t of p with t - r in range.
GridPath shift_path(const GridPath& p, double r);

/// q(t) = p(t - r) on the whole translated domain [t0 + r, t1 + r].
GridPath translate_path(const GridPath& p, double r);

/// Euclidean norm of a vector / Frobenius norm of a flattened matrix.
double norm2(std::span<const double> v) noexcept;

}  // namespace roughreflect
