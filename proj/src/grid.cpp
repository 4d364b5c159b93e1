#include "roughreflect/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roughreflect/errors.hpp"

namespace roughreflect {

namespace {

// Relative slack when snapping a time to the lattice.
constexpr double kSnap = 1e-7;

std::int64_t snap(double t, double h, const char* what) {
  const double q = t / h;
  const double j = std::nearbyint(q);
  if (std::abs(q - j) > kSnap) {
    throw AlignmentError(std::string(what) + ": " + std::to_string(t) + " is not a multiple of the step " +
                         std::to_string(h));
  }
  return static_cast<std::int64_t>(j);
}

}  // namespace

Grid::Grid(double step, std::int64_t first, std::size_t count, std::size_t per_window)
    : h_(step), first_(first), count_(count), per_window_(per_window) {
  if (!(step > 0.0) || !std::isfinite(step)) throw ArgumentError("grid step must be positive");
  if (count == 0) throw ArgumentError("grid must have at least one point");
}

Grid Grid::delay_grid(double r, std::size_t n_per_window, double horizon) {
  if (!(r > 0.0)) throw ArgumentError("delay must be positive");
  if (n_per_window == 0) throw ArgumentError("n_per_window must be positive");
  if (!(horizon > 0.0)) throw ArgumentError("horizon must be positive");
  const double h = r / static_cast<double>(n_per_window);
  const std::int64_t k = snap(horizon, h, "horizon");
  const auto n = static_cast<std::int64_t>(n_per_window);
  return Grid(h, -n, static_cast<std::size_t>(n + k + 1), n_per_window);
}

Grid Grid::history(double r, std::size_t n_per_window) {
  if (!(r > 0.0)) throw ArgumentError("delay must be positive");
  if (n_per_window == 0) throw ArgumentError("n_per_window must be positive");
  const auto n = static_cast<std::int64_t>(n_per_window);
  return Grid(r / static_cast<double>(n_per_window), -n, n_per_window + 1, n_per_window);
}

Grid Grid::interval(double a, double b, std::size_t n) {
  if (!(b > a)) throw ArgumentError("interval requires a < b");
  if (n == 0) throw ArgumentError("interval needs at least one step");
  const double h = (b - a) / static_cast<double>(n);
  const std::int64_t j0 = snap(a, h, "interval start");
  return Grid(h, j0, n + 1, 0);
}

std::size_t Grid::windows() const {
  if (per_window_ == 0) return 0;
  const std::int64_t after = last();
  if (after <= 0) return 0;
  const auto n = static_cast<std::int64_t>(per_window_);
  return static_cast<std::size_t>((after + n - 1) / n);
}

std::int64_t Grid::lattice(double t) const { return snap(t, h_, "time"); }

std::size_t Grid::index(double t) const {
  const std::int64_t j = lattice(t);
  if (!contains_lattice(j)) {
    throw RangeError("time " + std::to_string(t) + " outside grid [" + std::to_string(t0()) + ", " +
                     std::to_string(t1()) + "]");
  }
  return static_cast<std::size_t>(j - first_);
}

std::int64_t Grid::lag_of(double r) const { return snap(r, h_, "delay"); }

Grid Grid::slice(std::int64_t j0, std::int64_t j1) const {
  if (j0 > j1) throw ArgumentError("slice requires j0 <= j1");
  if (!contains_lattice(j0) || !contains_lattice(j1)) throw RangeError("slice outside grid");
  return Grid(h_, j0, static_cast<std::size_t>(j1 - j0 + 1), per_window_);
}

Grid Grid::sub(double a, double b) const { return slice(lattice(a), lattice(b)); }

Grid Grid::shifted(std::int64_t lag) const { return Grid(h_, first_ + lag, count_, per_window_); }

// ---------------------------------------------------------------- GridPath

GridPath::GridPath(Grid grid, std::size_t dim) : grid_(grid), dim_(dim), values_(grid.size() * dim, 0.0) {
  if (dim == 0) throw ArgumentError("path dimension must be positive");
}

GridPath::GridPath(Grid grid, std::size_t dim, std::vector<double> values)
    : grid_(grid), dim_(dim), values_(std::move(values)) {
  if (dim == 0) throw ArgumentError("path dimension must be positive");
  if (values_.size() != grid_.size() * dim_) throw ArgumentError("path values do not match grid size");
}

std::span<const double> GridPath::at_lattice(std::int64_t j) const {
  if (!grid_.contains_lattice(j)) throw RangeError("lattice index outside path domain");
  return point(static_cast<std::size_t>(j - grid_.first()));
}

std::span<const double> GridPath::at(double t) const { return point(grid_.index(t)); }

GridPath GridPath::restrict(double a, double b) const {
  return restrict_lattice(grid_.lattice(a), grid_.lattice(b));
}

GridPath GridPath::restrict_lattice(std::int64_t j0, std::int64_t j1) const {
  Grid g = grid_.slice(j0, j1);
  const auto k0 = static_cast<std::size_t>(j0 - grid_.first());
  std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(k0 * dim_),
                        values_.begin() + static_cast<std::ptrdiff_t>((k0 + g.size()) * dim_));
  return GridPath(g, dim_, std::move(v));
}

GridPath GridPath::component(std::size_t i) const {
  if (i >= dim_) throw RangeError("component index out of range");
  GridPath c(grid_, 1);
  for (std::size_t k = 0; k < size(); ++k) c(k, 0) = (*this)(k, i);
  return c;
}

void GridPath::require_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("path contains non-finite values");
  }
}

// ----------------------------------------------------------- TwoParamField

TwoParamField::TwoParamField(Grid grid, std::size_t rows, std::size_t cols)
    : grid_(grid), rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) throw ArgumentError("field block must be non-empty");
  const std::size_t n = grid_.size();
  data_.assign(n * (n + 1) / 2 * block(), 0.0);
}

std::span<const double> TwoParamField::at_lattice(std::int64_t j0, std::int64_t j1) const {
  if (j0 > j1) throw ArgumentError("field pair must be ordered");
  if (!grid_.contains_lattice(j0) || !grid_.contains_lattice(j1)) throw RangeError("pair outside field domain");
  return at(static_cast<std::size_t>(j0 - grid_.first()), static_cast<std::size_t>(j1 - grid_.first()));
}

std::span<const double> TwoParamField::at_times(double s, double t) const {
  return at_lattice(grid_.lattice(s), grid_.lattice(t));
}

TwoParamField TwoParamField::restrict(double a, double b) const {
  return restrict_lattice(grid_.lattice(a), grid_.lattice(b));
}

TwoParamField TwoParamField::restrict_lattice(std::int64_t j0, std::int64_t j1) const {
  TwoParamField out(grid_.slice(j0, j1), rows_, cols_);
  const auto off = static_cast<std::size_t>(j0 - grid_.first());
  const std::size_t n = out.grid().size();
  for (std::size_t s = 0; s < n; ++s) {
    // rows of the packed triangle are contiguous in t
    auto src = at(off + s, off + s);
    std::copy(src.data(), src.data() + (n - s) * block(), out.at(s, s).data());
  }
  return out;
}

// ------------------------------------------------------------------ norms

double norm2(std::span<const double> v) noexcept {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

namespace {

void check_interval(const Grid& g, double s, double t, std::size_t& k0, std::size_t& k1) {
  if (!(s < t)) throw ArgumentError("Hölder norm needs s < t");
  k0 = g.index(s);
  k1 = g.index(t);
}

std::vector<double> lag_powers(double h, double gamma, std::size_t n) {
  std::vector<double> w(n + 1, 0.0);
  for (std::size_t l = 1; l <= n; ++l) w[l] = std::pow(static_cast<double>(l) * h, gamma);
  return w;
}

}  // namespace

HolderReport holder_norm(const GridPath& p, double gamma, double s, double t) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ArgumentError("Hölder exponent must lie in (0,1]");
  std::size_t k0 = 0, k1 = 0;
  check_interval(p.grid(), s, t, k0, k1);
  const auto den = lag_powers(p.grid().step(), gamma, k1 - k0);
  const std::size_t d = p.dim();
  HolderReport rep;
  rep.exponent = gamma;
  std::size_t bu = k0, bv = k0 + 1;
  double best = -1.0;
  for (std::size_t u = k0; u < k1; ++u) {
    const double* pu = p.point(u).data();
    for (std::size_t v = u + 1; v <= k1; ++v) {
      const double* pv = p.point(v).data();
      double acc = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        const double e = pv[i] - pu[i];
        acc += e * e;
      }
      const double ratio = std::sqrt(acc) / den[v - u];
      if (ratio > best) {
        best = ratio;
        bu = u;
        bv = v;
      }
    }
  }
  rep.norm = best;
  rep.s_lattice = p.grid().first() + static_cast<std::int64_t>(bu);
  rep.t_lattice = p.grid().first() + static_cast<std::int64_t>(bv);
  rep.s = p.grid().time_of(rep.s_lattice);
  rep.t = p.grid().time_of(rep.t_lattice);
  return rep;
}

HolderReport holder_norm(const GridPath& p, double gamma) { return holder_norm(p, gamma, p.grid().t0(), p.grid().t1()); }

HolderReport holder_norm_2param(const TwoParamField& g, double gamma, double s, double t) {
  if (!(gamma > 0.0 && gamma <= 2.0)) throw ArgumentError("two-parameter exponent must lie in (0,2]");
  std::size_t k0 = 0, k1 = 0;
  check_interval(g.grid(), s, t, k0, k1);
  const auto den = lag_powers(g.grid().step(), gamma, k1 - k0);
  HolderReport rep;
  rep.exponent = gamma;
  std::size_t bu = k0, bv = k0 + 1;
  double best = -1.0;
  for (std::size_t u = k0; u < k1; ++u) {
    for (std::size_t v = u + 1; v <= k1; ++v) {
      const double ratio = norm2(g.at(u, v)) / den[v - u];
      if (ratio > best) {
        best = ratio;
        bu = u;
        bv = v;
      }
    }
  }
  rep.norm = best;
  rep.s_lattice = g.grid().first() + static_cast<std::int64_t>(bu);
  rep.t_lattice = g.grid().first() + static_cast<std::int64_t>(bv);
  rep.s = g.grid().time_of(rep.s_lattice);
  rep.t = g.grid().time_of(rep.t_lattice);
  return rep;
}

HolderReport holder_norm_2param(const TwoParamField& g, double gamma) {
  return holder_norm_2param(g, gamma, g.lo(), g.hi());
}

double weighted_sup_norm(const GridPath& p, double lambda, double a, double b) {
  if (!(lambda >= 1.0)) throw ArgumentError("weighted sup-norm requires lambda >= 1");
  if (a > b) throw ArgumentError("weighted sup-norm needs a <= b");
  const std::size_t k0 = p.grid().index(a), k1 = p.grid().index(b);
  double best = 0.0;
  for (std::size_t k = k0; k <= k1; ++k) {
    best = std::max(best, std::exp(-lambda * p.grid().time(k)) * norm2(p.point(k)));
  }
  return best;
}

double sup_norm(const GridPath& p, double a, double b) {
  if (a > b) throw ArgumentError("sup-norm needs a <= b");
  const std::size_t k0 = p.grid().index(a), k1 = p.grid().index(b);
  double best = 0.0;
  for (std::size_t k = k0; k <= k1; ++k) best = std::max(best, norm2(p.point(k)));
  return best;
}

double sup_norm(const GridPath& p) { return sup_norm(p, p.grid().t0(), p.grid().t1()); }

GridPath shift_path(const GridPath& p, double r) {
  const std::int64_t lag = p.grid().lag_of(r);
  if (lag < 0) throw ArgumentError("shift must be nonnegative");
  if (lag == 0) return p;
  if (static_cast<std::size_t>(lag) >= p.size()) throw RangeError("shift leaves no overlap with the path domain");
  const std::size_t n = p.size() - static_cast<std::size_t>(lag);
  Grid g(p.grid().step(), p.grid().first() + lag, n, p.grid().per_window());
  std::vector<double> v(p.values().begin(), p.values().begin() + static_cast<std::ptrdiff_t>(n * p.dim()));
  return GridPath(g, p.dim(), std::move(v));
}

GridPath translate_path(const GridPath& p, double r) {
  const std::int64_t lag = p.grid().lag_of(r);
  return GridPath(p.grid().shifted(lag), p.dim(), p.values());
}

}  // namespace roughreflect
