#include "roughreflect/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "roughreflect/errors.hpp"

namespace roughreflect {

namespace {

const double* at_lat(const GridPath& p, std::int64_t j) {
  if (!p.grid().contains_lattice(j)) throw RangeError("path does not cover the requested time");
  return p.values().data() + static_cast<std::size_t>(j - p.grid().first()) * p.dim();
}

}  // namespace

TwoParamField smooth_tensor(const GridPath& x, const GridPath& y) {
  if (!(x.grid() == y.grid())) throw ArgumentError("smooth_tensor needs paths on a common grid");
  const std::size_t n = x.size(), d = x.dim(), m = y.dim();
  TwoParamField g(x.grid(), d, m);
  std::vector<double> acc(d * m);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const double* xs = &x.values()[s * d];
    for (std::size_t k = s; k + 1 < n; ++k) {
      const double* xk = &x.values()[k * d];
      const double* xk1 = &x.values()[(k + 1) * d];
      const double* yk = &y.values()[k * m];
      const double* yk1 = &y.values()[(k + 1) * m];
      for (std::size_t a = 0; a < d; ++a) {
        const double mid = 0.5 * ((xk[a] - xs[a]) + (xk1[a] - xs[a]));
        for (std::size_t b = 0; b < m; ++b) acc[a * m + b] += mid * (yk1[b] - yk[b]);
      }
      std::copy(acc.begin(), acc.end(), g.at(s, k + 1).begin());
    }
  }
  return g;
}

TwoParamField delayed_lift(const GridPath& x, const GridPath& y, double r, double lo, double hi) {
  if (!x.grid().same_step(y.grid())) throw AlignmentError("paths differ in step");
  return smooth_tensor(translate_path(x, r).restrict(lo, hi), y.restrict(lo, hi));
}

TwoParamField refined_lift(const GridPath& x_fine, const GridPath& y_fine, std::size_t refinement, double lo, double hi) {
  if (refinement == 0) throw ArgumentError("refinement must be positive");
  if (!x_fine.grid().same_step(y_fine.grid())) throw AlignmentError("fine paths differ in step");
  const double hf = x_fine.grid().step();
  const double hc = hf * static_cast<double>(refinement);
  const Grid probe(hc, 0, 1);
  const std::int64_t c0 = probe.lattice(lo), c1 = probe.lattice(hi);
  if (c1 <= c0) throw ArgumentError("refined_lift needs lo < hi");
  const auto R = static_cast<std::int64_t>(refinement);
  const std::size_t d = x_fine.dim(), m = y_fine.dim();
  const Grid coarse(hc, c0, static_cast<std::size_t>(c1 - c0 + 1), x_fine.grid().per_window() / refinement);
  TwoParamField g(coarse, d, m);
  std::vector<double> acc(d * m);
  for (std::int64_t cs = c0; cs < c1; ++cs) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const double* xs = at_lat(x_fine, cs * R);
    for (std::int64_t j = cs * R; j < c1 * R; ++j) {
      const double* xk = at_lat(x_fine, j);
      const double* xk1 = at_lat(x_fine, j + 1);
      const double* yk = at_lat(y_fine, j);
      const double* yk1 = at_lat(y_fine, j + 1);
      for (std::size_t a = 0; a < d; ++a) {
        const double mid = 0.5 * ((xk[a] - xs[a]) + (xk1[a] - xs[a]));
        for (std::size_t b = 0; b < m; ++b) acc[a * m + b] += mid * (yk1[b] - yk[b]);
      }
      if ((j + 1) % R == 0) {
        const auto ct = (j + 1) / R;
        std::copy(acc.begin(), acc.end(),
                  g.at(static_cast<std::size_t>(cs - c0), static_cast<std::size_t>(ct - c0)).begin());
      }
    }
  }
  return g;
}

// ----------------------------------------------------------------- Chen

namespace {

double chen_residual(const GridPath& x, const GridPath& y, const TwoParamField& xy, std::int64_t s, std::int64_t u,
                     std::int64_t t, std::vector<double>& buf) {
  const std::size_t d = x.dim(), m = y.dim();
  const double* xs = at_lat(x, s);
  const double* xu = at_lat(x, u);
  const double* yu = at_lat(y, u);
  const double* yt = at_lat(y, t);
  auto su = xy.at_lattice(s, u);
  auto ut = xy.at_lattice(u, t);
  auto st = xy.at_lattice(s, t);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t q = a * m + b;
      buf[q] = su[q] + ut[q] + (xu[a] - xs[a]) * (yt[b] - yu[b]) - st[q];
    }
  }
  return norm2(buf);
}

}  // namespace

ChenReport check_multiplicative(const GridPath& x, const GridPath& y, const TwoParamField& xy, const ChenOptions& opt) {
  if (xy.rows() != x.dim() || xy.cols() != y.dim()) throw ArgumentError("tensor block must be dim(x) x dim(y)");
  const Grid& g = xy.grid();
  const std::int64_t j0 = g.first(), j1 = g.last();
  std::vector<double> buf(xy.block());
  ChenReport rep;
  auto consider = [&](std::int64_t s, std::int64_t u, std::int64_t t) {
    const double r = chen_residual(x, y, xy, s, u, t, buf);
    ++rep.triples;
    if (r > rep.max_residual || !std::isfinite(r)) {
      rep.max_residual = std::isfinite(r) ? r : INFINITY;
      rep.s = g.time_of(s);
      rep.u = g.time_of(u);
      rep.t = g.time_of(t);
    }
  };
  if (j1 - j0 < 2) return rep;
  if (opt.full) {
    for (std::int64_t s = j0; s <= j1; ++s) {
      for (std::int64_t u = s + 1; u <= j1; ++u) {
        for (std::int64_t t = u + 1; t <= j1; ++t) consider(s, u, t);
      }
    }
  } else {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::int64_t> pick(j0, j1);
    for (std::size_t q = 0; q < opt.samples; ++q) {
      std::int64_t v[3];
      do {
        v[0] = pick(rng);
        v[1] = pick(rng);
        v[2] = pick(rng);
        std::sort(v, v + 3);
      } while (v[0] == v[1] || v[1] == v[2]);
      consider(v[0], v[1], v[2]);
    }
  }
  rep.pass = rep.max_residual <= opt.tol;
  return rep;
}

ChenReport check_multiplicative(const MultiplicativeFunctional& F, const ChenOptions& opt) {
  return check_multiplicative(F.x, F.y, F.xy, opt);
}

TwoParamField shift_tensor(const TwoParamField& xy, double r) {
  const std::int64_t lag = xy.grid().lag_of(r);
  TwoParamField out(xy.grid().shifted(lag), xy.rows(), xy.cols());
  out.data() = xy.data();
  return out;
}

HolderReport two_beta_constant(const TwoParamField& xy, double beta) {
  if (xy.grid().size() < 2) return {0.0, xy.lo(), xy.lo(), xy.grid().first(), xy.grid().first(), 2.0 * beta};
  return holder_norm_2param(xy, 2.0 * beta);
}

// ------------------------------------------------------- delayed tensors

TwoParamField delayed_window_tensor(const MatrixMap& sigma, const GridPath& x, const GridPath& y,
                                    const TwoParamField& yy, const WindowIncrements& inc, double w, double e) {
  const Grid& gy = y.grid();
  const std::size_t d = x.dim(), m = y.dim();
  if (sigma.in_dim != d || sigma.rows != d || sigma.cols != m) throw ArgumentError("sigma must map R^d to R^{d x m}");
  if (yy.rows() != m || yy.cols() != m) throw ArgumentError("driver tensor must be m x m");
  const std::int64_t jw = gy.lattice(w), je = gy.lattice(e);
  const std::int64_t lag = static_cast<std::int64_t>(gy.per_window() ? gy.per_window() : x.grid().per_window());
  if (lag <= 0) throw ArgumentError("grid carries no delay");
  if (je <= jw) throw ArgumentError("window must have positive length");
  if (je - jw > lag) throw ArgumentError("window longer than the delay");
  const std::size_t n = static_cast<std::size_t>(je - jw) + 1;
  TwoParamField out(gy.slice(jw, je), d, m);

  // per-cell ingredients
  const std::size_t cells = n - 1, dm = d * m;
  std::vector<double> c1(cells * d), rho(cells * d), loc(cells * dm);
  std::vector<double> sig(sigma.block());
  for (std::size_t k = 0; k < cells; ++k) {
    const std::int64_t v = jw + static_cast<std::int64_t>(k);
    const double* b0 = at_lat(inc.drift, v - lag);
    const double* b1 = at_lat(inc.drift, v + 1 - lag);
    const double* r0 = at_lat(inc.rough, v - lag);
    const double* r1 = at_lat(inc.rough, v + 1 - lag);
    const double* z0 = at_lat(inc.z, v - lag);
    const double* z1 = at_lat(inc.z, v + 1 - lag);
    for (std::size_t a = 0; a < d; ++a) {
      c1[k * d + a] = (b1[a] - b0[a]) + (z1[a] - z0[a]);
      rho[k * d + a] = r1[a] - r0[a];
    }
    sigma.value(std::span<const double>(at_lat(x, v - 2 * lag), d), sig);
    auto cell = yy.at_lattice(v, v + 1);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += sig[a * m + j] * cell[j * m + b];
        loc[k * dm + a * m + b] = acc;
      }
    }
  }

  // row s: running A = sum c, Q = sum c (x) Y, L = sum loc; J = A (x) y_t - Q + L
  std::vector<double> A(d), Q(dm), Lc(dm);
  for (std::size_t s = 0; s < cells; ++s) {
    std::fill(A.begin(), A.end(), 0.0);
    std::fill(Q.begin(), Q.end(), 0.0);
    std::fill(Lc.begin(), Lc.end(), 0.0);
    for (std::size_t k = s; k < cells; ++k) {
      const std::int64_t v = jw + static_cast<std::int64_t>(k);
      const double* yv = at_lat(y, v);
      const double* yv1 = at_lat(y, v + 1);
      for (std::size_t a = 0; a < d; ++a) {
        A[a] += c1[k * d + a] + rho[k * d + a];
        for (std::size_t b = 0; b < m; ++b) {
          Q[a * m + b] += c1[k * d + a] * yv[b] + rho[k * d + a] * yv1[b];
        }
      }
      for (std::size_t q = 0; q < dm; ++q) Lc[q] += loc[k * dm + q];
      auto dst = out.at(s, k + 1);
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          dst[a * m + b] = A[a] * yv1[b] - Q[a * m + b] + Lc[a * m + b];
        }
      }
    }
  }
  return out;
}

TwoParamField extend_delayed_tensor(const TwoParamField& previous, const TwoParamField& window, const GridPath& x,
                                    const GridPath& y) {
  const Grid& gp = previous.grid();
  const Grid& gw = window.grid();
  if (!gp.same_step(gw)) throw AlignmentError("tensor grids differ in step");
  if (gp.last() != gw.first()) throw ArgumentError("window tensor must start where the previous one ends");
  const std::size_t d = previous.rows(), m = previous.cols();
  if (window.rows() != d || window.cols() != m) throw ArgumentError("tensor blocks differ");
  const std::int64_t lag = x.grid().per_window() ? static_cast<std::int64_t>(x.grid().per_window())
                                                 : static_cast<std::int64_t>(gp.size() - 1);
  const std::int64_t j0 = gp.first(), jw = gw.first(), je = gw.last();
  TwoParamField out(Grid(gp.step(), j0, static_cast<std::size_t>(je - j0 + 1), gp.per_window()), d, m);
  const std::size_t np = gp.size(), nw = gw.size(), off = np - 1;
  for (std::size_t s = 0; s < np; ++s) {
    for (std::size_t t = s; t < np; ++t) {
      auto src = previous.at(s, t);
      std::copy(src.begin(), src.end(), out.at(s, t).begin());
    }
  }
  for (std::size_t s = 0; s < nw; ++s) {
    for (std::size_t t = s; t < nw; ++t) {
      auto src = window.at(s, t);
      std::copy(src.begin(), src.end(), out.at(off + s, off + t).begin());
    }
  }
  const double* xw = at_lat(x, jw - lag);
  const double* yw = at_lat(y, jw);
  for (std::size_t s = 0; s + 1 < np; ++s) {
    const std::int64_t js = j0 + static_cast<std::int64_t>(s);
    const double* xs = at_lat(x, js - lag);
    auto ps = previous.at(s, np - 1);
    for (std::size_t t = 1; t < nw; ++t) {
      auto wt = window.at(0, t);
      const double* yt = at_lat(y, jw + static_cast<std::int64_t>(t));
      auto dst = out.at(s, off + t);
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
          const std::size_t q = a * m + b;
          dst[q] = ps[q] + wt[q] + (xw[a] - xs[a]) * (yt[b] - yw[b]);
        }
      }
    }
  }
  return out;
}

}  // namespace roughreflect
