#include "roughreflect/solver.hpp"

#include <math.h>  // pchip in Boost 1.74 calls isnan unqualified

#include <algorithm>
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <memory>
#include <sstream>

#include "roughreflect/errors.hpp"
#include "roughreflect/skorokhod.hpp"

namespace roughreflect {

namespace {

double frob(const std::vector<double>& v) { return norm2(v); }

void require_size(const std::vector<double>& v, std::size_t n, const char* what) {
  if (v.size() != n) {
    std::ostringstream os;
    os << what << " has " << v.size() << " entries, expected " << n;
    throw ArgumentError(os.str());
  }
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return a == 0.0; });
}

MatrixMap make_map(std::size_t d, std::size_t m) {
  MatrixMap f;
  f.in_dim = d;
  f.rows = d;
  f.cols = m;
  return f;
}

/// sigma_ab(u) = C_ab g(u_a) for a scalar g with derivative dg.
template <class G, class DG>
MatrixMap rowwise_map(std::size_t d, std::size_t m, const std::vector<double>& C, G g, DG dg) {
  MatrixMap f = make_map(d, m);
  f.value = [C, d, m, g](std::span<const double> u, std::span<double> out) {
    for (std::size_t a = 0; a < d; ++a) {
      const double ga = g(u[a]);
      for (std::size_t b = 0; b < m; ++b) out[a * m + b] = C[a * m + b] * ga;
    }
  };
  f.jacobian = [C, d, m, dg](std::span<const double> u, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t a = 0; a < d; ++a) {
      const double da = dg(u[a]);
      for (std::size_t b = 0; b < m; ++b) out[(a * d + a) * m + b] = C[a * m + b] * da;
    }
  };
  return f;
}

}  // namespace

// ------------------------------------------------------------- diffusion

Diffusion sigma_zero(std::size_t d, std::size_t m) {
  Diffusion s;
  s.name = "zero";
  s.map = MatrixMap::constant(d, d, m, std::vector<double>(d * m, 0.0));
  s.sup = s.sup_prime = s.holder_prime = 0.0;
  s.constant = s.zero = true;
  return s;
}

Diffusion sigma_constant(std::size_t d, std::size_t m, std::vector<double> C) {
  require_size(C, d * m, "sigma constant");
  Diffusion s;
  s.name = "constant";
  s.sup = frob(C);
  s.sup_prime = s.holder_prime = 0.0;
  s.constant = true;
  s.zero = all_zero(C);
  s.map = MatrixMap::constant(d, d, m, std::move(C));
  return s;
}

Diffusion sigma_linear(std::size_t d, std::size_t m, std::vector<double> C, std::vector<double> A) {
  require_size(C, d * m, "sigma linear C");
  require_size(A, d * m, "sigma linear A");
  Diffusion s;
  s.name = "linear";
  s.map = make_map(d, m);
  s.map.value = [C, A, d, m](std::span<const double> u, std::span<double> out) {
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < m; ++b) out[a * m + b] = C[a * m + b] + A[a * m + b] * u[a];
    }
  };
  s.map.jacobian = [A, d, m](std::span<const double>, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = 0; b < m; ++b) out[(a * d + a) * m + b] = A[a * m + b];
    }
  };
  const bool flat = all_zero(A);
  s.sup = flat ? frob(C) : kInfinity;
  s.sup_prime = frob(A);
  s.holder_prime = 0.0;
  s.constant = flat;
  s.zero = flat && all_zero(C);
  return s;
}

Diffusion sigma_bounded(std::size_t d, std::size_t m, std::vector<double> C) {
  require_size(C, d * m, "sigma bounded");
  Diffusion s;
  s.name = "bounded";
  s.map = make_map(d, m);
  s.map.value = [C, d, m](std::span<const double> u, std::span<double> out) {
    double q = 1.0;
    for (std::size_t i = 0; i < d; ++i) q += u[i] * u[i];
    const double g = 1.0 / std::sqrt(q);
    for (std::size_t k = 0; k < d * m; ++k) out[k] = C[k] * g;
  };
  s.map.jacobian = [C, d, m](std::span<const double> u, std::span<double> out) {
    double q = 1.0;
    for (std::size_t i = 0; i < d; ++i) q += u[i] * u[i];
    const double g3 = 1.0 / (q * std::sqrt(q));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d * m; ++k) out[i * d * m + k] = -C[k] * u[i] * g3;
    }
  };
  const double c = frob(C);
  s.sup = c;
  // max_u |u| (1 + |u|^2)^{-3/2} = 2 / (3 sqrt 3); the Hessian of
  // (1 + |u|^2)^{-1/2} has operator norm at most 1.
  s.sup_prime = c * 2.0 / (3.0 * std::sqrt(3.0));
  s.holder_prime = c;
  s.zero = c == 0.0;
  s.constant = s.zero;
  return s;
}

Diffusion sigma_sine(std::size_t d, std::size_t m, std::vector<double> C) {
  require_size(C, d * m, "sigma sine");
  Diffusion s;
  s.name = "sine";
  const double c = frob(C);
  s.map = rowwise_map(d, m, C, [](double v) { return std::sin(v); }, [](double v) { return std::cos(v); });
  s.sup = s.sup_prime = s.holder_prime = c;
  s.zero = c == 0.0;
  s.constant = s.zero;
  return s;
}

Diffusion sigma_tabulated(std::size_t d, std::size_t m, std::vector<double> C, std::vector<double> nodes,
                          std::vector<double> values) {
  require_size(C, d * m, "sigma tabulated");
  if (nodes.size() != values.size()) throw ArgumentError("table nodes and values differ in length");
  if (nodes.size() < 4) throw ArgumentError("table needs at least four nodes");
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    if (!(nodes[k] > nodes[k - 1])) throw ArgumentError("table nodes must increase strictly");
  }
  using Spline = boost::math::interpolators::pchip<std::vector<double>>;
  const double lo = nodes.front(), hi = nodes.back();
  auto spline = std::make_shared<Spline>(std::vector<double>(nodes), std::vector<double>(values));
  const double g_lo = (*spline)(lo), g_hi = (*spline)(hi);
  const double s_lo = spline->prime(lo), s_hi = spline->prime(hi);
  auto g = [spline, lo, hi, g_lo, g_hi, s_lo, s_hi](double v) {
    if (v < lo) return g_lo + s_lo * (v - lo);
    if (v > hi) return g_hi + s_hi * (v - hi);
    return (*spline)(v);
  };
  auto dg = [spline, lo, hi, s_lo, s_hi](double v) {
    if (v < lo) return s_lo;
    if (v > hi) return s_hi;
    return spline->prime(v);
  };

  // sup |g| sits on a node (the interpolant is monotone between nodes);
  // sup |g'| and the Lipschitz constant of g' are scanned on a dense mesh.
  double gmax = 0.0, dmax = 0.0, lip = 0.0;
  for (double v : values) gmax = std::max(gmax, std::abs(v));
  constexpr int kSub = 64;
  double prev_v = lo, prev_d = dg(lo);
  for (std::size_t seg = 0; seg + 1 < nodes.size(); ++seg) {
    for (int q = 1; q <= kSub; ++q) {
      const double v = nodes[seg] + (nodes[seg + 1] - nodes[seg]) * q / kSub;
      const double dv = dg(v);
      dmax = std::max(dmax, std::abs(dv));
      lip = std::max(lip, std::abs(dv - prev_d) / (v - prev_v));
      prev_v = v;
      prev_d = dv;
    }
  }
  dmax = std::max(dmax, std::abs(dg(lo)));

  Diffusion s;
  s.name = "tabulated";
  const double c = frob(C);
  s.map = rowwise_map(d, m, C, g, dg);
  const bool flat_tails = s_lo == 0.0 && s_hi == 0.0;
  s.sup = flat_tails || c == 0.0 ? c * gmax : kInfinity;
  s.sup_prime = c * dmax;
  s.holder_prime = c * lip;
  s.zero = c == 0.0;
  s.constant = s.zero;
  return s;
}

// ----------------------------------------------------------------- drift

Drift Drift::zero(std::size_t d) {
  Drift b;
  b.dim = d;
  return b;
}

Drift Drift::instantaneous(std::vector<double> c, std::vector<double> A, Phi phi) {
  Drift b;
  b.dim = c.size();
  b.c = std::move(c);
  b.A = std::move(A);
  b.phi = phi;
  b.validate();
  return b;
}

Drift Drift::delayed(std::vector<double> c, std::vector<double> A, std::vector<double> B, Phi phi) {
  Drift b = instantaneous(std::move(c), std::move(A), phi);
  b.B = std::move(B);
  b.validate();
  return b;
}

void Drift::validate() const {
  if (dim == 0) throw ArgumentError("drift dimension must be positive");
  if (!c.empty()) require_size(c, dim, "drift c");
  if (!A.empty()) require_size(A, dim * dim, "drift A");
  if (!B.empty()) require_size(B, dim * dim, "drift B");
  if (!kappa.empty()) require_size(kappa, dim, "drift kappa");
  if (functional != HistoryFunctional::none && kappa.empty()) {
    throw ArgumentError("history functional needs kappa");
  }
}

bool Drift::is_zero() const {
  return all_zero(c) && all_zero(A) && all_zero(B) && (functional == HistoryFunctional::none || all_zero(kappa));
}

bool Drift::bounded() const {
  const bool linear_part = phi == Phi::tanh || (all_zero(A) && all_zero(B));
  const bool history = functional == HistoryFunctional::none || all_zero(kappa);
  return linear_part && history;
}

double Drift::sup() const {
  if (!bounded()) return kInfinity;
  // |tanh| <= 1 componentwise, so |A tanh(u)| <= |A|_F sqrt(d).
  return norm2(c) + std::sqrt(static_cast<double>(dim)) * (norm2(A) + norm2(B));
}

double Drift::lipschitz() const {
  const double hist = functional == HistoryFunctional::none ? 0.0 : norm2(kappa);
  return norm2(A) + norm2(B) + hist;
}

namespace {

double phi_of(Phi p, double v) { return p == Phi::tanh ? std::tanh(v) : v; }

/// Shared evaluation: b at local index k given the functional value(s).
void drift_core(const Drift& b, const double* xt, const double* xd, const double* fval, std::span<double> out) {
  const std::size_t d = b.dim;
  for (std::size_t i = 0; i < d; ++i) out[i] = b.c.empty() ? 0.0 : b.c[i];
  if (!b.A.empty()) {
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += b.A[i * d + j] * phi_of(b.phi, xt[j]);
      out[i] += acc;
    }
  }
  if (!b.B.empty()) {
    for (std::size_t i = 0; i < d; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += b.B[i * d + j] * phi_of(b.phi, xd[j]);
      out[i] += acc;
    }
  }
  if (b.functional == HistoryFunctional::running_sup) {
    for (std::size_t i = 0; i < d; ++i) out[i] += b.kappa[i] * fval[0];
  } else if (b.functional == HistoryFunctional::window_mean) {
    for (std::size_t i = 0; i < d; ++i) out[i] += b.kappa[i] * fval[i];
  }
}

std::size_t lag_steps(const GridPath& x) {
  const std::size_t L = x.grid().per_window();
  if (L == 0) throw ArgumentError("path grid carries no delay");
  return L;
}

bool needs_delay(const Drift& b) { return !b.B.empty() || b.functional == HistoryFunctional::window_mean; }

/// b at the local indices [k0, k1] of x, with functionals maintained
/// incrementally.
void drift_range(const Drift& b, const GridPath& x, std::size_t k0, std::size_t k1, std::vector<double>& out) {
  const std::size_t d = b.dim;
  out.assign((k1 - k0 + 1) * d, 0.0);
  const std::size_t L = needs_delay(b) ? lag_steps(x) : 0;
  if (needs_delay(b) && k0 < L) throw RangeError("drift needs the history on [t - r, t]");
  std::vector<double> fval(d, 0.0), wsum(d, 0.0);
  double run_sup = 0.0;
  if (b.functional == HistoryFunctional::running_sup) {
    for (std::size_t j = 0; j < k0; ++j) run_sup = std::max(run_sup, norm2(x.point(j)));
  } else if (b.functional == HistoryFunctional::window_mean) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = k0 - L; j < k0; ++j) wsum[i] += x(j, i);
    }
  }
  for (std::size_t k = k0; k <= k1; ++k) {
    if (b.functional == HistoryFunctional::running_sup) {
      run_sup = std::max(run_sup, norm2(x.point(k)));
      fval[0] = run_sup;
    } else if (b.functional == HistoryFunctional::window_mean) {
      // wsum = x_{k-L} + ... + x_k; trapezoid mean over [t - r, t]
      for (std::size_t i = 0; i < d; ++i) {
        if (k > k0) wsum[i] -= x(k - L - 1, i);
        wsum[i] += x(k, i);
        fval[i] = (wsum[i] - 0.5 * (x(k - L, i) + x(k, i))) / static_cast<double>(L);
      }
    }
    const double* xd = L ? &x.values()[(k - L) * d] : nullptr;
    drift_core(b, &x.values()[k * d], xd, fval.data(), std::span<double>(out.data() + (k - k0) * d, d));
  }
}

}  // namespace

void drift_eval(const Drift& b, const GridPath& x, std::size_t k, std::span<double> out) {
  b.validate();
  if (x.dim() != b.dim) throw ArgumentError("drift and path dimensions differ");
  if (out.size() != b.dim) throw ArgumentError("drift output has the wrong size");
  if (k >= x.size()) throw RangeError("drift evaluated outside the path");
  std::vector<double> buf;
  drift_range(b, x, k, k, buf);
  std::copy(buf.begin(), buf.end(), out.begin());
}

// ----------------------------------------------------------- coefficients

void Coefficients::validate() const {
  frac.validate();
  drift.validate();
  const std::size_t d = eta.dim();
  if (d == 0 || eta.size() < 2) throw ArgumentError("eta must be a path on [-r, 0]");
  if (eta.grid().last() != 0) throw ArgumentError("eta must end at t = 0");
  if (eta.grid().per_window() != eta.size() - 1) throw ArgumentError("eta grid must span exactly one delay");
  if (drift.dim != d) throw ArgumentError("drift dimension differs from eta");
  if (sigma.map.in_dim != d || sigma.map.rows != d) throw ArgumentError("sigma must map R^d to R^{d x m}");
  eta.require_finite();
  for (double v : eta.values()) {
    if (v < 0.0) throw DomainError("eta must be nonnegative");
  }
}

namespace {

/// p on [t0, t1] with step h, refined by linear interpolation.
GridPath refine_linear(const GridPath& p, std::size_t R) {
  const Grid& g = p.grid();
  const auto Ri = static_cast<std::int64_t>(R);
  const Grid fine(g.step() / static_cast<double>(R), g.first() * Ri, (g.size() - 1) * R + 1, g.per_window() * R);
  GridPath out(fine, p.dim());
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    for (std::size_t q = 0; q < R; ++q) {
      const double w = static_cast<double>(q) / static_cast<double>(R);
      for (std::size_t i = 0; i < p.dim(); ++i) out(k * R + q, i) = (1.0 - w) * p(k, i) + w * p(k + 1, i);
    }
  }
  for (std::size_t i = 0; i < p.dim(); ++i) out(fine.size() - 1, i) = p(g.size() - 1, i);
  return out;
}

}  // namespace

Driver smooth_driver(const GridPath& y, const GridPath& eta) {
  const double r = eta.grid().t1() - eta.grid().t0();
  const double T = y.grid().t1();
  Driver dr;
  dr.y = y;
  dr.eta_tensor = delayed_lift(eta, y, r, 0.0, std::min(r, T));
  if (T > r) dr.yy = delayed_lift(y, y, r, r, T);
  return dr;
}

Driver fbm_driver(const FbmSample& sample, const GridPath& eta) {
  const double r = eta.grid().t1() - eta.grid().t0();
  const double T = sample.path.grid().t1();
  Driver dr;
  dr.y = sample.path;
  const GridPath eta_fine = translate_path(refine_linear(eta, sample.refinement), r);
  dr.eta_tensor = refined_lift(eta_fine, sample.fine, sample.refinement, 0.0, std::min(r, T));
  if (T > r) dr.yy = stratonovich_tensor(sample, r, r, T);
  return dr;
}

// ---------------------------------------------------------------- solving

std::pair<double, double> window_bounds(const Grid& grid, std::size_t n, double horizon) {
  const auto N = static_cast<std::int64_t>(grid.per_window());
  if (N == 0) throw ArgumentError("grid carries no delay");
  const std::int64_t jT = horizon < grid.t1() ? grid.lattice(horizon) : grid.last();
  const std::int64_t jw = static_cast<std::int64_t>(n) * N;
  if (jw >= jT) throw RangeError("window starts after the horizon");
  const std::int64_t je = std::min(jw + N, jT);
  return {grid.time_of(jw), grid.time_of(je)};
}

GridPath window_rough_term(const Coefficients& coefs, const GridPath& x, const TwoParamField& tensor,
                           const GridPath& y, double w, double e, RoughScheme scheme,
                           bool closed_form_constant_sigma) {
  const std::size_t d = coefs.d(), m = coefs.m();
  const Grid g = y.grid().sub(w, e);
  GridPath out(g, d);
  if (coefs.sigma.zero) return out;
  if (coefs.sigma.constant && closed_form_constant_sigma) {
    const auto C = coefs.sigma.map(std::vector<double>(d, 0.0));
    const auto y0 = y.at(w);
    for (std::size_t k = 0; k < g.size(); ++k) {
      const auto yk = y.at(g.time(k));
      for (std::size_t a = 0; a < d; ++a) {
        double acc = 0.0;
        for (std::size_t b = 0; b < m; ++b) acc += C[a * m + b] * (yk[b] - y0[b]);
        out(k, a) = acc;
      }
    }
    return out;
  }
  if (tensor.grid().size() == 0) throw ArgumentError("window tensor missing");
  const double r = coefs.delay();
  const GridPath xs = translate_path(x, r).restrict(w, e);
  if (scheme == RoughScheme::interpolated) {
    return interpolated_rough_integral_cumulative(coefs.sigma.map, xs, y, tensor, w, e);
  }
  return rough_integral_cumulative(coefs.sigma.map, xs, y, tensor, coefs.frac, w, e);
}

PicardResult picard_window(const Coefficients& coefs, const GridPath& rough, double w, double e,
                           const SolverConfig& cfg, std::size_t window, GridPath& x, GridPath& z, GridPath& xi,
                           GridPath& drift_cum) {
  const Grid& g = x.grid();
  const std::size_t d = x.dim();
  const std::size_t i0 = g.index(w), i1 = g.index(e);
  const std::size_t K = i1 - i0;
  const std::size_t c0 = drift_cum.grid().index(w);
  const double h = g.step();
  const Drift& b = coefs.drift;
  const bool zero_drift = b.is_zero();

  std::vector<double> u((K + 1) * d), bv;
  for (std::size_t k = 0; k <= K; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      u[k * d + i] = x(i0, i) + (k == 0 ? 0.0 : cfg.init_offset);
      x(i0 + k, i) = u[k * d + i];
    }
  }

  PicardResult res;
  double prev_change = kInfinity;
  std::vector<double> D(d);
  for (;;) {
    ++res.iterations;
    if (zero_drift) {
      bv.assign((K + 1) * d, 0.0);
    } else {
      drift_range(b, x, i0, i1, bv);
    }
    std::fill(D.begin(), D.end(), 0.0);
    for (std::size_t k = 1; k <= K; ++k) {
      for (std::size_t i = 0; i < d; ++i) {
        D[i] += 0.5 * h * (bv[(k - 1) * d + i] + bv[k * d + i]);
        xi(i0 + k, i) = xi(i0, i) + D[i] + rough(k, i);
        drift_cum(c0 + k, i) = drift_cum(c0, i) + D[i];
      }
    }
    if (cfg.reflect) {
      reflect_in_place(xi, x, z, i0 + 1, i1 + 1);
    } else {
      for (std::size_t k = 1; k <= K; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
          z(i0 + k, i) = z(i0, i);
          x(i0 + k, i) = xi(i0 + k, i) + z(i0, i);
        }
      }
    }
    double change = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
      for (std::size_t i = 0; i < d; ++i) {
        change = std::max(change, std::abs(x(i0 + k, i) - u[k * d + i]));
        u[k * d + i] = x(i0 + k, i);
      }
    }
    res.ratio = prev_change < kInfinity && prev_change > 0.0 ? change / prev_change : 0.0;
    res.change = change;
    prev_change = change;
    if (zero_drift || change <= cfg.tol) break;
    if (!std::isfinite(change) || res.iterations >= cfg.max_iter) {
      std::ostringstream os;
      os << "Picard iteration did not converge on window " << window << " after " << res.iterations
         << " sweeps (change " << change << ", ratio " << res.ratio << ")";
      throw NonContractionError(os.str(), window, res.ratio, change);
    }
  }
  return res;
}

namespace {

void validate_tensor(const GridPath& x_delayed, const GridPath& y, const TwoParamField& xy, double tol,
                     const char* what) {
  const double lo = xy.lo(), hi = xy.hi();
  const GridPath xs = x_delayed.restrict(lo, hi);
  const GridPath ys = y.restrict(lo, hi);
  const double scale = (1.0 + 2.0 * sup_norm(xs)) * (1.0 + 2.0 * sup_norm(ys));
  ChenOptions opt;
  opt.tol = tol * scale;
  opt.samples = 2000;
  const ChenReport rep = check_multiplicative(xs, ys, xy, opt);
  if (!rep.pass) {
    std::ostringstream os;
    os << what << " fails the multiplicative identity: residual " << rep.max_residual << " at (" << rep.s << ", "
       << rep.u << ", " << rep.t << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

Solution solve(const Coefficients& coefs, const Driver& driver, const SolverConfig& cfg) {
  coefs.validate();
  const std::size_t d = coefs.d(), m = coefs.m();
  const GridPath& y = driver.y;
  const Grid& ge = coefs.eta.grid();
  const double r = coefs.delay();
  const std::size_t N = ge.per_window();
  if (y.dim() != m) throw ArgumentError("driver dimension differs from sigma's columns");
  if (!y.grid().same_step(ge)) throw AlignmentError("driver and eta grids differ in step");
  if (!y.grid().contains_lattice(0)) throw RangeError("driver must start at or before t = 0");
  y.require_finite();
  const std::int64_t jT = cfg.horizon < y.grid().t1() ? y.grid().lattice(cfg.horizon) : y.grid().last();
  if (jT <= 0) throw ArgumentError("horizon must be positive");
  const double T = y.grid().time_of(jT);

  const Grid grid(ge.step(), ge.first(), static_cast<std::size_t>(static_cast<std::int64_t>(N) + jT) + 1, N);
  if (driver.eta_tensor.rows() != d || driver.eta_tensor.cols() != m) {
    throw ArgumentError("eta tensor must be d x m");
  }
  if (driver.eta_tensor.lo() > 0.0 || driver.eta_tensor.hi() < std::min(r, T)) {
    throw RangeError("eta tensor must cover [0, min(r, T)]");
  }
  if (T > r) {
    if (driver.yy.grid().size() == 0) throw ArgumentError("driver tensor on [r, T] missing");
    if (driver.yy.rows() != m || driver.yy.cols() != m) throw ArgumentError("driver tensor must be m x m");
    if (driver.yy.lo() > r || driver.yy.hi() < T) throw RangeError("driver tensor must cover [r, T]");
  }
  if (cfg.validate_tensors) {
    validate_tensor(translate_path(coefs.eta, r), y, driver.eta_tensor.restrict(0.0, std::min(r, T)),
                    cfg.tensor_tol, "eta tensor");
    if (T > r) validate_tensor(translate_path(y, r), y, driver.yy.restrict(r, T), cfg.tensor_tol, "driver tensor");
  }

  Solution sol;
  sol.x = GridPath(grid, d);
  sol.z = GridPath(grid, d);
  sol.xi = GridPath(grid, d);
  for (std::size_t k = 0; k <= N; ++k) {
    for (std::size_t i = 0; i < d; ++i) sol.x(k, i) = sol.xi(k, i) = coefs.eta(k, i);
  }
  const Grid gpos = grid.slice(0, jT);
  sol.drift = GridPath(gpos, d);
  sol.rough = GridPath(gpos, d);
  const TwoParamField yy = T > r ? driver.yy.restrict(r, T) : TwoParamField{};

  for (std::size_t n = 0;; ++n) {
    if (static_cast<std::int64_t>(n * N) >= jT) break;
    const auto [w, e] = window_bounds(grid, n);
    TwoParamField J = n == 0 ? driver.eta_tensor.restrict(0.0, e)
                             : delayed_window_tensor(coefs.sigma.map, sol.x, y, yy,
                                                     WindowIncrements{sol.drift, sol.rough, sol.z}, w, e);
    const GridPath R = window_rough_term(coefs, sol.x, J, y, w, e, cfg.scheme, cfg.closed_form_constant_sigma);
    const std::size_t c0 = gpos.index(w);
    for (std::size_t k = 1; k < R.size(); ++k) {
      for (std::size_t i = 0; i < d; ++i) sol.rough(c0 + k, i) = sol.rough(c0, i) + R(k, i);
    }
    const PicardResult pr = picard_window(coefs, R, w, e, cfg, n, sol.x, sol.z, sol.xi, sol.drift);
    WindowReport rep;
    rep.index = n;
    rep.start = w;
    rep.end = e;
    rep.iterations = pr.iterations;
    rep.change = pr.change;
    rep.ratio = pr.ratio;
    rep.holder_x = holder_norm(sol.x, coefs.frac.beta, w, e);
    sol.windows.push_back(rep);
    sol.tensors.push_back(std::move(J));
  }

  // Self-consistency with the drift recomputed from the final x.
  std::vector<double> bv;
  const std::size_t k0 = static_cast<std::size_t>(N);
  drift_range(coefs.drift, sol.x, k0, grid.size() - 1, bv);
  std::vector<double> D(d, 0.0);
  const double h = grid.step();
  for (std::size_t k = 0; k < gpos.size(); ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      if (k > 0) D[i] += 0.5 * h * (bv[(k - 1) * d + i] + bv[k * d + i]);
      const double expect = coefs.eta(N, i) + D[i] + sol.rough(k, i) + sol.z(k0 + k, i);
      sol.residual = std::max(sol.residual, std::abs(sol.x(k0 + k, i) - expect));
    }
  }
  return sol;
}

SolutionChecks check_solution(const Solution& sol, const Coefficients& coefs, double residual_tol) {
  SolutionChecks c;
  const std::size_t d = sol.x.dim();
  for (std::size_t k = 0; k < sol.x.size(); ++k) {
    for (std::size_t i = 0; i < d; ++i) c.negativity = std::max(c.negativity, -sol.x(k, i));
  }
  const auto dec = solve_skorokhod(sol.xi);
  c.skorokhod_consistent = dec.x.values() == sol.x.values() && dec.z.values() == sol.z.values();
  for (std::size_t k = 0; k < coefs.eta.size(); ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      c.eta_mismatch = std::max(c.eta_mismatch, std::abs(sol.x(k, i) - coefs.eta(k, i)));
    }
  }
  c.residual = sol.residual;
  c.pass = c.negativity <= 1e-12 && c.skorokhod_consistent && c.eta_mismatch == 0.0 && c.residual <= residual_tol;
  return c;
}

// ------------------------------------------------------------ a-priori bound

BoundReport a_priori_bound(const Coefficients& coefs, const Driver& driver, const Solution& sol, double K,
                           double k) {
  if (!coefs.drift.bounded() || !coefs.sigma.bounded()) {
    throw ArgumentError("the bound needs bounded b, sigma and sigma'");
  }
  if (K < 0.0 || k < 0.0) throw ArgumentError("bound constants must be nonnegative");
  const double beta = coefs.frac.beta;
  const double r = coefs.delay();
  const double T = sol.x.grid().t1();
  const double sd = std::sqrt(static_cast<double>(coefs.d()));

  BoundReport b;
  b.K = K;
  b.mu = coefs.drift.sup() + coefs.sigma.sup + coefs.sigma.sup_prime + coefs.sigma.holder_prime;
  b.eta_holder = holder_norm(coefs.eta, beta).norm;
  b.eta_tensor = holder_norm_2param(driver.eta_tensor, 2.0 * beta, 0.0, std::min(r, T)).norm;
  b.y_holder = holder_norm(driver.y, beta, 0.0, T).norm;
  b.yy_tensor = T > r ? holder_norm_2param(driver.yy, 2.0 * beta, r, T).norm : 0.0;
  const double ybr = b.y_holder + b.y_holder * b.y_holder + b.yy_tensor;
  const double S = b.eta_holder + b.eta_tensor + b.mu * (sd + 1.0) * ybr;
  b.scale = std::pow(S, 1.0 / beta);
  const double Sk = b.eta_holder + b.eta_tensor + (sd + 1.0) * (1.0 + 3.0 * k) * b.mu * ybr;
  b.delta_y = Sk > 0.0 ? std::pow(Sk, -1.0 / beta) : kInfinity;
  const double eta0 = norm2(coefs.eta.point(coefs.eta.size() - 1));
  b.rhs = 2.0 + eta0 + T * std::pow(K * S, 1.0 / beta);
  b.lhs = sup_norm(sol.x, 0.0, T);
  const double excess = b.lhs - 2.0 - eta0;
  if (excess <= 0.0) {
    b.minimal_K = 0.0;
  } else {
    b.minimal_K = S > 0.0 ? std::pow(excess / T, beta) / S : kInfinity;
  }
  b.pass = b.lhs <= b.rhs;
  return b;
}

}  // namespace roughreflect
