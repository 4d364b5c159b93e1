#include "roughreflect/fraccalc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "roughreflect/errors.hpp"
#include "roughreflect/quadrature.hpp"

namespace roughreflect {

// ------------------------------------------------------------ FracParams

double FracParams::alpha_upper(double beta, double gamma) { return std::min(2.0 * beta, (gamma * beta + 1.0) / 2.0); }

double FracParams::default_alpha(double beta, double gamma) {
  return 0.5 * ((1.0 - beta) + alpha_upper(beta, gamma));
}

FracParams FracParams::with_default_alpha(double beta, double gamma) {
  FracParams p{default_alpha(beta, gamma), beta, gamma};
  p.validate();
  return p;
}

void FracParams::validate() const {
  if (!(beta > 1.0 / 3.0 && beta < 0.5)) throw ArgumentError("beta must lie in (1/3, 1/2)");
  if (!(gamma > 1.0 / beta - 2.0 && gamma <= 1.0)) throw ArgumentError("gamma must lie in (1/beta - 2, 1]");
  const double hi = alpha_upper(beta, gamma);
  if (!(alpha > 1.0 - beta && alpha < hi)) {
    throw ArgumentError("alpha = " + std::to_string(alpha) + " outside the admissible window (" +
                        std::to_string(1.0 - beta) + ", " + std::to_string(hi) + ")");
  }
}

namespace {

struct Span {
  std::int64_t ja = 0;
  std::size_t K = 0;  // steps from a to b
};

Span span_of(const Grid& g, double a, double b) {
  if (!(a < b)) throw ArgumentError("fractional operator needs a < b");
  const std::int64_t ja = g.lattice(a), jb = g.lattice(b);
  if (!g.contains_lattice(ja) || !g.contains_lattice(jb)) throw RangeError("[a,b] outside the sampled grid");
  return {ja, static_cast<std::size_t>(jb - ja)};
}

void require_covers(const Grid& g, const Span& sp, const char* what) {
  if (!g.contains_lattice(sp.ja) || !g.contains_lattice(sp.ja + static_cast<std::int64_t>(sp.K))) {
    throw RangeError(std::string(what) + " does not cover [a,b]");
  }
}

const double* value_ptr(const GridPath& p, std::int64_t j) {
  return p.values().data() + static_cast<std::size_t>(j - p.grid().first()) * p.dim();
}

}  // namespace

// ---------------------------------------------------- integrals/derivatives

GridPath rl_integral(const GridPath& f, double alpha, Side side, double a, double b) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("integral order must lie in (0,1]");
  const Span sp = span_of(f.grid(), a, b);
  const std::size_t K = sp.K, d = f.dim();
  const double h = f.grid().step();
  const PowerWeights w(alpha - 1.0, K);
  const double scale = std::pow(h, alpha) / std::tgamma(alpha);
  GridPath out(f.grid().slice(sp.ja, sp.ja + static_cast<std::int64_t>(K)), d);
  for (std::size_t k = 0; k <= K; ++k) {
    const std::size_t L = side == Side::left ? k : K - k;
    if (L == 0) continue;
    for (std::size_t j = 0; j <= L; ++j) {
      const std::int64_t src = side == Side::left ? sp.ja + static_cast<std::int64_t>(k - j)
                                                  : sp.ja + static_cast<std::int64_t>(k + j);
      const double* fv = value_ptr(f, src);
      const double wj = w.node(j, L) * scale;
      for (std::size_t i = 0; i < d; ++i) out(k, i) += wj * fv[i];
    }
  }
  return out;
}

namespace {

GridPath weyl(const GridPath& f, double alpha, double a, double b, Side side) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("derivative order must lie in (0,1)");
  const Span sp = span_of(f.grid(), a, b);
  const std::size_t K = sp.K, d = f.dim();
  const double h = f.grid().step();
  const PowerWeights w(-alpha - 1.0, K);
  const double c = 1.0 / std::tgamma(1.0 - alpha);
  const double hs = std::pow(h, -alpha);
  const std::int64_t j0 = side == Side::left ? sp.ja + 1 : sp.ja;
  GridPath out(f.grid().slice(j0, j0 + static_cast<std::int64_t>(K) - 1), d);
  std::vector<double> acc(d);
  for (std::size_t q = 0; q < K; ++q) {
    const std::size_t k = side == Side::left ? q + 1 : q;  // local index in [a,b]
    const std::size_t L = side == Side::left ? k : K - k;
    const double* ft = value_ptr(f, sp.ja + static_cast<std::int64_t>(k));
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t j = 1; j <= L; ++j) {
      const std::int64_t src = side == Side::left ? sp.ja + static_cast<std::int64_t>(k - j)
                                                  : sp.ja + static_cast<std::int64_t>(k + j);
      const double* fs = value_ptr(f, src);
      const double wj = w.node(j, L);
      for (std::size_t i = 0; i < d; ++i) acc[i] += wj * (ft[i] - fs[i]);
    }
    const double edge = std::pow(static_cast<double>(L) * h, -alpha);
    for (std::size_t i = 0; i < d; ++i) out(q, i) = c * (ft[i] * edge + alpha * hs * acc[i]);
  }
  return out;
}

}  // namespace

GridPath weyl_left(const GridPath& f, double alpha, double a, double b) { return weyl(f, alpha, a, b, Side::left); }

GridPath weyl_right(const GridPath& f, double alpha, double a, double b) { return weyl(f, alpha, a, b, Side::right); }

// --------------------------------------------------------- rough engine

namespace {

/// Shared state of the rough integral on one interval [a,b].
class RoughEngine {
 public:
  RoughEngine(const MatrixMap& f, const GridPath& x, const GridPath& y, const TwoParamField& xy, const FracParams& p,
              double a, double b)
      : g_(xy) {
    p.validate();
    if (x.dim() != f.in_dim) throw ArgumentError("path dimension does not match the map's input");
    if (y.dim() != f.cols) throw ArgumentError("driver dimension does not match the map's columns");
    if (xy.rows() != x.dim() || xy.cols() != y.dim()) throw ArgumentError("tensor block must be d x m");
    if (!x.grid().same_step(y.grid()) || !x.grid().same_step(xy.grid())) throw AlignmentError("grids differ in step");
    sp_ = span_of(x.grid(), a, b);
    require_covers(y.grid(), sp_, "driver");
    require_covers(xy.grid(), sp_, "tensor");
    K_ = sp_.K;
    d_ = f.in_dim;
    m_ = f.cols;
    rows_ = f.rows;
    h_ = x.grid().step();
    alpha_ = p.alpha;
    nu_ = 2.0 * p.alpha - 1.0;
    goff_ = static_cast<std::size_t>(sp_.ja - xy.grid().first());

    w_out1_ = PowerWeights(-alpha_, K_);
    w_out2_ = PowerWeights(-nu_, K_);
    w_right_ = PowerWeights(alpha_ - 2.0, K_);
    w_comp_ = PowerWeights(-alpha_, K_);
    w_nu_ = PowerWeights(-nu_ - 1.0, K_);

    lag_am1_.assign(K_ + 1, 0.0);
    for (std::size_t L = 1; L <= K_; ++L) lag_am1_[L] = std::pow(static_cast<double>(L) * h_, alpha_ - 1.0);

    yv_.resize((K_ + 1) * m_);
    for (std::size_t k = 0; k <= K_; ++k) {
      const double* yk = value_ptr(y, sp_.ja + static_cast<std::int64_t>(k));
      std::copy(yk, yk + m_, yv_.begin() + static_cast<std::ptrdiff_t>(k * m_));
    }
    prepare_left(f, x);
  }

  std::size_t steps() const noexcept { return K_; }

  std::vector<double> at_end() {
    const std::size_t T = K_;
    std::vector<double> Sy(T * m_, 0.0), Sg(T * d_ * m_, 0.0);
    for (std::size_t k = 0; k < T; ++k) {
      const std::size_t L = T - k;
      const double* yk = &yv_[k * m_];
      for (std::size_t j = 1; j <= L; ++j) {
        const double w = w_right_.node(j, L);
        const double* yj = &yv_[(k + j) * m_];
        for (std::size_t c = 0; c < m_; ++c) Sy[k * m_ + c] += w * (yk[c] - yj[c]);
        auto gv = g_.at(goff_ + k, goff_ + k + j);
        for (std::size_t q = 0; q < d_ * m_; ++q) Sg[k * d_ * m_ + q] += w * gv[q];
      }
    }
    std::vector<double> out(rows_, 0.0);
    evaluate(T, Sy, Sg, out.data());
    return out;
  }

  GridPath cumulative() {
    GridPath out(Grid(h_, sp_.ja, K_ + 1), rows_);
    std::vector<double> Sy(K_ * m_, 0.0), Sg(K_ * d_ * m_, 0.0);
    const std::size_t dm = d_ * m_;
    for (std::size_t T = 1; T <= K_; ++T) {
      // extend every running integral on [r, T-1] by the cell [T-1, T]
      const double* yT = &yv_[T * m_];
      for (std::size_t k = 0; k < T; ++k) {
        const std::size_t cell = T - k - 1;
        const double wl = w_right_.left(cell), wr = w_right_.right(cell);
        const double* yk = &yv_[k * m_];
        const double* yl = &yv_[(T - 1) * m_];
        for (std::size_t c = 0; c < m_; ++c) Sy[k * m_ + c] += wl * (yk[c] - yl[c]) + wr * (yk[c] - yT[c]);
        auto gl = g_.at(goff_ + k, goff_ + T - 1);
        auto gr = g_.at(goff_ + k, goff_ + T);
        for (std::size_t q = 0; q < dm; ++q) Sg[k * dm + q] += wl * gl[q] + wr * gr[q];
      }
      evaluate(T, Sy, Sg, &out(T, 0));
    }
    return out;
  }

 private:
  void prepare_left(const MatrixMap& f, const GridPath& x) {
    const std::size_t B = rows_ * m_;
    std::vector<double> fx((K_ + 1) * B), dfx((K_ + 1) * d_ * B), xs((K_ + 1) * d_);
    for (std::size_t k = 0; k <= K_; ++k) {
      const double* xk = value_ptr(x, sp_.ja + static_cast<std::int64_t>(k));
      std::copy(xk, xk + d_, xs.begin() + static_cast<std::ptrdiff_t>(k * d_));
      std::span<const double> u(xk, d_);
      f.value(u, std::span<double>(&fx[k * B], B));
      f.jacobian(u, std::span<double>(&dfx[k * d_ * B], d_ * B));
    }
    const double ca = 1.0 / std::tgamma(1.0 - alpha_);
    const double cn = 1.0 / std::tgamma(1.0 - nu_);
    const double h_comp = std::pow(h_, 1.0 - alpha_);
    const double h_nu = std::pow(h_, -nu_);

    Ft_.assign((K_ + 1) * B, 0.0);
    At_.assign((K_ + 1) * d_ * B, 0.0);
    // The constant f(x_a) is integrated exactly (it contributes
    // f(x_a)(y_b - y_a)); only f(x) - f(x_a) goes through the quadrature,
    // which removes the leading error near the left end.
    f0_.assign(fx.begin(), fx.begin() + static_cast<std::ptrdiff_t>(B));
    for (std::size_t q = 0; q < d_ * B; ++q) At_[q] = cn * dfx[q];

    std::vector<double> acc(B), accA(d_ * B), R(B);
    for (std::size_t k = 1; k <= K_; ++k) {
      std::fill(acc.begin(), acc.end(), 0.0);
      std::fill(accA.begin(), accA.end(), 0.0);
      const double* fk = &fx[k * B];
      const double* dk = &dfx[k * d_ * B];
      const double* xk = &xs[k * d_];
      for (std::size_t j = 1; j <= k; ++j) {
        const std::size_t th = k - j;
        const double* ft = &fx[th * B];
        const double* dt = &dfx[th * d_ * B];
        const double* xt = &xs[th * d_];
        for (std::size_t q = 0; q < B; ++q) R[q] = fk[q] - ft[q];
        for (std::size_t i = 0; i < d_; ++i) {
          const double dx = xk[i] - xt[i];
          for (std::size_t q = 0; q < B; ++q) R[q] -= dt[i * B + q] * dx;
        }
        const double wc = w_comp_.node(j, k) / (static_cast<double>(j) * h_);
        for (std::size_t q = 0; q < B; ++q) acc[q] += wc * R[q];
        const double wn = w_nu_.node(j, k);
        for (std::size_t q = 0; q < d_ * B; ++q) accA[q] += wn * (dk[q] - dt[q]);
      }
      const double rk = static_cast<double>(k) * h_;
      const double fa = alpha_ * std::pow(rk, alpha_) * h_comp;
      const double fn = nu_ * std::pow(rk, nu_) * h_nu;
      for (std::size_t q = 0; q < B; ++q) Ft_[k * B + q] = ca * ((fk[q] - f0_[q]) + fa * acc[q]);
      for (std::size_t q = 0; q < d_ * B; ++q) At_[k * d_ * B + q] = cn * (dk[q] + fn * accA[q]);
    }
  }

  /// Assembles the value at local endpoint T from the running integrals
  /// Sy[k] = sum_j node(j,T-k)(y_k - y_{k+j}), Sg[k] = sum_j node(j,T-k) g(k,k+j).
  void evaluate(std::size_t T, const std::vector<double>& Sy, const std::vector<double>& Sg, double* out) {
    const std::size_t dm = d_ * m_, B = rows_ * m_;
    const double ca = 1.0 / std::tgamma(alpha_);
    const double hr = std::pow(h_, alpha_ - 1.0) * (1.0 - alpha_);
    G_.assign((T + 1) * m_, 0.0);
    H_.assign((T + 1) * dm, 0.0);
    E_.assign((T + 1) * dm, 0.0);
    const double* yT = &yv_[T * m_];
    for (std::size_t k = 0; k < T; ++k) {
      const std::size_t L = T - k;
      const double* yk = &yv_[k * m_];
      for (std::size_t c = 0; c < m_; ++c) {
        G_[k * m_ + c] = ca * ((yk[c] - yT[c]) * lag_am1_[L] + hr * Sy[k * m_ + c]);
      }
      auto gT = g_.at(goff_ + k, goff_ + T);
      for (std::size_t q = 0; q < dm; ++q) H_[k * dm + q] = ca * (gT[q] * lag_am1_[L] + hr * Sg[k * dm + q]);
    }
    // E(k) = ca (H_k lag^{a-1} + hr (H_k total(L) - sum_{j<L} interior(j) H_{k+j})), H_T = 0
    std::vector<double> conv(dm);
    for (std::size_t k = 0; k < T; ++k) {
      const std::size_t L = T - k;
      std::fill(conv.begin(), conv.end(), 0.0);
      for (std::size_t j = 1; j < L; ++j) {
        const double w = w_right_.interior(j);
        const double* hj = &H_[(k + j) * dm];
        for (std::size_t q = 0; q < dm; ++q) conv[q] += w * hj[q];
      }
      const double tot = w_right_.total(L);
      for (std::size_t q = 0; q < dm; ++q) {
        const double hk = H_[k * dm + q];
        E_[k * dm + q] = ca * (hk * lag_am1_[L] + hr * (hk * tot - conv[q]));
      }
    }
    const double h1 = std::pow(h_, 1.0 - alpha_);
    const double h2 = std::pow(h_, 1.0 - nu_);
    for (std::size_t row = 0; row < rows_; ++row) {
      double t1 = 0.0, t2 = 0.0;
      for (std::size_t k = 0; k < T; ++k) {
        const double* Fk = &Ft_[k * B + row * m_];
        const double* Gk = &G_[k * m_];
        double s1 = 0.0;
        for (std::size_t c = 0; c < m_; ++c) s1 += Fk[c] * Gk[c];
        t1 += w_out1_.node(k, T) * s1;
        double s2 = 0.0;
        for (std::size_t i = 0; i < d_; ++i) {
          const double* Ak = &At_[(k * d_ + i) * B + row * m_];
          const double* Ek = &E_[k * dm + i * m_];
          for (std::size_t c = 0; c < m_; ++c) s2 += Ak[c] * Ek[c];
        }
        t2 += w_out2_.node(k, T) * s2;
      }
      double c0 = 0.0;
      for (std::size_t c = 0; c < m_; ++c) c0 += f0_[row * m_ + c] * (yT[c] - yv_[c]);
      out[row] = c0 - h1 * t1 + h2 * t2;
    }
  }

  const TwoParamField& g_;
  Span sp_;
  std::size_t K_ = 0, d_ = 0, m_ = 0, rows_ = 0, goff_ = 0;
  double h_ = 0.0, alpha_ = 0.0, nu_ = 0.0;
  PowerWeights w_out1_, w_out2_, w_right_, w_comp_, w_nu_;
  std::vector<double> lag_am1_, yv_, f0_, Ft_, At_, G_, H_, E_;
};

}  // namespace

GridPath compensated_weyl(const MatrixMap& f, const GridPath& x, double alpha, double a, double b) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("derivative order must lie in (0,1)");
  if (x.dim() != f.in_dim) throw ArgumentError("path dimension does not match the map's input");
  const Span sp = span_of(x.grid(), a, b);
  const std::size_t K = sp.K, B = f.block();
  const double h = x.grid().step();
  const PowerWeights w(-alpha, K);
  const double ca = 1.0 / std::tgamma(1.0 - alpha);
  const double h_comp = std::pow(h, 1.0 - alpha);
  std::vector<double> fx((K + 1) * B), dfx((K + 1) * f.in_dim * B);
  for (std::size_t k = 0; k <= K; ++k) {
    std::span<const double> u(value_ptr(x, sp.ja + static_cast<std::int64_t>(k)), f.in_dim);
    f.value(u, std::span<double>(&fx[k * B], B));
    f.jacobian(u, std::span<double>(&dfx[k * f.in_dim * B], f.in_dim * B));
  }
  GridPath out(x.grid().slice(sp.ja + 1, sp.ja + static_cast<std::int64_t>(K)), B);
  std::vector<double> acc(B), R(B);
  for (std::size_t k = 1; k <= K; ++k) {
    std::fill(acc.begin(), acc.end(), 0.0);
    const double* xk = value_ptr(x, sp.ja + static_cast<std::int64_t>(k));
    for (std::size_t j = 1; j <= k; ++j) {
      const std::size_t th = k - j;
      const double* xt = value_ptr(x, sp.ja + static_cast<std::int64_t>(th));
      for (std::size_t q = 0; q < B; ++q) R[q] = fx[k * B + q] - fx[th * B + q];
      for (std::size_t i = 0; i < f.in_dim; ++i) {
        const double dx = xk[i] - xt[i];
        for (std::size_t q = 0; q < B; ++q) R[q] -= dfx[(th * f.in_dim + i) * B + q] * dx;
      }
      const double wc = w.node(j, k) / (static_cast<double>(j) * h);
      for (std::size_t q = 0; q < B; ++q) acc[q] += wc * R[q];
    }
    const double rk = static_cast<double>(k) * h;
    for (std::size_t q = 0; q < B; ++q) {
      out(k - 1, q) = ca * (fx[k * B + q] * std::pow(rk, -alpha) + alpha * h_comp * acc[q]);
    }
  }
  return out;
}

GridPath extended_tensor_derivative(const TwoParamField& g, double alpha, double b) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("order must lie in (0,1)");
  const Grid& grid = g.grid();
  const std::int64_t jb = grid.lattice(b);
  if (!grid.contains_lattice(jb) || jb == grid.first()) throw RangeError("b must be an interior or final point of the field");
  const std::size_t K = static_cast<std::size_t>(jb - grid.first());
  const std::size_t B = g.block();
  const double h = grid.step();
  const PowerWeights w(alpha - 2.0, K);
  const double ca = 1.0 / std::tgamma(alpha);
  const double hr = (1.0 - alpha) * std::pow(h, alpha - 1.0);
  GridPath out(grid.slice(grid.first(), jb - 1), B);
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t L = K - k;
    const double lag = std::pow(static_cast<double>(L) * h, alpha - 1.0);
    auto gb = g.at(k, K);
    for (std::size_t q = 0; q < B; ++q) out(k, q) = ca * gb[q] * lag;
    for (std::size_t j = 1; j <= L; ++j) {
      const double wj = ca * hr * w.node(j, L);
      auto gs = g.at(k, k + j);
      for (std::size_t q = 0; q < B; ++q) out(k, q) += wj * gs[q];
    }
  }
  return out;
}

std::vector<double> rough_integral(const MatrixMap& f, const GridPath& x, const GridPath& y, const TwoParamField& xy,
                                   const FracParams& params, double a, double b) {
  RoughEngine eng(f, x, y, xy, params, a, b);
  return eng.at_end();
}

GridPath rough_integral_cumulative(const MatrixMap& f, const GridPath& x, const GridPath& y, const TwoParamField& xy,
                                   const FracParams& params, double a, double b) {
  RoughEngine eng(f, x, y, xy, params, a, b);
  return eng.cumulative();
}

GridPath interpolated_rough_integral_cumulative(const MatrixMap& f, const GridPath& x, const GridPath& y,
                                                const TwoParamField& xy, double a, double b) {
  if (x.dim() != f.in_dim) throw ArgumentError("path dimension does not match the map's input");
  if (y.dim() != f.cols) throw ArgumentError("driver dimension does not match the map's columns");
  if (xy.rows() != x.dim() || xy.cols() != y.dim()) throw ArgumentError("tensor block must be d x m");
  if (!x.grid().same_step(y.grid()) || !x.grid().same_step(xy.grid())) throw AlignmentError("grids differ in step");
  const Span sp = span_of(x.grid(), a, b);
  require_covers(y.grid(), sp, "driver");
  require_covers(xy.grid(), sp, "tensor");
  const std::size_t d = f.in_dim, m = f.cols, rows = f.rows, blk = rows * m;
  // Gauss-Legendre nodes and weights on [0, 1].
  static constexpr double kNode[4] = {0.069431844202973712, 0.33000947820757187, 0.66999052179242813,
                                      0.93056815579702629};
  static constexpr double kWeight[4] = {0.17392742256872693, 0.32607257743127307, 0.32607257743127307,
                                        0.17392742256872693};
  GridPath out(x.grid().slice(sp.ja, sp.ja + static_cast<std::int64_t>(sp.K)), rows);
  std::vector<double> u(d), fv(blk), jac(d * blk), mf(blk), mj(d * blk), defect(d * m);
  const std::int64_t goff = xy.grid().first();
  for (std::size_t k = 0; k < sp.K; ++k) {
    const std::int64_t j = sp.ja + static_cast<std::int64_t>(k);
    const double* x0 = value_ptr(x, j);
    const double* x1 = value_ptr(x, j + 1);
    const double* y0 = value_ptr(y, j);
    const double* y1 = value_ptr(y, j + 1);
    std::fill(mf.begin(), mf.end(), 0.0);
    std::fill(mj.begin(), mj.end(), 0.0);
    for (std::size_t q = 0; q < 4; ++q) {
      for (std::size_t i = 0; i < d; ++i) u[i] = x0[i] + kNode[q] * (x1[i] - x0[i]);
      f.value(u, fv);
      f.jacobian(u, jac);
      for (std::size_t e = 0; e < blk; ++e) mf[e] += kWeight[q] * fv[e];
      for (std::size_t e = 0; e < d * blk; ++e) mj[e] += kWeight[q] * jac[e];
    }
    auto cell = xy.at(static_cast<std::size_t>(j - goff), static_cast<std::size_t>(j + 1 - goff));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t c = 0; c < m; ++c) {
        defect[i * m + c] = cell[i * m + c] - 0.5 * (x1[i] - x0[i]) * (y1[c] - y0[c]);
      }
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = out(k, r);
      for (std::size_t c = 0; c < m; ++c) {
        acc += mf[r * m + c] * (y1[c] - y0[c]);
        for (std::size_t i = 0; i < d; ++i) acc += mj[(i * rows + r) * m + c] * defect[i * m + c];
      }
      out(k + 1, r) = acc;
    }
  }
  return out;
}

double estimate_phi(const GridPath& x, const GridPath& y, const TwoParamField& xy, double beta, double a, double b) {
  return holder_norm_2param(xy, 2.0 * beta, a, b).norm +
         holder_norm(x, beta, a, b).norm * holder_norm(y, beta, a, b).norm;
}

double estimate_phi3(const GridPath& x, const GridPath& y, const GridPath& z, const TwoParamField& xy,
                     const TwoParamField& yz, double beta, double a, double b) {
  const double nx = holder_norm(x, beta, a, b).norm;
  const double ny = holder_norm(y, beta, a, b).norm;
  const double nz = holder_norm(z, beta, a, b).norm;
  return nx * ny * nz + nx * holder_norm_2param(yz, 2.0 * beta, a, b).norm +
         nz * holder_norm_2param(xy, 2.0 * beta, a, b).norm;
}

}  // namespace roughreflect
