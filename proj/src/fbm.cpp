#include "roughreflect/fbm.hpp"

#include <fftw3.h>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <deque>
#include <memory>
#include <mutex>
#include <sstream>

#include "roughreflect/errors.hpp"
#include "roughreflect/tensor.hpp"

namespace roughreflect {

double fbm_covariance(double hurst, double s, double t) {
  if (s < 0.0 || t < 0.0) throw DomainError("fbm covariance needs nonnegative times");
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst index must lie in (0,1)");
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(s, e) + std::pow(t, e) - std::pow(std::abs(t - s), e));
}

double fgn_autocovariance(double hurst, std::size_t k) {
  const double e = 2.0 * hurst;
  const double kk = static_cast<double>(k);
  if (k == 0) return 1.0;
  return 0.5 * (std::pow(kk + 1.0, e) - 2.0 * std::pow(kk, e) + std::pow(kk - 1.0, e));
}

// ------------------------------------------------------------ fGn sampler

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

struct FgnSampler::Impl {
  Eigen::MatrixXd chol;  // lower factor
  std::size_t big = 0;   // circulant size
  std::vector<double> sqrt_eig;
  fftw_plan plan = nullptr;

  ~Impl() {
    if (plan) {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

FgnSampler::FgnSampler(double hurst, std::size_t n, FgnMethod method)
    : hurst_(hurst), n_(n), method_(method), impl_(new Impl) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    delete impl_;
    throw DomainError("Hurst index must lie in (0,1)");
  }
  if (n == 0) {
    delete impl_;
    throw ArgumentError("fGn sampler needs at least one increment");
  }
  if (method_ == FgnMethod::automatic) method_ = n <= kCholeskyLimit ? FgnMethod::cholesky : FgnMethod::circulant;

  if (method_ == FgnMethod::circulant) {
    const std::size_t half = next_pow2(n);
    const std::size_t big = 2 * half;
    fftw_complex* buf = fftw_alloc_complex(big);
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      impl_->plan = fftw_plan_dft_1d(static_cast<int>(big), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (std::size_t k = 0; k < big; ++k) {
      const std::size_t lag = k <= half ? k : big - k;
      buf[k][0] = fgn_autocovariance(hurst, lag);
      buf[k][1] = 0.0;
    }
    fftw_execute_dft(impl_->plan, buf, buf);
    double lmax = 0.0, lmin = 0.0;
    for (std::size_t k = 0; k < big; ++k) {
      lmax = std::max(lmax, buf[k][0]);
      lmin = std::min(lmin, buf[k][0]);
    }
    if (lmin < -1e-10 * lmax) {
      std::ostringstream os;
      os << "circulant embedding not nonnegative (min eigenvalue " << lmin << "); using Cholesky";
      warnings_.push_back(os.str());
      method_ = FgnMethod::cholesky;
    } else {
      impl_->big = big;
      impl_->sqrt_eig.resize(big);
      for (std::size_t k = 0; k < big; ++k) {
        impl_->sqrt_eig[k] = std::sqrt(std::max(0.0, buf[k][0]) / static_cast<double>(big));
      }
    }
    fftw_free(buf);
  }

  if (method_ == FgnMethod::cholesky) {
    Eigen::MatrixXd c(n, n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        c(a, b) = fgn_autocovariance(hurst, a > b ? a - b : b - a);
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) {
      delete impl_;
      throw DomainError("fGn covariance matrix is not positive definite");
    }
    impl_->chol = llt.matrixL();
  }
}

FgnSampler::~FgnSampler() { delete impl_; }

void FgnSampler::draw(std::mt19937_64& rng, std::span<double> out) const {
  if (out.size() != n_) throw ArgumentError("fGn output buffer has the wrong size");
  std::normal_distribution<double> normal;
  if (method_ == FgnMethod::cholesky) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(n_));
    for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = normal(rng);
    const Eigen::VectorXd x = impl_->chol.triangularView<Eigen::Lower>() * z;
    std::copy(x.data(), x.data() + n_, out.begin());
    return;
  }
  const std::size_t big = impl_->big;
  fftw_complex* buf = fftw_alloc_complex(big);
  for (std::size_t k = 0; k < big; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    buf[k][0] = impl_->sqrt_eig[k] * re;
    buf[k][1] = impl_->sqrt_eig[k] * im;
  }
  fftw_execute_dft(impl_->plan, buf, buf);
  for (std::size_t k = 0; k < n_; ++k) out[k] = buf[k][0];
  fftw_free(buf);
}

std::mt19937_64 keyed_stream(std::uint64_t seed, std::uint64_t replication, std::uint64_t component) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed), hi(seed), lo(replication), hi(replication), lo(component), hi(component)};
  return std::mt19937_64(seq);
}

// --------------------------------------------------------------- sampling

void FbmSpec::validate() const {
  if (!(hurst > 1.0 / 3.0 && hurst < 0.5)) {
    std::ostringstream os;
    os << "Hurst index " << hurst << " outside (1/3, 1/2)";
    throw DomainError(os.str());
  }
  if (dims == 0) throw ArgumentError("fbm needs at least one component");
  if (refinement == 0) throw ArgumentError("refinement must be at least 1");
  if (grid.size() < 2) throw ArgumentError("fbm grid needs at least two points");
  if (!grid.contains_lattice(0)) throw ArgumentError("fbm grid must contain t = 0");
}

namespace {

/// Factorizations are reused across replications: a few recent
/// (H, n, method) keys are kept alive.
std::shared_ptr<const FgnSampler> shared_sampler(double hurst, std::size_t n, FgnMethod method) {
  struct Entry {
    double hurst;
    std::size_t n;
    FgnMethod method;
    std::shared_ptr<const FgnSampler> sampler;
  };
  static std::mutex mu;
  static std::deque<Entry> cache;
  constexpr std::size_t kCapacity = 8;
  {
    std::lock_guard<std::mutex> lock(mu);
    for (const auto& e : cache) {
      if (e.hurst == hurst && e.n == n && e.method == method) return e.sampler;
    }
  }
  auto sampler = std::make_shared<const FgnSampler>(hurst, n, method);
  std::lock_guard<std::mutex> lock(mu);
  cache.push_back({hurst, n, method, sampler});
  if (cache.size() > kCapacity) cache.pop_front();
  return sampler;
}

}  // namespace

FbmSample sample_fbm(const FbmSpec& spec, std::uint64_t replication) {
  spec.validate();
  const Grid& g = spec.grid;
  const auto R = static_cast<std::int64_t>(spec.refinement);
  const Grid fine(g.step() / static_cast<double>(R), g.first() * R, (g.size() - 1) * spec.refinement + 1,
                  g.per_window() * spec.refinement);
  const std::size_t nf = fine.size(), m = spec.dims;
  const auto shared = shared_sampler(spec.hurst, nf - 1, spec.method);
  const FgnSampler& sampler = *shared;
  const double scale = std::pow(fine.step(), spec.hurst);
  const std::size_t origin = static_cast<std::size_t>(-fine.first());

  FbmSample out;
  out.refinement = spec.refinement;
  out.warnings = sampler.warnings();
  out.fine = GridPath(fine, m);
  std::vector<double> incr(nf - 1);
  for (std::size_t c = 0; c < m; ++c) {
    auto rng = keyed_stream(spec.seed, replication, c);
    sampler.draw(rng, incr);
    double acc = 0.0;
    out.fine(0, c) = 0.0;
    for (std::size_t k = 0; k + 1 < nf; ++k) {
      acc += scale * incr[k];
      out.fine(k + 1, c) = acc;
    }
    const double w0 = out.fine(origin, c);
    for (std::size_t k = 0; k < nf; ++k) out.fine(k, c) -= w0;
    out.fine(origin, c) = 0.0;
  }
  out.path = GridPath(g, m);
  for (std::size_t k = 0; k < g.size(); ++k) {
    auto src = out.fine.point(k * spec.refinement);
    std::copy(src.begin(), src.end(), out.path.point(k).begin());
  }
  return out;
}

FbmSample coarsen(const FbmSample& sample, std::size_t factor) {
  if (factor == 0) throw ArgumentError("coarsening factor must be positive");
  const Grid& g = sample.path.grid();
  const auto f = static_cast<std::int64_t>(factor);
  if (g.first() % f != 0 || (g.size() - 1) % factor != 0 || g.per_window() % factor != 0) {
    throw AlignmentError("grid is not divisible by the coarsening factor");
  }
  const Grid gc(g.step() * static_cast<double>(factor), g.first() / f, (g.size() - 1) / factor + 1,
                g.per_window() / factor);
  FbmSample out;
  out.fine = sample.fine;
  out.refinement = sample.refinement * factor;
  out.warnings = sample.warnings;
  out.path = GridPath(gc, sample.path.dim());
  for (std::size_t k = 0; k < gc.size(); ++k) {
    auto src = sample.path.point(k * factor);
    std::copy(src.begin(), src.end(), out.path.point(k).begin());
  }
  return out;
}

TwoParamField stratonovich_tensor(const FbmSample& sample, double r, double lo, double hi) {
  if (sample.fine.size() == 0) throw ArgumentError("sample carries no refined path");
  return refined_lift(shift_path(sample.fine, r), sample.fine, sample.refinement, lo, hi);
}

TwoParamField stratonovich_tensor(const FbmSample& sample, double r) {
  const Grid& g = sample.path.grid();
  return stratonovich_tensor(sample, r, g.t0() + r, g.t1());
}

// ------------------------------------------------------ moment diagnostic

MomentFit tensor_moment_diagnostic(const MomentOptions& opt) {
  if (!(opt.hurst > 1.0 / 3.0 && opt.hurst <= 0.5)) throw DomainError("Hurst index outside (1/3, 1/2]");
  if (opt.p < 1.0) throw ArgumentError("moment order must be >= 1");
  if (opt.lags.empty()) throw ArgumentError("no lags given");
  if (opt.refinement == 0 || !(opt.step > 0.0)) throw ArgumentError("bad discretization");
  if (opt.samples < 2) throw ArgumentError("need at least two samples");

  MomentFit fit;
  fit.target = 2.0 * opt.p * opt.hurst;
  if (opt.samples < 1000) {
    fit.warnings.push_back("fewer than 1000 samples; the slope test has little power");
  }
  const std::size_t R = opt.refinement;
  const std::size_t maxlag = *std::max_element(opt.lags.begin(), opt.lags.end());
  const std::size_t D = opt.delay * R;
  const std::size_t n = (opt.delay + std::max<std::size_t>(maxlag, 1)) * R;
  const double hf = opt.step / static_cast<double>(R);
  const double scale = std::pow(hf, opt.hurst);
  FgnSampler sampler(opt.hurst, n, FgnMethod::automatic);
  for (const auto& w : sampler.warnings()) fit.warnings.push_back(w);

  const std::size_t nl = opt.lags.size();
  std::vector<double> sum(nl, 0.0), sum2(nl, 0.0);
  std::vector<double> wi(n + 1), wj(n + 1), incr(n), at_fine(maxlag * R + 1, 0.0);
  const bool same = opt.i == opt.j;
  auto path_from = [&](std::mt19937_64& rng, std::vector<double>& w) {
    sampler.draw(rng, incr);
    w[0] = 0.0;
    for (std::size_t k = 0; k < n; ++k) w[k + 1] = w[k] + scale * incr[k];
  };
  for (std::size_t q = 0; q < opt.samples; ++q) {
    auto ri = keyed_stream(opt.seed, q, opt.i);
    path_from(ri, wi);
    if (same) {
      wj = wi;
    } else {
      auto rj = keyed_stream(opt.seed, q, opt.j);
      path_from(rj, wj);
    }
    // s sits at fine index D of wj; s - r at index 0 of wi.
    double acc = 0.0;
    at_fine[0] = 0.0;
    for (std::size_t k = 0; k < maxlag * R; ++k) {
      const double mid = 0.5 * ((wi[k] - wi[0]) + (wi[k + 1] - wi[0]));
      acc += mid * (wj[D + k + 1] - wj[D + k]);
      at_fine[k + 1] = acc;
    }
    for (std::size_t l = 0; l < nl; ++l) {
      const double v = std::pow(std::abs(at_fine[opt.lags[l] * R]), opt.p);
      sum[l] += v;
      sum2[l] += v * v;
    }
  }

  const double ns = static_cast<double>(opt.samples);
  std::vector<double> lx, ly;
  for (std::size_t l = 0; l < nl; ++l) {
    const double mean = sum[l] / ns;
    const double var = std::max(0.0, (sum2[l] - ns * mean * mean) / (ns - 1.0));
    fit.lag_times.push_back(static_cast<double>(opt.lags[l]) * opt.step);
    fit.moments.push_back(mean);
    fit.standard_errors.push_back(std::sqrt(var / ns));
    if (opt.lags[l] > 0 && mean > 0.0) {
      lx.push_back(std::log(fit.lag_times.back()));
      ly.push_back(std::log(mean));
    }
  }
  if (lx.size() < 2) {
    fit.warnings.push_back("fewer than two positive lags; no slope fitted");
    return fit;
  }
  const double k = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t a = 0; a < lx.size(); ++a) {
    mx += lx[a] / k;
    my += ly[a] / k;
  }
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t a = 0; a < lx.size(); ++a) {
    sxx += (lx[a] - mx) * (lx[a] - mx);
    sxy += (lx[a] - mx) * (ly[a] - my);
  }
  if (sxx == 0.0) throw ArgumentError("lags must not all coincide");
  fit.slope = sxy / sxx;
  fit.constant = std::exp(my - fit.slope * mx);
  fit.pass = fit.slope >= fit.target - opt.tol_slope;
  return fit;
}

}  // namespace roughreflect
