#include <cmath>

#include "doctest.h"
#include "roughreflect/fbm.hpp"
#include "roughreflect/tensor.hpp"

using namespace roughreflect;

TEST_CASE("fBm covariance") {
  CHECK(fbm_covariance(0.4, 2.0, 2.0) == doctest::Approx(std::pow(2.0, 0.8)));
  CHECK(fbm_covariance(0.5, 1.0, 3.0) == doctest::Approx(1.0));
  CHECK(fgn_autocovariance(0.5, 0) == doctest::Approx(1.0));
  CHECK(fgn_autocovariance(0.5, 3) == doctest::Approx(0.0));
  // Negative correlation of increments for H < 1/2.
  CHECK(fgn_autocovariance(0.4, 1) < 0.0);
}

TEST_CASE("both factorizations reproduce the autocovariance on the first draw") {
  // Same stream, different methods: the draws differ but each must have the
  // right empirical lag-0 variance over many samples.
  for (FgnMethod m : {FgnMethod::cholesky, FgnMethod::circulant}) {
    const FgnSampler s(0.4, 64, m);
    CHECK(s.method() == m);
    std::mt19937_64 rng(5);
    std::vector<double> out(64);
    double v0 = 0.0, v1 = 0.0;
    const int n = 4000;
    for (int q = 0; q < n; ++q) {
      s.draw(rng, out);
      v0 += out[10] * out[10];
      v1 += out[10] * out[11];
    }
    CHECK(v0 / n == doctest::Approx(1.0).epsilon(0.08));
    CHECK(v1 / n == doctest::Approx(fgn_autocovariance(0.4, 1)).epsilon(0.3));
  }
}

TEST_CASE("keyed streams are deterministic and independent of order") {
  auto a = keyed_stream(7, 3, 1);
  auto b = keyed_stream(7, 3, 1);
  auto c = keyed_stream(7, 3, 2);
  const auto va = a(), vb = b(), vc = c();
  CHECK(va == vb);
  CHECK(va != vc);
}

TEST_CASE("sampled fBm is pinned at zero and consistent with its fine path") {
  FbmSpec spec;
  spec.hurst = 0.45;
  spec.dims = 2;
  spec.grid = Grid::delay_grid(1.0, 32, 1.0);
  spec.seed = 9;
  spec.refinement = 4;
  const FbmSample s = sample_fbm(spec, 0);
  CHECK(s.path.at(0.0)[0] == 0.0);
  CHECK(s.path.at(0.0)[1] == 0.0);
  for (std::size_t k = 0; k < s.path.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) CHECK(s.path(k, i) == s.fine(4 * k, i));
  const FbmSample c = coarsen(s, 2);
  CHECK(c.path.size() == 33);
  CHECK(c.path(5, 1) == s.path(10, 1));
}

TEST_CASE("Stratonovich tensor is multiplicative per sample") {
  FbmSpec spec;
  spec.hurst = 0.4;
  spec.dims = 2;
  spec.grid = Grid::delay_grid(1.0, 16, 2.0);
  spec.seed = 2;
  spec.refinement = 8;
  const FbmSample s = sample_fbm(spec, 1);
  const TwoParamField J = stratonovich_tensor(s, 1.0);
  const GridPath xs = shift_path(s.path, 1.0);
  ChenOptions o;
  o.full = true;
  CHECK(check_multiplicative(xs, s.path.restrict(J.lo(), J.hi()), J, o).max_residual <= 1e-12);
}

TEST_CASE("invalid specs are rejected") {
  FbmSpec spec;
  spec.grid = Grid::delay_grid(1.0, 8, 1.0);
  spec.hurst = 0.6;
  CHECK_THROWS(spec.validate());
  spec.hurst = 0.4;
  spec.refinement = 0;
  CHECK_THROWS(spec.validate());
}
