#include <doctest.h>

#include <cmath>

#include "wmce/autocov.hpp"
#include "wmce/errors.hpp"
#include "wmce/sampler.hpp"

using namespace wmce;

namespace {

std::vector<double> arange(std::size_t count, double step, double start = 0.0) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = start + step * double(i);
  return g;
}

// Empirical E z(0) z(lag) over `reps` single-coordinate draws, with its
// Gaussian standard error sqrt((r(0)^2 + r(lag)^2) / reps).
struct CovEstimate {
  double value;
  double se;
};

CovEstimate empirical_cov(const StationarySampler& sampler, std::size_t lag, std::size_t reps,
                          double r0, double r_lag, std::uint64_t seed = 1) {
  const RngPolicy rng(seed);
  double sum = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto p = sampler.sample(rng, r);
    sum += p.rows[0][0] * p.rows[0][lag];
  }
  return {sum / double(reps), std::sqrt((r0 * r0 + r_lag * r_lag) / double(reps))};
}

}  // namespace

TEST_CASE("single grid point is a scalar Gaussian with variance r_k(0)") {
  const SpectralModel m(2.0, 0.5, {4.0}, {3.0});
  const StationarySampler sampler(m, {1.0}, 1);
  const double r0 = coordinate_variance(m, 0);
  const auto est = empirical_cov(sampler, 0, 10000, r0, r0);
  CHECK(std::abs(est.value - r0) < 4 * est.se);
}

TEST_CASE("H = 1/2 matches the exact AR(1) recursion") {
  // z_{t+1} = e^{-1} z_t + sqrt((1 - e^{-2}) / 2) eps, stationary variance 1/2.
  const SpectralModel m(1.0, 0.5, {1.0}, {1.0});
  const StationarySampler sampler(m, arange(100, 1.0), 1);
  CHECK(sampler.method_used(0) == SamplerMethod::Circulant);
  const std::size_t reps = 10000;
  const RngPolicy rng(5);
  double s00 = 0, s01 = 0, s11 = 0, s_far = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto paths = sampler.sample(rng, r);
    const auto& z = paths.rows[0];
    s00 += z[0] * z[0];
    s01 += z[50] * z[51];
    s11 += z[51] * z[51];
    s_far += z[0] * z[99];
  }
  const double n = double(reps);
  const double r0 = 0.5, r1 = 0.5 * std::exp(-1.0);
  CHECK(std::abs(s00 / n - r0) < 4 * std::sqrt(2 * r0 * r0 / n));
  CHECK(std::abs(s11 / n - r0) < 4 * std::sqrt(2 * r0 * r0 / n));
  CHECK(std::abs(s01 / n - r1) < 4 * std::sqrt((r0 * r0 + r1 * r1) / n));
  CHECK(std::abs(s_far / n) < 4 * std::sqrt(r0 * r0 / n));
  // Lag-1 autocorrelation of the recursion.
  CHECK(std::abs(s01 / s11 - std::exp(-1.0)) < 4 * (1 - std::exp(-2.0)) / std::sqrt(n));
}

TEST_CASE("long memory covariance matches the quadrature autocovariance") {
  const SpectralModel m(1.0, 0.7, {1.0}, {1.0});
  const StationarySampler sampler(m, arange(20, 0.5), 1);
  const double r0 = coordinate_variance(m, 0);
  for (std::size_t lag : {0u, 1u, 2u, 6u, 19u}) {
    const double expected = coordinate_autocov(m, 0, 0.5 * double(lag));
    const auto est = empirical_cov(sampler, lag, 10000, r0, expected, 17);
    CAPTURE(lag);
    CHECK(std::abs(est.value - expected) < 4 * est.se);
  }
}

TEST_CASE("circulant and Cholesky give the same law") {
  const SpectralModel m(1.0, 0.3, {2.0}, {1.0});
  const auto grid = arange(16, 1.0);
  const StationarySampler circ(m, grid, 1, SamplerMethod::Circulant);
  const StationarySampler chol(m, grid, 1, SamplerMethod::Cholesky);
  CHECK(circ.method_used(0) == SamplerMethod::Circulant);
  CHECK(chol.method_used(0) == SamplerMethod::Cholesky);
  const double r0 = coordinate_variance(m, 0);
  for (std::size_t lag : {1u, 3u}) {
    const double expected = coordinate_autocov(m, 0, double(lag));
    const auto a = empirical_cov(circ, lag, 10000, r0, expected, 3);
    const auto b = empirical_cov(chol, lag, 10000, r0, expected, 4);
    CAPTURE(lag);
    CHECK(std::abs(a.value - expected) < 4 * a.se);
    CHECK(std::abs(b.value - expected) < 4 * b.se);
  }
}

TEST_CASE("method selection") {
  const SpectralModel m(1.0, 0.5, {1.0}, {1.0});
  const std::vector<double> uneven{0.0, 0.3, 1.0, 1.1};
  const StationarySampler automatic(m, uneven, 1);
  CHECK(automatic.method_used(0) == SamplerMethod::Cholesky);
  CHECK_THROWS_AS(StationarySampler(m, uneven, 1, SamplerMethod::Circulant), ValidationError);
  CHECK_THROWS_AS(StationarySampler(m, {0.0, 1.0}, 2), ValidationError);
  CHECK_THROWS_AS(StationarySampler(m, {1.0, 0.0}, 1), ValidationError);
  CHECK(to_string(SamplerMethod::Cholesky) == "cholesky");
  CHECK(sampler_method_from_string("circulant") == SamplerMethod::Circulant);
  CHECK_THROWS_AS(sampler_method_from_string("qr"), ValidationError);
}

TEST_CASE("refined rows") {
  const SpectralModel m(1.0, 0.5, {1.0, 50.0}, {1.0, 1.0});
  const StationarySampler sampler(m, arange(11, 0.1), 2, SamplerMethod::Auto, {1, 5});
  const auto p = sampler.sample(RngPolicy(1), 0);
  CHECK(p.rows[0].size() == 11);
  CHECK(p.rows[1].size() == 51);
  CHECK(p.refinement == std::vector<std::uint32_t>{1, 5});
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("draws are a pure function of seed and replication") {
  const SpectralModel m(1.0, 0.7, heat_eigenvalues(1, 5), std::vector<double>(5, 1.0));
  const auto grid = arange(10, 1.0, 1.0);
  const auto a = sample_stationary_paths(m, grid, RngPolicy(9), SamplerMethod::Auto, 3);
  const auto b = sample_stationary_paths(m, grid, RngPolicy(9), SamplerMethod::Auto, 3);
  const auto c = sample_stationary_paths(m, grid, RngPolicy(9), SamplerMethod::Auto, 4);
  CHECK(a == b);
  CHECK(a.rows != c.rows);
  CHECK(a.stationary);
}

TEST_CASE("nonstationary coupling") {
  const SpectralModel m(1.0, 0.5, {1.0, 4.0}, {1.0, 1.0});
  const auto grid = arange(6, 1.0);
  const RngPolicy rng(21);

  SUBCASE("stationary start reproduces the stationary sampler bit for bit") {
    const auto z = sample_stationary_paths(m, grid, rng, SamplerMethod::Auto, 2);
    const auto x = sample_nonstationary_paths(m, StationaryInit{}, grid, rng,
                                              SamplerMethod::Auto, 2);
    CHECK(x == z);
  }
  SUBCASE("deterministic start holds at t = 0") {
    const auto x = sample_nonstationary_paths(m, DeterministicInit{{5.0, -2.0}}, grid, rng);
    CHECK(x.rows[0][0] == 5.0);
    CHECK(x.rows[1][0] == -2.0);
    CHECK_FALSE(x.stationary);
  }
  SUBCASE("far from the start the stationary part dominates") {
    const std::vector<double> late{0.0, 40.0, 41.0, 42.0};
    const auto z = sample_stationary_paths(m, late, rng);
    const auto x = sample_nonstationary_paths(m, DeterministicInit{{0.0, 0.0}}, late, rng);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(x.rows[k][0] == 0.0);
      for (std::size_t i = 1; i < late.size(); ++i) {
        CHECK(x.rows[k][i] == doctest::Approx(z.rows[k][i]).epsilon(1e-15));
      }
    }
  }
  SUBCASE("mean and variance of the transient") {
    // x(t) = z(t) - e^{-t} z(0) + e^{-t} c with r(t) = e^{-t}/2:
    // mean c e^{-t}, variance (1 - e^{-2t}) / 2.
    const SpectralModel one(1.0, 0.5, {1.0}, {1.0});
    const NonstationarySampler sampler(one, DeterministicInit{{3.0}}, {0.0, 0.5, 1.0}, 1);
    const std::size_t reps = 10000;
    double s = 0, ss = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double v = sampler.sample(rng, r).rows[0][2];
      s += v;
      ss += v * v;
    }
    const double mean = s / reps;
    const double var = ss / reps - mean * mean;
    const double v_true = (1 - std::exp(-2.0)) / 2;
    CHECK(std::abs(mean - 3 * std::exp(-1.0)) < 4 * std::sqrt(v_true / reps));
    CHECK(std::abs(var - v_true) < 4 * v_true * std::sqrt(2.0 / reps));
  }
  SUBCASE("Gaussian start adds its own variance") {
    const SpectralModel one(1.0, 0.5, {1.0}, {1.0});
    const NonstationarySampler sampler(one, GaussianIidInit{0.0, 2.0}, {0.0, 1.0}, 1);
    const std::size_t reps = 10000;
    double ss0 = 0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double v = sampler.sample(rng, r).rows[0][0];
      ss0 += v * v;
    }
    CHECK(std::abs(ss0 / reps - 4.0) < 4 * 4.0 * std::sqrt(2.0 / reps));
  }
  SUBCASE("grids that do not start at the initial instant") {
    const auto x = sample_nonstationary_paths(m, DeterministicInit{{1.0, 1.0}}, {1.0, 2.0}, rng);
    CHECK(x.grid == std::vector<double>{1.0, 2.0});
    CHECK(x.rows[0].size() == 2);
    CHECK_THROWS_AS(
        sample_nonstationary_paths(m, DeterministicInit{{1.0, 1.0}}, {-1.0, 0.0}, rng),
        ValidationError);
  }
}
