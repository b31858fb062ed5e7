// Randomized invariant checks. Every trial draws its parameters from a fixed
// seed, so a failure is reproducible from the printed captures.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "wmce/asymptotics.hpp"
#include "wmce/autocov.hpp"
#include "wmce/config.hpp"
#include "wmce/errors.hpp"
#include "wmce/estimators.hpp"
#include "wmce/sampler.hpp"

using namespace wmce;

namespace {

constexpr int kTrials = 40;

struct Draw {
  std::mt19937_64 engine{20240601};
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine);
  }
  SpectralModel model(std::size_t count, bool with_nu = false) {
    std::vector<double> thetas(count), sigmas(count), nus(count);
    double theta = uniform(0.2, 2.0);
    for (std::size_t k = 0; k < count; ++k) {
      thetas[k] = theta;
      theta *= uniform(1.05, 3.0);
      sigmas[k] = uniform(0.2, 3.0);
      nus[k] = uniform(0.0, 1.0);
    }
    return SpectralModel(uniform(0.3, 3.0), uniform(0.05, 0.95), thetas, sigmas,
                         with_nu ? std::optional(nus) : std::nullopt);
  }
  CoordinatePaths discrete_paths(std::size_t coords, std::size_t n) {
    CoordinatePaths p;
    for (std::size_t i = 0; i < n; ++i) p.grid.push_back(double(i + 1));
    p.refinement.assign(coords, 1);
    std::normal_distribution<double> z;
    p.rows.assign(coords, std::vector<double>(n));
    for (auto& row : p.rows) {
      for (auto& v : row) v = z(engine);
    }
    return p;
  }
};

}  // namespace

TEST_CASE("autocovariance is even, bounded by r(0), and scales per coordinate") {
  Draw d;
  for (int trial = 0; trial < kTrials; ++trial) {
    const auto m = d.model(1);
    const double t = d.uniform(0.0, 8.0);
    const double h = m.hurst();
    CAPTURE(h);
    CAPTURE(t);
    const double r = canonical_autocov(h, t);
    CHECK(canonical_autocov(h, -t) == r);
    CHECK(std::abs(r) <= canonical_autocov(h, 0.0) * (1 + 1e-12));
    const double lambda = m.alpha() * m.theta(0);
    CHECK(coordinate_autocov(m, 0, t) ==
          doctest::Approx(m.sigma(0) * m.sigma(0) * std::pow(lambda, -2 * h) *
                          canonical_autocov(h, lambda * t)));
  }
}

TEST_CASE("every weight family is normalized so that E Y_N = alpha^(-2H)") {
  Draw d;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t n = d.index(1, 12);
    const auto m = d.model(n);
    const double T = d.uniform(1.0, 5.0);
    std::vector<double> s2(n);
    for (auto& v : s2) v = d.uniform(0.01, 2.0);
    ContinuousWeightOptions options;
    std::vector<WeightVector> families{discrete_weights(m, n), unit_weights(m, n),
                                       optimal_weights(m, n, s2)};
    if (hurst_regime(m.hurst()) != HurstRegime::Eq34) {
      families.push_back(continuous_weights(m, n, T, options));
    }
    for (const auto& w : families) {
      // E m_k = r_k(0) = sigma_k^2 (alpha theta_k)^(-2H) H Gamma(2H).
      double expectation = 0.0;
      for (std::size_t k = 0; k < n; ++k) expectation += w.weights[k] * coordinate_variance(m, k);
      CHECK(expectation / w.normalizer ==
            doctest::Approx(std::pow(m.alpha(), -2 * m.hurst())).epsilon(1e-12));
    }
  }
}

TEST_CASE("scaling the data by c scales Y_N by c^2") {
  Draw d;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t coords = d.index(1, 6), n = d.index(1, 8);
    const auto m = d.model(coords);
    auto p = d.discrete_paths(coords, n);
    const double c = d.uniform(0.1, 10.0);
    const auto base = wmce_discrete(p, m, coords, n);
    for (auto& row : p.rows) {
      for (auto& v : row) v *= c;
    }
    const auto scaled = wmce_discrete(p, m, coords, n);
    CHECK(scaled.y_stat == doctest::Approx(c * c * base.y_stat).epsilon(1e-12));
    CHECK(scaled.alpha_star ==
          doctest::Approx(base.alpha_star * std::pow(c, -1.0 / m.hurst())).epsilon(1e-10));
  }
}

TEST_CASE("coordinate order does not matter") {
  Draw d;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t coords = d.index(2, 6), n = d.index(1, 5);
    const auto m = d.model(coords);
    const auto p = d.discrete_paths(coords, n);
    std::vector<std::size_t> perm(coords);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), d.engine);
    std::vector<double> thetas, sigmas;
    CoordinatePaths q = p;
    for (std::size_t k = 0; k < coords; ++k) {
      thetas.push_back(m.theta(perm[k]));
      sigmas.push_back(m.sigma(perm[k]));
      q.rows[k] = p.rows[perm[k]];
    }
    const SpectralModel pm(m.alpha(), m.hurst(), thetas, sigmas);
    CHECK(wmce_discrete(q, pm, coords, n).y_stat ==
          doctest::Approx(wmce_discrete(p, m, coords, n).y_stat).epsilon(1e-12));
    CHECK(unweighted_mce(q, pm, coords, DiscreteScheme{n}).y_stat ==
          doctest::Approx(unweighted_mce(p, m, coords, DiscreteScheme{n}).y_stat).epsilon(1e-12));
  }
}

TEST_CASE("alpha_from_y inverts alpha^(-2H)") {
  Draw d;
  for (int trial = 0; trial < kTrials; ++trial) {
    const double a = d.uniform(0.01, 100.0), h = d.uniform(0.01, 0.99);
    CHECK(alpha_from_y(std::pow(a, -2 * h), h) == doctest::Approx(a).epsilon(1e-10));
  }
}

TEST_CASE("two-term root satisfies its equation") {
  Draw d;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t coords = d.index(1, 6), n = d.index(1, 6);
    const auto m = d.model(coords, true);
    const auto p = d.discrete_paths(coords, n);
    const auto moments = discrete_second_moments(p, coords, n);
    double alpha = 0.0;
    try {
      alpha = solve_two_term_drift(m, moments);
    } catch (const NumericError&) {
      continue;  // no positive root for this draw
    }
    double lhs = 0.0;
    for (std::size_t k = 0; k < coords; ++k) {
      lhs += std::pow(alpha * m.theta(k) + m.nu(k), 2 * m.hurst()) /
             (m.sigma(k) * m.sigma(k)) * moments[k];
    }
    CHECK(lhs == doctest::Approx(double(coords) * hurst_variance_constant(m.hurst())).epsilon(1e-8));
  }
}

TEST_CASE("finite-N discrete variance is the weighted sum of s_k^2") {
  Draw d;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t coords = d.index(1, 5), n = d.index(1, 6);
    const auto m = d.model(coords);
    const auto s2 = s_squared_discrete_all(m, coords, n);
    CHECK(exact_var_yn_discrete(m, s2, coords) ==
          doctest::Approx(weighted_variance(discrete_weights(m, coords), s2)).epsilon(1e-12));
  }
}

TEST_CASE("binary paths round-trip exactly") {
  Draw d;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t coords = d.index(1, 5), m = d.index(1, 9);
    CoordinatePaths p;
    double t = d.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < m; ++i) p.grid.push_back(t += d.uniform(0.01, 1.0));
    std::normal_distribution<double> z;
    for (std::size_t k = 0; k < coords; ++k) {
      const auto q = static_cast<std::uint32_t>(d.index(1, 4));
      p.refinement.push_back(q);
      std::vector<double> row(refined_length(m, q));
      for (auto& v : row) v = z(d.engine) * std::pow(10.0, d.uniform(-200, 200));
      p.rows.push_back(row);
    }
    p.stationary = d.index(0, 1) == 1;
    std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
    write_paths_binary(p, bin);
    CHECK(read_paths_binary(bin) == p);

    std::stringstream csv;
    write_paths_csv(p, csv);
    const auto back = read_paths_csv(csv);
    for (std::size_t k = 0; k < coords; ++k) {
      for (std::size_t i = 0; i < m; ++i) CHECK(back.rows[k][i] == p.at(k, i));
    }
  }
}

TEST_CASE("stationary start and stationary sampler agree for any model") {
  Draw d;
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = d.model(d.index(1, 4));
    std::vector<double> grid;
    for (std::size_t i = 0; i < d.index(1, 30); ++i) grid.push_back(double(i));
    const RngPolicy rng(d.engine());
    CHECK(sample_nonstationary_paths(m, StationaryInit{}, grid, rng) ==
          sample_stationary_paths(m, grid, rng));
  }
}

TEST_CASE("configs survive serialization") {
  Draw d;
  for (int trial = 0; trial < kTrials; ++trial) {
    const std::size_t count = d.index(1, 8);
    const auto m = d.model(count, d.index(0, 1) == 1);
    std::vector<double> thetas(m.thetas().begin(), m.thetas().end());
    std::vector<double> sigmas(m.sigmas().begin(), m.sigmas().end());
    nlohmann::json doc = {{"model", {{"alpha", m.alpha()}, {"hurst", m.hurst()},
                                     {"thetas", thetas}, {"sigmas", sigmas}}},
                          {"scheme", {{"kind", "discrete"}, {"n", d.index(1, 20)}}},
                          {"N_grid", {count}},
                          {"replications", d.index(2, 100)},
                          {"master_seed", d.engine()}};
    if (m.nus()) doc["model"]["nus"] = *m.nus();
    const auto cfg = parse_config(doc);
    CHECK(parse_config(serialize_config(cfg)) == cfg);
  }
}
