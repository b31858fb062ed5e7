#include <doctest.h>

#include <cmath>
#include <numeric>

#include "wmce/errors.hpp"
#include "wmce/spectral_model.hpp"

using namespace wmce;

namespace {

SpectralModel heat_model(std::size_t count, double hurst = 0.5, double alpha = 1.0) {
  return SpectralModel(alpha, hurst, heat_eigenvalues(1, count), std::vector<double>(count, 1.0));
}

}  // namespace

TEST_CASE("heat eigenvalues follow k^(2/d)") {
  CHECK(heat_eigenvalues(1, 3) == std::vector<double>{1, 4, 9});
  CHECK(heat_eigenvalues(2, 3) == std::vector<double>{1, 2, 3});
  const auto d4 = heat_eigenvalues(4, 4);
  CHECK(d4[0] == doctest::Approx(1.0));
  CHECK(d4[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(d4[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(d4[3] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(heat_eigenvalues(0, 3), ValidationError);
  CHECK_THROWS_AS(heat_eigenvalues(1, 0), ValidationError);
}

TEST_CASE("model invariants are enforced") {
  CHECK_THROWS_WITH_AS(SpectralModel(1.0, 1.0, {1.0}, {1.0}),
                       "hurst must lie in open interval (0,1)", ValidationError);
  CHECK_THROWS_AS(SpectralModel(1.0, 0.0, {1.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(SpectralModel(0.0, 0.5, {1.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(SpectralModel(1.0, 0.5, {1.0, -2.0}, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(SpectralModel(1.0, 0.5, {1.0}, {0.0}), ValidationError);
  CHECK_THROWS_AS(SpectralModel(1.0, 0.5, {1.0, 2.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(SpectralModel(1.0, 0.5, {}, {}), ValidationError);
  CHECK_THROWS_AS(SpectralModel(1.0, 0.5, {1.0}, {1.0}, std::vector<double>{-1.0}),
                  ValidationError);
  CHECK_NOTHROW(SpectralModel(1.0, 0.5, {1.0}, {1.0}, std::vector<double>{0.0}));

  const auto m = heat_model(4).with_alpha(2.5);
  CHECK(m.alpha() == 2.5);
  CHECK(m.theta(3) == 16.0);
  CHECK(m.nu(2) == 0.0);
}

TEST_CASE("hurst regime boundaries") {
  CHECK(hurst_regime(0.5) == HurstRegime::Sub34);
  CHECK(hurst_regime(0.75) == HurstRegime::Eq34);
  CHECK(hurst_regime(0.8) == HurstRegime::Super34);
  CHECK(hurst_regime(0.75 + 1e-13) == HurstRegime::Eq34);
  CHECK_THROWS_AS(hurst_regime(1.0), ValidationError);
}

TEST_CASE("stationarity margin") {
  SUBCASE("summable series at gamma = 1") {
    const auto m = heat_model(1000);
    const auto margin = stationarity_margin(m, 1.0, 1000);
    double expected = 0.0;
    for (int k = 1; k <= 1000; ++k) {
      const double t = double(k) * k;
      expected += (1.0 + 1.0 / t) / (1.0 + t);
    }
    CHECK(margin.partial_sum == doctest::Approx(expected).epsilon(1e-12));
    CHECK(margin.tail_slope == doctest::Approx(-2.0).epsilon(0.01));
    CHECK(margin.heuristically_convergent);
  }
  SUBCASE("divergent at gamma = 0") {
    const auto margin = stationarity_margin(heat_model(1000), 0.0, 1000);
    CHECK(std::abs(margin.tail_slope) < 0.01);
    CHECK_FALSE(margin.heuristically_convergent);
  }
  SUBCASE("single term") {
    // sigma^2 (1+theta)^0 (1 + 1/theta)^(2H) with theta = 1, H = 1/2.
    const auto margin = stationarity_margin(heat_model(1), 0.0, 1);
    CHECK(margin.partial_sum == doctest::Approx(2.0));
    CHECK(std::isnan(margin.tail_slope));
  }
  CHECK_THROWS_AS(stationarity_margin(heat_model(3), 1.0, 4), ValidationError);
}

TEST_CASE("initial condition moments") {
  const auto m = heat_model(3);
  CHECK(initial_second_moment(StationaryInit{}, m, 0) == doctest::Approx(0.5));
  CHECK(initial_fourth_moment(StationaryInit{}, m, 0) == doctest::Approx(0.75));
  CHECK(initial_second_moment(DeterministicInit{{1, 2, 3}}, m, 1) == 4.0);
  CHECK(initial_fourth_moment(DeterministicInit{{1, 2, 3}}, m, 1) == 16.0);
  CHECK(initial_second_moment(GaussianIidInit{1.0, 2.0}, m, 0) == 5.0);
  CHECK(initial_fourth_moment(GaussianIidInit{0.0, 1.0}, m, 0) == 3.0);
  CHECK_THROWS_AS(validate_initial_condition(DeterministicInit{{1, 2}}, m), ValidationError);
  CHECK_THROWS_AS(validate_initial_condition(GaussianIidInit{0.0, -1.0}, m), ValidationError);
}

TEST_CASE("nonstationary condition diagnostics") {
  SUBCASE("zero start satisfies everything") {
    const auto m = heat_model(50);
    const DeterministicInit zero{std::vector<double>(50, 0.0)};
    const auto discrete = check_nonstationary_conditions(m, zero, ObservationMode::Discrete);
    CHECK(discrete.all_satisfied());
    CHECK(discrete.at("D2").max_value == 0.0);
    const auto cont = check_nonstationary_conditions(m, zero, ObservationMode::Continuous);
    CHECK(cont.all_satisfied());
  }
  SUBCASE("logarithmic eigenvalues break C1") {
    std::vector<double> thetas(200);
    for (std::size_t k = 0; k < thetas.size(); ++k) thetas[k] = std::log(double(k) + 2.0);
    const SpectralModel m(1.0, 0.5, thetas, std::vector<double>(thetas.size(), 1.0));
    const DeterministicInit zero{std::vector<double>(thetas.size(), 0.0)};
    const auto report = check_nonstationary_conditions(m, zero, ObservationMode::Continuous);
    CHECK_FALSE(report.at("C1").satisfied);
  }
  SUBCASE("Gaussian start: D2 sequence values") {
    const auto m = heat_model(50);
    const auto report =
        check_nonstationary_conditions(m, GaussianIidInit{0.0, 1.0}, ObservationMode::Discrete);
    const auto& d2 = report.at("D2");
    REQUIRE(d2.values.size() == 50);
    for (std::size_t k = 0; k < 50; ++k) {
      const double kk = double(k + 1);
      CHECK(d2.values[k] == doctest::Approx(std::exp(-2.0 * kk * kk) * kk * kk));
    }
    CHECK(d2.satisfied);
    CHECK_THROWS_AS(report.at("nope"), ValidationError);
  }
}
