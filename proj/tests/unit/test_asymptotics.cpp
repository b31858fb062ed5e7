#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wmce/asymptotics.hpp"
#include "wmce/errors.hpp"

using namespace wmce;

namespace {

SpectralModel heat(std::size_t count, double hurst = 0.5, double alpha = 1.0,
                   std::optional<int> d = std::nullopt) {
  return SpectralModel(alpha, hurst, heat_eigenvalues(d.value_or(1), count),
                       std::vector<double>(count, 1.0), std::nullopt, d);
}

}  // namespace

TEST_CASE("discrete variance of Y_N") {
  CHECK(predicted_var_yn_discrete(heat(1), 4, 1) == doctest::Approx(0.5));
  CHECK(predicted_var_yn_discrete(heat(100), 4, 100) == doctest::Approx(0.005));
  CHECK(predicted_var_yn_discrete(heat(1, 0.5, 2.0), 2, 1) == doctest::Approx(0.25));
}

TEST_CASE("discrete variance of alpha*") {
  CHECK(predicted_alpha_var_discrete(heat(1, 0.5, 2.0), 10, 1) == doctest::Approx(0.8));
  CHECK(predicted_alpha_var_discrete(heat(1, 1.0 / std::sqrt(2.0)), 1, 1) ==
        doctest::Approx(1.0));
  CHECK(predicted_alpha_var_discrete(heat(400), 10, 400) == doctest::Approx(5e-4));
}

TEST_CASE("delta method links the two discrete variances") {
  // alpha* = Y^(-1/(2H)): var(alpha*) ~ (alpha^{1+2H} / (2H))^2 var(Y).
  for (double h : {0.3, 0.5, 0.7}) {
    for (double a : {0.5, 1.0, 3.0}) {
      const auto m = heat(10, h, a);
      const double g = std::pow(a, 1 + 2 * h) / (2 * h);
      CHECK(predicted_alpha_var_discrete(m, 7, 10) ==
            doctest::Approx(g * g * predicted_var_yn_discrete(m, 7, 10)));
    }
  }
}

TEST_CASE("exact finite-N variance approaches the limit") {
  const auto m = heat(400);
  const double exact = exact_var_yn_discrete(m, 400, 10);
  const double limit = predicted_var_yn_discrete(m, 10, 400);
  CHECK(exact > limit);
  CHECK(exact == doctest::Approx(limit).epsilon(0.05));
  const auto s2 = s_squared_discrete_all(m, 400, 10);
  CHECK(exact_var_yn_discrete(m, s2, 400) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("continuous variance rate") {
  CHECK(continuous_var_rate(heat(3), 1.0, 3) == doctest::Approx(1.0 / 14));
  CHECK(continuous_var_rate(heat(2, 0.8), 1.0, 2) ==
        doctest::Approx(1.0 / (1.0 + std::pow(2.0, 1.6))).epsilon(1e-12));
  CHECK(continuous_var_rate(heat(2, 0.8), 1.0, 2) == doctest::Approx(0.24805).epsilon(1e-4));
  const double e = std::exp(1.0);
  const SpectralModel one(1.0, 0.75, {e}, {1.0});
  CHECK(continuous_var_rate(one, 1.0, 1) == doctest::Approx(1.0 / e));
}

TEST_CASE("zeta bound") {
  CHECK(zeta_case(0.5) == ZetaCase::Below58);
  CHECK(zeta_case(0.625) == ZetaCase::At58);
  CHECK(zeta_case(0.7) == ZetaCase::Between58And34);
  CHECK(zeta_case(0.75) == ZetaCase::At34);
  CHECK(zeta_case(0.9) == ZetaCase::Above34);

  CHECK(zeta_bound(heat(3), 1.0, 3) == doctest::Approx(1.0 / 14));
  CHECK(zeta_bound(heat(2, 0.7), 1.0, 2) ==
        doctest::Approx((1.0 + std::pow(2.0, 3.2)) / 25.0).epsilon(1e-12));
  CHECK(zeta_bound(heat(2, 0.7), 1.0, 2) == doctest::Approx(0.407584).epsilon(1e-5));

  SUBCASE("exponential eigenvalues at H = 0.9 do not decay") {
    std::vector<double> thetas;
    for (int k = 1; k <= 20; ++k) thetas.push_back(std::exp(double(k)));
    const SpectralModel m(1.0, 0.9, thetas, std::vector<double>(20, 1.0));
    const double z10 = zeta_bound(m, 1.0, 10);
    const double z20 = zeta_bound(m, 1.0, 20);
    CHECK(z20 > 0.5 * z10);
  }
}

TEST_CASE("standardization") {
  const auto m = heat(1);
  CHECK(standardize_alpha(1.0, m, 0.04) == 0.0);
  CHECK(standardize_alpha(1.2, m, 0.04) == doctest::Approx(1.0));
  EstimateResult est;
  est.alpha_star = 0.8;
  CHECK(standardize_estimate(est, m, 0.04) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(standardize_alpha(1.0, m, 0.0), ValidationError);
}

TEST_CASE("reference rates") {
  CHECK(reference_rates(heat(3), {3}, ReferenceEstimator::Mle)[0].values[0] ==
        doctest::Approx(0.267261).epsilon(1e-6));

  const auto d2 = heat(100, 0.5, 1.0, 2);
  const auto tfe = reference_rates(d2, {100}, ReferenceEstimator::Tfe);
  REQUIRE(tfe.size() == 2);
  CHECK(tfe[0].values[0] == doctest::Approx(0.01));
  CHECK(tfe[1].values[0] == doctest::Approx(0.01));

  const auto d4 = heat(16, 0.5, 1.0, 4);
  const auto r = reference_rates(d4, {16}, ReferenceEstimator::Tfe);
  CHECK(r[1].values[0] / r[0].values[0] == doctest::Approx(2.0));

  CHECK_THROWS_AS(reference_rates(heat(3), {3}, ReferenceEstimator::Tfe), ValidationError);
}

TEST_CASE("heat example rate") {
  CHECK(heat_example_rate(1, 0.5, 100) == doctest::Approx(std::pow(100.0, -1.5)));
  CHECK(heat_example_rate(1, 0.75, 100) ==
        doctest::Approx(std::sqrt(std::log(100.0)) * std::pow(100.0, -1.5)));
  CHECK(heat_example_rate(2, 0.9, 100) == doctest::Approx(std::pow(100.0, -(1 + 0.8 / 2) / 2)));
}

TEST_CASE("rate predictions and CSV") {
  const auto m = heat(400, 0.5, 1.0, 1);
  RateParams params;
  params.n = 10;
  const auto p = predict_rates(RateKind::DiscreteVarYN, m, {100, 400}, params);
  CHECK_FALSE(p.order_only);
  CHECK(p.values[1] == doctest::Approx(0.2 / 400));
  const auto q = predict_rates(RateKind::HeatExampleRate, m, {100}, params);
  CHECK(q.order_only);
  std::ostringstream out;
  write_rates_csv({p, q}, out);
  CHECK(out.str() ==
        "N,value,kind,order_only\r\n"
        "100,0.002,discrete_var_yn,false\r\n"
        "400,5e-04,discrete_var_yn,false\r\n"
        "100,0.001,heat_example_rate,true\r\n");
}
