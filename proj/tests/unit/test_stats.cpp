#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <random>

#include "wmce/errors.hpp"
#include "wmce/stats.hpp"

using namespace wmce;

namespace {

std::vector<double> normal_quantiles(std::size_t m) {
  const boost::math::normal_distribution<> z;
  std::vector<double> q(m);
  for (std::size_t i = 0; i < m; ++i) q[i] = boost::math::quantile(z, (double(i) + 0.5) / double(m));
  return q;
}

}  // namespace

TEST_CASE("KS on exact quantiles is a perfect fit") {
  const auto ks = ks_statistic(normal_quantiles(1000));
  CHECK(ks.statistic <= 0.5 / 1000 + 1e-12);
  CHECK(ks.pvalue > 0.999);
}

TEST_CASE("KS on a degenerate sample") {
  const auto ks = ks_statistic(std::vector<double>(100, 0.0));
  CHECK(ks.statistic == doctest::Approx(0.5));
  CHECK(ks.pvalue < 1e-12);
  CHECK_THROWS_AS(ks_statistic(std::vector<double>(19, 0.0)), ValidationError);
}

TEST_CASE("KS calibration on standard normal draws") {
  std::mt19937_64 engine(2024);
  std::normal_distribution<double> normal;
  int rejections = 0;
  const int runs = 100;
  for (int run = 0; run < runs; ++run) {
    std::vector<double> x(10000);
    for (auto& v : x) v = normal(engine);
    if (ks_statistic(x).pvalue <= 0.01) ++rejections;
  }
  CHECK(rejections <= 2);
}

TEST_CASE("Kolmogorov survival function") {
  CHECK(kolmogorov_survival(0.0) == 1.0);
  // Classic critical values.
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(kolmogorov_survival(0.8276) == doctest::Approx(0.5).epsilon(1e-3));
  // Both series agree near the switch point.
  CHECK(kolmogorov_survival(1.1799999) == doctest::Approx(kolmogorov_survival(1.18000001)));
  CHECK(standard_normal_cdf(0.0) == doctest::Approx(0.5));
  CHECK(standard_normal_cdf(1.959963984540054) == doctest::Approx(0.975));
}

TEST_CASE("log-log rate regression") {
  CHECK(rate_regression({100, 200, 400}, {1.0, 0.5, 0.25}).slope == doctest::Approx(-1.0));
  std::vector<double> x, y;
  for (double n : {10.0, 20.0, 40.0, 80.0}) {
    x.push_back(n);
    y.push_back(std::pow(n, -3.0));
  }
  const auto fit = rate_regression(x, y);
  CHECK(fit.slope == doctest::Approx(-3.0));
  CHECK(fit.r2 == doctest::Approx(1.0));

  std::mt19937_64 engine(5);
  std::uniform_real_distribution<double> jitter(0.9, 1.1);
  std::vector<double> xs, ys;
  for (int i = 0; i < 12; ++i) {
    const double n = 10.0 * std::pow(2.0, i * 0.5);
    xs.push_back(n);
    ys.push_back(std::pow(n, -1.5) * jitter(engine));
  }
  CHECK(std::abs(rate_regression(xs, ys).slope + 1.5) < 0.1);

  CHECK_THROWS_AS(rate_regression({1.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(rate_regression({1.0, 2.0}, {1.0, -1.0}), ValidationError);
}

TEST_CASE("excess kurtosis") {
  CHECK(std::abs(excess_kurtosis(normal_quantiles(100000))) < 0.01);

  std::mt19937_64 engine(9);
  std::normal_distribution<double> normal;
  std::vector<double> chi(200000);
  for (auto& v : chi) {
    const double z = normal(engine);
    v = z * z;
  }
  // chi-square(1) has excess kurtosis 12; its sampling error is large, so allow 10%.
  CHECK(excess_kurtosis(chi) == doctest::Approx(12.0).epsilon(0.1));

  CHECK_THROWS_AS(empirical_kurtosis_diag({std::vector<double>(499, 1.0)}), ValidationError);
}

TEST_CASE("moments") {
  CHECK(sample_mean({1, 2, 3, 4}) == 2.5);
  CHECK(sample_variance({1, 2, 3, 4}) == doctest::Approx(5.0 / 3.0));
}
