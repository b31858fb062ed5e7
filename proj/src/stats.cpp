#include "wmce/stats.hpp"

#include <algorithm>
#include <boost/math/statistics/linear_regression.hpp>
#include <boost/math/statistics/univariate_statistics.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wmce/errors.hpp"

namespace wmce {

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double kolmogorov_survival(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  // The alternating series converges slowly for small lambda; there the
  // theta-function form of the CDF converges fast instead.
  if (lambda < 1.18) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double factor = std::sqrt(2.0 * std::numbers::pi) / lambda;
    double cdf = 0.0;
    for (int k = 1; k < 1000; ++k) {
      const double odd = 2.0 * k - 1.0;
      const double term = factor * std::exp(-odd * odd * pi2 / (8.0 * lambda * lambda));
      cdf += term;
      if (term < kKsSeriesTolerance) break;
    }
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k < 1000; ++k) {
    const double term = 2.0 * std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < kKsSeriesTolerance) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

KsResult ks_statistic(std::vector<double> sample) {
  const std::size_t m = sample.size();
  if (m < kKsMinSample) {
    std::ostringstream os;
    os << "KS test needs at least " << kKsMinSample << " values, got " << m;
    throw ValidationError(os.str());
  }
  if (std::any_of(sample.begin(), sample.end(), [](double v) { return !std::isfinite(v); })) {
    throw ValidationError("KS test sample contains non-finite values");
  }
  std::sort(sample.begin(), sample.end());
  const double mm = static_cast<double>(m);
  double d = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double f = standard_normal_cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / mm - f, f - static_cast<double>(i) / mm});
  }
  return {d, kolmogorov_survival(std::sqrt(mm) * d)};
}

RateFit rate_regression(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("rate regression: x and y differ in length");
  if (x.size() < 3) throw ValidationError("rate regression needs at least 3 points");
  std::vector<double> lx(x.size());
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ValidationError("rate regression needs positive finite points");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  try {
    const auto [intercept, slope, r2] =
        boost::math::statistics::simple_ordinary_least_squares_with_R_squared(lx, ly);
    return {slope, intercept, r2};
  } catch (const std::domain_error& e) {
    throw ValidationError(std::string("rate regression: ") + e.what());
  }
}

double excess_kurtosis(const std::vector<double>& sample) {
  if (sample.size() < 2) throw ValidationError("kurtosis needs at least 2 values");
  return boost::math::statistics::excess_kurtosis(sample);
}

std::vector<double> empirical_kurtosis_diag(const std::vector<std::vector<double>>& samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.size() < kKurtosisMinSample) {
      std::ostringstream os;
      os << "kurtosis diagnostic needs at least " << kKurtosisMinSample << " samples per N, got "
         << s.size();
      throw ValidationError(os.str());
    }
    out.push_back(excess_kurtosis(s));
  }
  return out;
}

double sample_mean(const std::vector<double>& sample) {
  if (sample.empty()) throw ValidationError("mean of an empty sample");
  return boost::math::statistics::mean(sample);
}

double sample_variance(const std::vector<double>& sample) {
  if (sample.size() < 2) throw ValidationError("sample variance needs at least 2 values");
  return boost::math::statistics::sample_variance(sample);
}

}  // namespace wmce
