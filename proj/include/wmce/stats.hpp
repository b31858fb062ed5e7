#pragma once

#include <cstddef>
#include <vector>

namespace wmce {

inline constexpr std::size_t kKsMinSample = 20;
inline constexpr std::size_t kKurtosisMinSample = 500;
inline constexpr double kKsSeriesTolerance = 1e-10;

struct KsResult {
  double statistic;
  double pvalue;
};

/// One-sample Kolmogorov-Smirnov test against N(0,1) with the asymptotic
/// Kolmogorov p-value at sqrt(m) D.
KsResult ks_statistic(std::vector<double> sample);

/// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_survival(double lambda);

double standard_normal_cdf(double x);

struct RateFit {
  double slope;
  double intercept;
  double r2;
};

/// OLS of ln y on ln x.
RateFit rate_regression(const std::vector<double>& x, const std::vector<double>& y);

/// Population excess kurtosis m4/m2^2 - 3.
double excess_kurtosis(const std::vector<double>& sample);

/// Excess kurtosis per sample set; each needs at least 500 values.
std::vector<double> empirical_kurtosis_diag(const std::vector<std::vector<double>>& samples);

double sample_mean(const std::vector<double>& sample);
/// Unbiased (n - 1) variance.
double sample_variance(const std::vector<double>& sample);

}  // namespace wmce
