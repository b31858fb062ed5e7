#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wmce/autocov.hpp"
#include "wmce/paths.hpp"
#include "wmce/scheme.hpp"
#include "wmce/spectral_model.hpp"

namespace wmce {

/// Coordinate weights w_k and the matching normalizer, so that
///   Y_N = sum_k w_k m_k / normalizer
/// where m_k is the time-averaged square of coordinate k.
struct WeightVector {
  std::vector<double> weights;
  HurstRegime regime = HurstRegime::Sub34;
  double normalizer = 1.0;

  void validate() const;
  bool operator==(const WeightVector&) const = default;
};

enum class EstimatorKind { WeightedDiscrete, WeightedContinuous, Unweighted, TwoTermDrift };

std::string to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(const std::string& name);

struct EstimateResult {
  EstimatorKind kind = EstimatorKind::WeightedDiscrete;
  double alpha_star = 0.0;
  /// alpha_star = y_stat^(-1/(2H)). For the two-term-drift estimator, which has
  /// no closed-form statistic, y_stat is the equivalent alpha_star^(-2H).
  double y_stat = 0.0;
  std::size_t n_coords = 0;
  SamplingScheme scheme;
  WeightVector weights;
};

/// Continuous-weight options.
struct ContinuousWeightOptions {
  /// At H = 3/4 use the normalizer constant (3/4) Gamma(3/4) instead of
  /// H Gamma(2H) = (3/4) Gamma(3/2). Only the latter makes E Y_N = alpha^(-3/2).
  bool eq34_printed_constant = false;
  bool operator==(const ContinuousWeightOptions&) const = default;
};

/// (1/n) sum_{t=1..n} path_k(t)^2 for k < N. Paths must sit on the grid 1, 2, ....
std::vector<double> discrete_second_moments(const CoordinatePaths& paths, std::size_t N,
                                            std::size_t n);

/// Trapezoid approximation of (1/(T - delta)) int_delta^T path_k(t)^2 dt for k < N,
/// over each row's own (possibly refined) grid.
std::vector<double> continuous_second_moments(const CoordinatePaths& paths, std::size_t N,
                                              const ContinuousScheme& scheme);

/// sum_k w_k m_k / normalizer.
double weighted_statistic(const std::vector<double>& moments, const WeightVector& weights);

/// y^(-1/(2H)); throws DegenerateInputError if y is zero or not finite.
double alpha_from_y(double y, double hurst);

/// w_k = theta_k^{2H} / sigma_k^2, normalizer N H Gamma(2H).
WeightVector discrete_weights(const SpectralModel& model, std::size_t N);

/// w_k = 1, normalizer H Gamma(2H) sum_k sigma_k^2 / theta_k^{2H}.
WeightVector unit_weights(const SpectralModel& model, std::size_t N);

/// Regime-dependent continuous weights:
///   H < 3/4: theta_k^{2H+1} / sigma_k^2
///   H = 3/4: theta_k^{5/2} / (sigma_k^2 ln(theta_k T))
///   H > 3/4: theta_k^{4-2H} / sigma_k^2
/// with normalizer H Gamma(2H) sum_k w_k sigma_k^2 / theta_k^{2H}.
WeightVector continuous_weights(const SpectralModel& model, std::size_t N, double horizon,
                                const ContinuousWeightOptions& options = {});

/// w_k = (sigma_k^2 / theta_k^{2H}) / s_k^2, normalizer H Gamma(2H) sum_k w_k sigma_k^2 / theta_k^{2H}.
WeightVector optimal_weights(const SpectralModel& model, std::size_t N,
                             const std::vector<double>& s_squared);

/// var of Y_N under arbitrary weights given per-coordinate variances s_k^2.
double weighted_variance(const WeightVector& weights, const std::vector<double>& s_squared);

/// s_k^2 = var((1/n) sum_{t=1..n} z_k(t)^2) = (2/n) sum_{|i|<n} (1 - |i|/n) r_k(i)^2.
/// `autocov` holds canonical values at lags (alpha theta_k + nu_k) i, i = 0..n-1.
double s_squared_discrete(const SpectralModel& model, std::size_t k, std::size_t n,
                          const AutocovTable& autocov);
double s_squared_discrete(const SpectralModel& model, std::size_t k, std::size_t n);

/// s_k^2 = var((1/T) int_0^T z_k(t)^2 dt)
///       = sigma_k^4 / lambda^{4H} * 4/(lambda T) int_0^{lambda T} r(s)^2 (1 - s/(lambda T)) ds.
double s_squared_continuous(const SpectralModel& model, std::size_t k, double horizon);

/// Weighted MCE from discrete observations at t = 1..n (stationary or not).
EstimateResult wmce_discrete(const CoordinatePaths& paths, const SpectralModel& model,
                             std::size_t N, std::size_t n);

/// Weighted MCE from a continuous record over [delta, T].
EstimateResult wmce_continuous(const CoordinatePaths& paths, const SpectralModel& model,
                               std::size_t N, const ContinuousScheme& scheme,
                               const ContinuousWeightOptions& options = {});

/// Unit-weight MCE; time averaging follows the scheme.
EstimateResult unweighted_mce(const CoordinatePaths& paths, const SpectralModel& model,
                              std::size_t N, const SamplingScheme& scheme);

struct RootBracket {
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const RootBracket&) const = default;
};

inline constexpr double kTwoTermRelativeTolerance = 1e-10;
inline constexpr int kTwoTermMaxDoublings = 60;

/// Root alpha of sum_k ((alpha theta_k + nu_k)^{2H} / sigma_k^2) m_k = N H Gamma(2H)
/// by bisection. Experimental.
double solve_two_term_drift(const SpectralModel& model, const std::vector<double>& moments,
                            RootBracket bracket = {});

EstimateResult wmce_two_term_drift(const CoordinatePaths& paths, const SpectralModel& model,
                                   std::size_t N, std::size_t n, RootBracket bracket = {});

}  // namespace wmce
