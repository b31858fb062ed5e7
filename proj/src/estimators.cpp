#include "wmce/estimators.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wmce/errors.hpp"

namespace wmce {

namespace {

constexpr double kGridMatchTolerance = 1e-9;

void check_coordinate_count(const CoordinatePaths& paths, const SpectralModel& model,
                            std::size_t N) {
  if (N == 0) throw ValidationError("estimator needs N >= 1 coordinates");
  if (N > paths.coordinates()) {
    std::ostringstream os;
    os << "N = " << N << " exceeds the " << paths.coordinates() << " coordinates in the data";
    throw ValidationError(os.str());
  }
  if (N > model.size()) {
    std::ostringstream os;
    os << "N = " << N << " exceeds the model length " << model.size();
    throw ValidationError(os.str());
  }
}

bool same_time(double a, double b) {
  return std::abs(a - b) <= kGridMatchTolerance * std::max(1.0, std::abs(b));
}

double eq34_printed_constant() { return 0.75 * std::tgamma(0.75); }

WeightVector finish_weights(const SpectralModel& model, std::vector<double> weights,
                            HurstRegime regime, double constant) {
  const double h = model.hurst();
  double denominator = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double s = model.sigma(k);
    denominator += weights[k] * s * s * std::pow(model.theta(k), -2.0 * h);
  }
  WeightVector result{std::move(weights), regime, constant * denominator};
  result.validate();
  return result;
}

}  // namespace

void WeightVector::validate() const {
  if (weights.empty()) throw ValidationError("weight vector is empty");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ValidationError("weights must be positive and finite");
  }
  if (!(normalizer > 0.0) || !std::isfinite(normalizer)) {
    throw ValidationError("weight normalizer must be positive and finite");
  }
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::WeightedDiscrete:
      return "weighted_discrete";
    case EstimatorKind::WeightedContinuous:
      return "weighted_continuous";
    case EstimatorKind::Unweighted:
      return "unweighted";
    case EstimatorKind::TwoTermDrift:
      return "two_term_drift";
  }
  return "unknown";
}

EstimatorKind estimator_kind_from_string(const std::string& name) {
  if (name == "weighted_discrete") return EstimatorKind::WeightedDiscrete;
  if (name == "weighted_continuous") return EstimatorKind::WeightedContinuous;
  if (name == "unweighted") return EstimatorKind::Unweighted;
  if (name == "two_term_drift") return EstimatorKind::TwoTermDrift;
  throw ValidationError("unknown estimator '" + name +
                        "' (expected weighted_discrete, weighted_continuous, unweighted, "
                        "two_term_drift)");
}

std::vector<double> discrete_second_moments(const CoordinatePaths& paths, std::size_t N,
                                            std::size_t n) {
  if (n == 0) throw ValidationError("discrete estimator needs n >= 1 time points");
  if (n > paths.grid_size()) {
    std::ostringstream os;
    os << "n = " << n << " exceeds the " << paths.grid_size() << " time points in the data";
    throw ValidationError(os.str());
  }
  if (N > paths.coordinates()) throw ValidationError("N exceeds the coordinates in the data");
  for (std::size_t i = 0; i < n; ++i) {
    if (!same_time(paths.grid[i], static_cast<double>(i + 1))) {
      throw ValidationError("discrete estimator expects observations at t = 1, 2, ..., n");
    }
  }
  std::vector<double> moments(N);
  for (std::size_t k = 0; k < N; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = paths.at(k, i);
      sum += v * v;
    }
    moments[k] = sum / static_cast<double>(n);
  }
  return moments;
}

std::vector<double> continuous_second_moments(const CoordinatePaths& paths, std::size_t N,
                                              const ContinuousScheme& scheme) {
  validate_scheme(scheme);
  if (N > paths.coordinates()) throw ValidationError("N exceeds the coordinates in the data");
  const std::size_t steps = continuous_steps(scheme);
  const std::size_t start = burn_in_index(scheme);
  if (paths.grid_size() != steps + 1 || !same_time(paths.grid.front(), 0.0) ||
      !same_time(paths.grid.back(), scheme.horizon)) {
    throw ValidationError("continuous estimator: path grid does not match the scheme " +
                          describe(scheme));
  }
  if (steps - start < 1) {
    throw ValidationError("continuous estimator needs at least 2 grid points in [delta, T]");
  }
  const double span = scheme.horizon - scheme.burn_in;
  std::vector<double> moments(N);
  for (std::size_t k = 0; k < N; ++k) {
    const std::uint32_t q = paths.refinement[k];
    const auto& row = paths.rows[k];
    // Base steps are equal up to rounding, so integrate against actual times.
    double integral = 0.0;
    for (std::size_t i = start; i < steps; ++i) {
      const double dt = (paths.grid[i + 1] - paths.grid[i]) / q;
      const std::size_t j0 = i * q;
      double inner = 0.5 * (row[j0] * row[j0] + row[j0 + q] * row[j0 + q]);
      for (std::uint32_t j = 1; j < q; ++j) inner += row[j0 + j] * row[j0 + j];
      integral += dt * inner;
    }
    moments[k] = integral / span;
  }
  return moments;
}

double weighted_statistic(const std::vector<double>& moments, const WeightVector& weights) {
  if (moments.size() != weights.weights.size()) {
    throw ValidationError("moment and weight vectors differ in length");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < moments.size(); ++k) sum += weights.weights[k] * moments[k];
  return sum / weights.normalizer;
}

double alpha_from_y(double y, double hurst) {
  if (!(y > 0.0) || !std::isfinite(y)) {
    std::ostringstream os;
    os << "degenerate statistic Y_N = " << y << " (all-zero or invalid data); cannot invert";
    throw DegenerateInputError(os.str());
  }
  return std::pow(y, -1.0 / (2.0 * hurst));
}

WeightVector discrete_weights(const SpectralModel& model, std::size_t N) {
  if (N == 0 || N > model.size()) throw ValidationError("N must lie in 1..model size");
  const double h = model.hurst();
  std::vector<double> w(N);
  for (std::size_t k = 0; k < N; ++k) {
    const double s = model.sigma(k);
    w[k] = std::pow(model.theta(k), 2.0 * h) / (s * s);
  }
  return finish_weights(model, std::move(w), hurst_regime(h), hurst_variance_constant(h));
}

WeightVector unit_weights(const SpectralModel& model, std::size_t N) {
  if (N == 0 || N > model.size()) throw ValidationError("N must lie in 1..model size");
  const double h = model.hurst();
  return finish_weights(model, std::vector<double>(N, 1.0), hurst_regime(h),
                        hurst_variance_constant(h));
}

WeightVector continuous_weights(const SpectralModel& model, std::size_t N, double horizon,
                                const ContinuousWeightOptions& options) {
  if (N == 0 || N > model.size()) throw ValidationError("N must lie in 1..model size");
  if (!(horizon > 0.0)) throw ValidationError("continuous weights need T > 0");
  const double h = model.hurst();
  const HurstRegime regime = hurst_regime(h);
  std::vector<double> w(N);
  double constant = hurst_variance_constant(h);
  for (std::size_t k = 0; k < N; ++k) {
    const double theta = model.theta(k);
    const double s2 = model.sigma(k) * model.sigma(k);
    switch (regime) {
      case HurstRegime::Sub34:
        w[k] = std::pow(theta, 2.0 * h + 1.0) / s2;
        break;
      case HurstRegime::Eq34: {
        const double log_term = std::log(theta * horizon);
        if (!(theta * horizon > 1.0)) {
          std::ostringstream os;
          os << "H = 3/4 weights need theta_k T > 1 (ln singularity): theta_" << k + 1
             << " T = " << theta * horizon;
          throw ValidationError(os.str());
        }
        w[k] = std::pow(theta, 2.5) / (s2 * log_term);
        break;
      }
      case HurstRegime::Super34:
        w[k] = std::pow(theta, 4.0 - 2.0 * h) / s2;
        break;
    }
  }
  if (regime == HurstRegime::Eq34 && options.eq34_printed_constant) {
    constant = eq34_printed_constant();
  }
  return finish_weights(model, std::move(w), regime, constant);
}

WeightVector optimal_weights(const SpectralModel& model, std::size_t N,
                             const std::vector<double>& s_squared) {
  if (N == 0 || N > model.size()) throw ValidationError("N must lie in 1..model size");
  if (s_squared.size() < N) throw ValidationError("optimal weights need s_k^2 for every k <= N");
  const double h = model.hurst();
  std::vector<double> w(N);
  for (std::size_t k = 0; k < N; ++k) {
    if (!(s_squared[k] > 0.0)) {
      throw ValidationError("optimal weights need s_k^2 > 0 (k = " + std::to_string(k + 1) + ")");
    }
    const double s = model.sigma(k);
    w[k] = s * s * std::pow(model.theta(k), -2.0 * h) / s_squared[k];
  }
  return finish_weights(model, std::move(w), hurst_regime(h), hurst_variance_constant(h));
}

double weighted_variance(const WeightVector& weights, const std::vector<double>& s_squared) {
  if (s_squared.size() < weights.weights.size()) {
    throw ValidationError("weighted variance needs s_k^2 for every weight");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < weights.weights.size(); ++k) {
    sum += weights.weights[k] * weights.weights[k] * s_squared[k];
  }
  return sum / (weights.normalizer * weights.normalizer);
}

double s_squared_discrete(const SpectralModel& model, std::size_t k, std::size_t n,
                          const AutocovTable& autocov) {
  if (n == 0) throw ValidationError("s_k^2 needs n >= 1");
  if (autocov.values.size() < n) {
    throw ValidationError("autocovariance table must cover lags 0..n-1");
  }
  const double h = model.hurst();
  const double speed = model.alpha() * model.theta(k) + model.nu(k);
  const double s = model.sigma(k);
  const double scale = s * s * std::pow(speed, -2.0 * h);
  const double nn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = scale * autocov.values[i];
    const double weight = i == 0 ? 1.0 : 2.0 * (1.0 - static_cast<double>(i) / nn);
    sum += weight * r * r;
  }
  return 2.0 / nn * sum;
}

double s_squared_discrete(const SpectralModel& model, std::size_t k, std::size_t n) {
  return s_squared_discrete(model, k, n, AutocovTable::for_coordinate(model, k, n));
}

double s_squared_continuous(const SpectralModel& model, std::size_t k, double horizon) {
  if (!(horizon > 0.0)) throw ValidationError("s_k^2 needs T > 0");
  const double h = model.hurst();
  const double speed = model.alpha() * model.theta(k) + model.nu(k);
  const double s = model.sigma(k);
  const double span = speed * horizon;
  auto integrand = [h, span](double u) {
    const double r = canonical_autocov(h, u);
    return r * r * (1.0 - u / span);
  };
  double error = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      integrand, 0.0, span, 15, 1e-10, &error);
  if (!std::isfinite(integral)) throw NumericError("s_k^2 quadrature did not converge");
  return std::pow(s, 4) * std::pow(speed, -4.0 * h) * 4.0 / span * integral;
}

EstimateResult wmce_discrete(const CoordinatePaths& paths, const SpectralModel& model,
                             std::size_t N, std::size_t n) {
  check_coordinate_count(paths, model, N);
  EstimateResult result;
  result.kind = EstimatorKind::WeightedDiscrete;
  result.n_coords = N;
  result.scheme = DiscreteScheme{n};
  result.weights = discrete_weights(model, N);
  result.y_stat = weighted_statistic(discrete_second_moments(paths, N, n), result.weights);
  result.alpha_star = alpha_from_y(result.y_stat, model.hurst());
  return result;
}

EstimateResult wmce_continuous(const CoordinatePaths& paths, const SpectralModel& model,
                               std::size_t N, const ContinuousScheme& scheme,
                               const ContinuousWeightOptions& options) {
  check_coordinate_count(paths, model, N);
  EstimateResult result;
  result.kind = EstimatorKind::WeightedContinuous;
  result.n_coords = N;
  result.scheme = scheme;
  result.weights = continuous_weights(model, N, scheme.horizon, options);
  result.y_stat =
      weighted_statistic(continuous_second_moments(paths, N, scheme), result.weights);
  result.alpha_star = alpha_from_y(result.y_stat, model.hurst());
  return result;
}

EstimateResult unweighted_mce(const CoordinatePaths& paths, const SpectralModel& model,
                              std::size_t N, const SamplingScheme& scheme) {
  check_coordinate_count(paths, model, N);
  validate_scheme(scheme);
  EstimateResult result;
  result.kind = EstimatorKind::Unweighted;
  result.n_coords = N;
  result.scheme = scheme;
  result.weights = unit_weights(model, N);
  const auto moments = std::holds_alternative<DiscreteScheme>(scheme)
                           ? discrete_second_moments(paths, N, std::get<DiscreteScheme>(scheme).n)
                           : continuous_second_moments(paths, N, std::get<ContinuousScheme>(scheme));
  result.y_stat = weighted_statistic(moments, result.weights);
  result.alpha_star = alpha_from_y(result.y_stat, model.hurst());
  return result;
}

double solve_two_term_drift(const SpectralModel& model, const std::vector<double>& moments,
                            RootBracket bracket) {
  const std::size_t N = moments.size();
  if (N == 0 || N > model.size()) throw ValidationError("N must lie in 1..model size");
  if (std::all_of(moments.begin(), moments.end(), [](double m) { return m == 0.0; })) {
    throw DegenerateInputError("two-term-drift estimator: all observations are zero");
  }
  if (!(bracket.lo >= 0.0 && bracket.hi > bracket.lo) || !std::isfinite(bracket.hi)) {
    throw ValidationError("two-term-drift bracket must satisfy 0 <= lo < hi");
  }
  const double h = model.hurst();
  const double target = static_cast<double>(N) * hurst_variance_constant(h);
  // Normalized so the root solves ratio(alpha) = 1; strictly increasing in alpha.
  auto ratio = [&](double alpha) {
    double sum = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      const double s = model.sigma(k);
      sum += std::pow(alpha * model.theta(k) + model.nu(k), 2.0 * h) / (s * s) * moments[k];
    }
    return sum / target;
  };
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!(ratio(lo) < 1.0)) {
    std::ostringstream os;
    os << "two-term-drift equation has no root above " << lo
       << ": the left side already exceeds its target there";
    throw NumericError(os.str());
  }
  int doublings = 0;
  while (ratio(hi) < 1.0) {
    if (++doublings > kTwoTermMaxDoublings) {
      throw NumericError("two-term-drift bracket expansion failed after 60 doublings");
    }
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > kTwoTermRelativeTolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    if (ratio(mid) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EstimateResult wmce_two_term_drift(const CoordinatePaths& paths, const SpectralModel& model,
                                   std::size_t N, std::size_t n, RootBracket bracket) {
  check_coordinate_count(paths, model, N);
  EstimateResult result;
  result.kind = EstimatorKind::TwoTermDrift;
  result.n_coords = N;
  result.scheme = DiscreteScheme{n};
  result.weights = discrete_weights(model, N);
  result.alpha_star = solve_two_term_drift(model, discrete_second_moments(paths, N, n), bracket);
  result.y_stat = std::pow(result.alpha_star, -2.0 * model.hurst());
  return result;
}

}  // namespace wmce
