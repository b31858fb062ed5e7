#include "wmce/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wmce/autocov.hpp"
#include "wmce/errors.hpp"

namespace wmce {

namespace {

void require_positive(std::span<const double> values, const char* name, bool allow_zero = false) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    const bool ok = std::isfinite(v) && (allow_zero ? v >= 0.0 : v > 0.0);
    if (!ok) {
      std::ostringstream os;
      os << name << "[" << k + 1 << "] = " << v << " must be "
         << (allow_zero ? "nonnegative" : "positive");
      throw ValidationError(os.str());
    }
  }
}

// Least-squares slope of log(values) against log(k), over the given index range.
// Zero entries are skipped; returns NaN when fewer than two usable points remain.
double log_log_slope(std::span<const double> values, std::size_t begin, std::size_t end,
                     std::size_t index_offset = 1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (!(values[i] > 0.0)) continue;
    const double x = std::log(static_cast<double>(i + index_offset));
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(count);
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

bool tail_nonincreasing(std::span<const double> values, std::size_t begin) {
  for (std::size_t i = begin + 1; i < values.size(); ++i) {
    if (values[i] > values[i - 1] * (1.0 + 1e-12)) return false;
  }
  return true;
}

bool tail_nondecreasing(std::span<const double> values, std::size_t begin) {
  for (std::size_t i = begin + 1; i < values.size(); ++i) {
    if (values[i] < values[i - 1] * (1.0 - 1e-12)) return false;
  }
  return true;
}

// Trend of the observed part of a nonnegative sequence, judged on its second half.
SequenceTrend classify(std::span<const double> values) {
  if (values.empty()) return SequenceTrend::Unclear;
  const double max_all = *std::max_element(values.begin(), values.end());
  if (max_all == 0.0) return SequenceTrend::Vanishing;
  const std::size_t half = values.size() / 2;
  const double max_tail = *std::max_element(values.begin() + half, values.end());
  const double last = values.back();
  if (tail_nonincreasing(values, half) && last <= 1e-6 * max_all) {
    return SequenceTrend::Vanishing;
  }
  if (values.size() >= 4 && tail_nondecreasing(values, half) &&
      last >= 2.0 * values[half] && last > 0.0) {
    return SequenceTrend::Diverging;
  }
  const double max_head =
      half == 0 ? max_tail : *std::max_element(values.begin(), values.begin() + half);
  if (max_tail <= max_head * (1.0 + 1e-9)) return SequenceTrend::Bounded;
  return SequenceTrend::Unclear;
}

ConditionDiagnostic make_diagnostic(std::string name, std::string requirement,
                                    std::vector<double> values, bool want_vanishing) {
  ConditionDiagnostic d;
  d.name = std::move(name);
  d.requirement = std::move(requirement);
  d.max_value = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  d.trend = classify(values);
  d.satisfied = want_vanishing
                    ? d.trend == SequenceTrend::Vanishing
                    : (d.trend == SequenceTrend::Vanishing || d.trend == SequenceTrend::Bounded);
  d.values = std::move(values);
  return d;
}

ConditionDiagnostic make_divergence_diagnostic(std::string name, std::string requirement,
                                               std::vector<double> values) {
  ConditionDiagnostic d;
  d.name = std::move(name);
  d.requirement = std::move(requirement);
  d.max_value = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  d.trend = classify(values);
  d.satisfied = d.trend == SequenceTrend::Diverging;
  d.values = std::move(values);
  return d;
}

// Power-law decay faster than k^-1 (D1', D2'). Exact zeros (underflow) count as decayed.
ConditionDiagnostic make_summable_diagnostic(std::string name, std::string requirement,
                                             std::vector<double> values) {
  ConditionDiagnostic d;
  d.name = std::move(name);
  d.requirement = std::move(requirement);
  d.max_value = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  d.trend = classify(values);
  const std::size_t half = values.size() / 2;
  const bool tail_zero = std::all_of(values.begin() + half, values.end(),
                                     [](double v) { return v == 0.0; });
  if (tail_zero) {
    d.satisfied = true;
  } else {
    const double slope = log_log_slope(values, half, values.size());
    d.satisfied = std::isfinite(slope) && slope < -1.0 && tail_nonincreasing(values, half);
  }
  d.values = std::move(values);
  return d;
}

}  // namespace

SpectralModel::SpectralModel(double alpha, double hurst, std::vector<double> thetas,
                             std::vector<double> sigmas, std::optional<std::vector<double>> nus,
                             std::optional<int> dimension_hint)
    : alpha_(alpha),
      hurst_(hurst),
      thetas_(std::move(thetas)),
      sigmas_(std::move(sigmas)),
      nus_(std::move(nus)),
      dimension_hint_(dimension_hint) {
  if (!(std::isfinite(alpha_) && alpha_ > 0.0)) {
    throw ValidationError("alpha must be positive");
  }
  if (!(hurst_ > 0.0 && hurst_ < 1.0)) {
    throw ValidationError("hurst must lie in open interval (0,1)");
  }
  if (thetas_.empty()) throw ValidationError("thetas must contain at least one eigenvalue");
  if (thetas_.size() != sigmas_.size()) {
    throw ValidationError("thetas and sigmas must have equal length");
  }
  require_positive(thetas_, "thetas");
  require_positive(sigmas_, "sigmas");
  if (nus_) {
    if (nus_->size() != thetas_.size()) {
      throw ValidationError("nus must have the same length as thetas");
    }
    require_positive(*nus_, "nus", /*allow_zero=*/true);
  }
  if (dimension_hint_ && *dimension_hint_ < 1) {
    throw ValidationError("dimension_hint must be a positive integer");
  }
}

SpectralModel SpectralModel::with_alpha(double alpha) const {
  return SpectralModel(alpha, hurst_, thetas_, sigmas_, nus_, dimension_hint_);
}

void validate_initial_condition(const InitialCondition& init, const SpectralModel& model) {
  if (const auto* det = std::get_if<DeterministicInit>(&init)) {
    if (det->values.size() != model.size()) {
      throw ValidationError("deterministic initial values must match the model length");
    }
    for (double v : det->values) {
      if (!std::isfinite(v)) throw ValidationError("deterministic initial values must be finite");
    }
  } else if (const auto* g = std::get_if<GaussianIidInit>(&init)) {
    if (!std::isfinite(g->mean)) throw ValidationError("initial mean must be finite");
    if (!(g->std >= 0.0) || !std::isfinite(g->std)) {
      throw ValidationError("initial std must be nonnegative");
    }
  }
}

bool is_stationary(const InitialCondition& init) noexcept {
  return std::holds_alternative<StationaryInit>(init);
}

double initial_second_moment(const InitialCondition& init, const SpectralModel& model,
                             std::size_t k) {
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StationaryInit>) {
          return coordinate_variance(model, k);
        } else if constexpr (std::is_same_v<T, DeterministicInit>) {
          return c.values.at(k) * c.values.at(k);
        } else {
          return c.mean * c.mean + c.std * c.std;
        }
      },
      init);
}

double initial_fourth_moment(const InitialCondition& init, const SpectralModel& model,
                             std::size_t k) {
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, StationaryInit>) {
          const double v = coordinate_variance(model, k);
          return 3.0 * v * v;
        } else if constexpr (std::is_same_v<T, DeterministicInit>) {
          const double x = c.values.at(k);
          return x * x * x * x;
        } else {
          const double m2 = c.mean * c.mean;
          const double s2 = c.std * c.std;
          return m2 * m2 + 6.0 * m2 * s2 + 3.0 * s2 * s2;
        }
      },
      init);
}

HurstRegime hurst_regime(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw ValidationError("hurst must lie in open interval (0,1)");
  }
  if (std::abs(hurst - 0.75) <= kRegimeTolerance) return HurstRegime::Eq34;
  return hurst < 0.75 ? HurstRegime::Sub34 : HurstRegime::Super34;
}

std::string to_string(HurstRegime regime) {
  switch (regime) {
    case HurstRegime::Sub34: return "H<3/4";
    case HurstRegime::Eq34: return "H=3/4";
    case HurstRegime::Super34: return "H>3/4";
  }
  return "?";
}

std::string to_string(SequenceTrend trend) {
  switch (trend) {
    case SequenceTrend::Vanishing: return "vanishing";
    case SequenceTrend::Bounded: return "bounded";
    case SequenceTrend::Diverging: return "diverging";
    case SequenceTrend::Unclear: return "unclear";
  }
  return "?";
}

std::vector<double> heat_eigenvalues(int dimension, std::size_t count) {
  if (dimension < 1) throw ValidationError("heat dimension d must be at least 1");
  if (count == 0) throw ValidationError("heat eigenvalue count must be at least 1");
  std::vector<double> thetas(count);
  const double exponent = 2.0 / dimension;
  for (std::size_t k = 0; k < count; ++k) {
    const double kk = static_cast<double>(k + 1);
    thetas[k] = dimension == 1 ? kk * kk : (dimension == 2 ? kk : std::pow(kk, exponent));
  }
  return thetas;
}

StationarityMargin stationarity_margin(const SpectralModel& model, double gamma,
                                       std::size_t terms) {
  if (terms == 0 || terms > model.size()) {
    throw ValidationError("stationarity_margin: terms must lie in [1, model length]");
  }
  const double h2 = 2.0 * model.hurst();
  std::vector<double> summands(terms);
  double sum = 0.0;
  for (std::size_t k = 0; k < terms; ++k) {
    const double theta = model.theta(k);
    const double sigma = model.sigma(k);
    summands[k] = sigma * sigma / std::pow(1.0 + theta, gamma) * std::pow(1.0 + 1.0 / theta, h2);
    sum += summands[k];
  }
  const std::size_t tail = terms / 2;
  const double slope =
      tail >= 2 ? log_log_slope(summands, terms - tail, terms)
                : std::numeric_limits<double>::quiet_NaN();
  return {sum, slope, std::isfinite(slope) && slope < -1.0};
}

const ConditionDiagnostic& ConditionReport::at(const std::string& name) const {
  for (const auto& c : conditions) {
    if (c.name == name) return c;
  }
  throw ValidationError("no condition named " + name + " in report");
}

bool ConditionReport::all_satisfied() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const auto& c) { return c.satisfied; });
}

ConditionReport check_nonstationary_conditions(const SpectralModel& model,
                                               const InitialCondition& init,
                                               ObservationMode mode) {
  validate_initial_condition(init, model);
  const std::size_t n = model.size();
  const double alpha = model.alpha();
  const double h = model.hurst();

  std::vector<double> thetas(model.thetas().begin(), model.thetas().end());
  std::vector<double> second(n), fourth(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double s2 = model.sigma(k) * model.sigma(k);
    second[k] = initial_second_moment(init, model, k) / s2;
    fourth[k] = initial_fourth_moment(init, model, k) / (s2 * s2);
  }

  ConditionReport report{mode, {}};
  if (mode == ObservationMode::Discrete) {
    std::vector<double> d2(n), d3(n), d1p(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double th = model.theta(k);
      const double decay = std::exp(-2.0 * alpha * th);
      d1p[k] = decay;
      d2[k] = decay * std::pow(th, 2.0 * h) * second[k];
      d3[k] = decay * decay * std::pow(th, 4.0 * h) * fourth[k];
    }
    report.conditions.push_back(
        make_divergence_diagnostic("D1", "theta_k -> infinity", std::move(thetas)));
    report.conditions.push_back(make_diagnostic(
        "D2", "exp(-2 alpha theta_k) theta_k^(2H) E x_k(0)^2 / sigma_k^2 -> 0", d2, true));
    report.conditions.push_back(make_diagnostic(
        "D3", "sup_k exp(-4 alpha theta_k) theta_k^(4H) E x_k(0)^4 / sigma_k^4 < infinity",
        std::move(d3), false));
    report.conditions.push_back(make_summable_diagnostic(
        "D1'", "exp(-2 alpha theta_k) < C k^beta, beta < -1", std::move(d1p)));
    report.conditions.push_back(make_summable_diagnostic(
        "D2'", "exp(-2 alpha theta_k) theta_k^(2H) E x_k(0)^2 / sigma_k^2 < C k^beta, beta < -1",
        std::move(d2)));
  } else {
    // theta_k / ln k is undefined at k = 1; the sequence starts at k = 2.
    std::vector<double> c1;
    for (std::size_t k = 1; k < n; ++k) {
      c1.push_back(model.theta(k) / std::log(static_cast<double>(k + 1)));
    }
    report.conditions.push_back(
        make_divergence_diagnostic("C1", "theta_k / ln(k) -> infinity", std::move(c1)));

    ConditionDiagnostic c1p;
    c1p.name = "C1'";
    c1p.requirement = "theta_k ~ k^beta for some beta > 0";
    c1p.max_value = *std::max_element(thetas.begin(), thetas.end());
    c1p.trend = classify(thetas);
    const double beta = log_log_slope(thetas, n / 2, n);
    // Power-law growth: positive log-log slope that stays put over the tail.
    const double beta_head = log_log_slope(thetas, n / 4, n / 2);
    c1p.satisfied = std::isfinite(beta) && beta > 0.0 && std::isfinite(beta_head) &&
                    std::abs(beta - beta_head) <= 0.25 * std::abs(beta);
    c1p.values = thetas;
    report.conditions.push_back(std::move(c1p));

    report.conditions.push_back(make_diagnostic(
        "C2", "sup_k E x_k(0)^2 / sigma_k^2 < infinity", std::move(second), false));
    report.conditions.push_back(make_diagnostic(
        "C2'", "sup_k E x_k(0)^4 / sigma_k^4 < infinity", std::move(fourth), false));
  }
  return report;
}

}  // namespace wmce
