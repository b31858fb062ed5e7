#include "wmce/asymptotics.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "wmce/autocov.hpp"
#include "wmce/errors.hpp"
#include "wmce/paths.hpp"

namespace wmce {

namespace {

void check_n(const SpectralModel& model, std::size_t N) {
  if (N == 0 || N > model.size()) {
    std::ostringstream os;
    os << "N = " << N << " must lie in 1.." << model.size();
    throw ValidationError(os.str());
  }
}

double log_theta_t(double theta, double horizon, std::size_t k) {
  if (!(theta * horizon > 1.0)) {
    std::ostringstream os;
    os << "H = 3/4 needs theta_k T > 1 (ln singularity): theta_" << k + 1 << " T = "
       << theta * horizon;
    throw ValidationError(os.str());
  }
  return std::log(theta * horizon);
}

}  // namespace

double predicted_var_yn_discrete(const SpectralModel& model, std::size_t n, std::size_t N) {
  if (n == 0 || N == 0) throw ValidationError("n and N must be >= 1");
  return 2.0 / static_cast<double>(n) * std::pow(model.alpha(), -4.0 * model.hurst()) /
         static_cast<double>(N);
}

double predicted_alpha_var_discrete(const SpectralModel& model, std::size_t n, std::size_t N) {
  if (n == 0 || N == 0) throw ValidationError("n and N must be >= 1");
  const double a = model.alpha();
  const double h = model.hurst();
  return a * a / (2.0 * static_cast<double>(n) * h * h) / static_cast<double>(N);
}

std::vector<double> s_squared_discrete_all(const SpectralModel& model, std::size_t N,
                                           std::size_t n) {
  check_n(model, N);
  std::vector<double> s2(N);
  for (std::size_t k = 0; k < N; ++k) s2[k] = s_squared_discrete(model, k, n);
  return s2;
}

double exact_var_yn_discrete(const SpectralModel& model, const std::vector<double>& s_squared,
                             std::size_t N) {
  check_n(model, N);
  if (s_squared.size() < N) throw ValidationError("need s_k^2 for every k <= N");
  return weighted_variance(discrete_weights(model, N), s_squared);
}

double exact_var_yn_discrete(const SpectralModel& model, std::size_t N, std::size_t n) {
  return exact_var_yn_discrete(model, s_squared_discrete_all(model, N, n), N);
}

double continuous_var_rate(const SpectralModel& model, double horizon, std::size_t N) {
  check_n(model, N);
  const double h = model.hurst();
  double sum = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    const double theta = model.theta(k);
    switch (hurst_regime(h)) {
      case HurstRegime::Sub34:
        sum += theta;
        break;
      case HurstRegime::Eq34:
        sum += theta / log_theta_t(theta, horizon, k);
        break;
      case HurstRegime::Super34:
        sum += std::pow(theta, 4.0 - 4.0 * h);
        break;
    }
  }
  return 1.0 / sum;
}

ZetaCase zeta_case(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw ValidationError("hurst must lie in open interval (0,1)");
  }
  constexpr double kFiveEighths = 0.625;
  if (std::abs(hurst - kFiveEighths) <= kRegimeTolerance) return ZetaCase::At58;
  if (hurst < kFiveEighths) return ZetaCase::Below58;
  switch (hurst_regime(hurst)) {
    case HurstRegime::Sub34:
      return ZetaCase::Between58And34;
    case HurstRegime::Eq34:
      return ZetaCase::At34;
    case HurstRegime::Super34:
      break;
  }
  return ZetaCase::Above34;
}

double zeta_bound(const SpectralModel& model, double horizon, std::size_t N) {
  check_n(model, N);
  if (!(horizon > 0.0)) throw ValidationError("zeta bound needs T > 0");
  const double h = model.hurst();
  const double a = model.alpha();
  const double t = horizon;
  double numerator = 0.0;
  double denominator = 0.0;
  double prefactor = 1.0;
  const ZetaCase which = zeta_case(h);
  for (std::size_t k = 0; k < N; ++k) {
    const double theta = model.theta(k);
    switch (which) {
      case ZetaCase::Below58:
        denominator += theta;
        break;
      case ZetaCase::At58:
        numerator += theta * std::pow(std::log(a * theta * t), 3);
        denominator += theta;
        break;
      case ZetaCase::Between58And34:
        numerator += std::pow(theta, 8.0 * h - 4.0);
        denominator += theta;
        break;
      case ZetaCase::At34: {
        const double l = log_theta_t(theta, t, k);
        numerator += theta * theta / std::pow(l, 4);
        denominator += theta / l;
        break;
      }
      case ZetaCase::Above34:
        numerator += std::pow(theta, 8.0 - 8.0 * h);
        denominator += std::pow(theta, 4.0 - 4.0 * h);
        break;
    }
  }
  double value = 0.0;
  switch (which) {
    case ZetaCase::Below58:
      prefactor = 1.0 / (std::pow(t, 3) * std::pow(a, 8.0 * h + 3.0));
      value = prefactor / denominator;
      break;
    case ZetaCase::At58:
      prefactor = 1.0 / (std::pow(t, 3) * std::pow(a, 8.0 * h + 3.0));
      value = prefactor * numerator / (denominator * denominator);
      break;
    case ZetaCase::Between58And34:
    case ZetaCase::Above34:
      prefactor = 1.0 / (std::pow(t, 8.0 - 8.0 * h) * std::pow(a, 8));
      value = prefactor * numerator / (denominator * denominator);
      break;
    case ZetaCase::At34:
      prefactor = 1.0 / (t * t * std::pow(a, 8));
      value = prefactor * numerator / (denominator * denominator);
      break;
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    std::ostringstream os;
    os << "zeta bound is not positive (" << value << "); at H = 5/8 it needs alpha theta_k T > 1";
    throw NumericError(os.str());
  }
  return value;
}

double standardize_alpha(double alpha_star, const SpectralModel& model, double var_yn) {
  if (!(var_yn > 0.0)) throw ValidationError("standardization needs var(Y_N) > 0");
  const double a = model.alpha();
  const double h = model.hurst();
  const double slope = std::pow(a, 1.0 + 2.0 * h) / (2.0 * h);
  return (alpha_star - a) / (slope * std::sqrt(var_yn));
}

double standardize_estimate(const EstimateResult& estimate, const SpectralModel& model,
                            double var_yn) {
  return standardize_alpha(estimate.alpha_star, model, var_yn);
}

double heat_example_rate(int dimension, double hurst, std::size_t N) {
  if (dimension < 1) throw ValidationError("dimension must be >= 1");
  if (N == 0) throw ValidationError("N must be >= 1");
  const double n = static_cast<double>(N);
  const double d = static_cast<double>(dimension);
  switch (hurst_regime(hurst)) {
    case HurstRegime::Sub34:
      return std::pow(n, -(1.0 + 2.0 / d) / 2.0);
    case HurstRegime::Eq34:
      return std::sqrt(std::log(n)) * std::pow(n, -(1.0 + 2.0 / d) / 2.0);
    case HurstRegime::Super34:
      break;
  }
  return std::pow(n, -(1.0 + (8.0 - 8.0 * hurst) / d) / 2.0);
}

std::string to_string(RateKind kind) {
  switch (kind) {
    case RateKind::DiscreteVarYN:
      return "discrete_var_yn";
    case RateKind::DiscreteAlphaVar:
      return "discrete_alpha_var";
    case RateKind::ContinuousVarRate:
      return "continuous_var_rate";
    case RateKind::ZetaBound:
      return "zeta_bound";
    case RateKind::MleRate:
      return "mle_rate";
    case RateKind::TfeRate:
      return "tfe_rate";
    case RateKind::TfeBias:
      return "tfe_bias";
    case RateKind::HeatExampleRate:
      return "heat_example_rate";
  }
  return "unknown";
}

RatePrediction predict_rates(RateKind kind, const SpectralModel& model,
                             const std::vector<std::size_t>& n_grid, const RateParams& params) {
  RatePrediction out{kind, n_grid, {}, true, {}};
  out.meta["hurst"] = format_double(model.hurst());
  out.meta["regime"] = to_string(hurst_regime(model.hurst()));
  for (std::size_t N : n_grid) {
    double v = 0.0;
    switch (kind) {
      case RateKind::DiscreteVarYN:
        v = predicted_var_yn_discrete(model, params.n, N);
        out.order_only = false;
        break;
      case RateKind::DiscreteAlphaVar:
        v = predicted_alpha_var_discrete(model, params.n, N);
        out.order_only = false;
        break;
      case RateKind::ContinuousVarRate:
        v = continuous_var_rate(model, params.horizon, N);
        break;
      case RateKind::ZetaBound:
        v = zeta_bound(model, params.horizon, N);
        break;
      case RateKind::MleRate:
      case RateKind::TfeRate:
      case RateKind::TfeBias: {
        const auto refs = reference_rates(
            model, {N}, kind == RateKind::MleRate ? ReferenceEstimator::Mle : ReferenceEstimator::Tfe);
        v = refs[kind == RateKind::TfeBias ? 1 : 0].values.front();
        break;
      }
      case RateKind::HeatExampleRate:
        if (!model.dimension_hint()) {
          throw ValidationError("heat example rate needs the model dimension hint d");
        }
        v = heat_example_rate(*model.dimension_hint(), model.hurst(), N);
        break;
    }
    out.values.push_back(v);
  }
  if (kind == RateKind::DiscreteVarYN || kind == RateKind::DiscreteAlphaVar) {
    out.meta["n"] = std::to_string(params.n);
  } else {
    out.meta["T"] = format_double(params.horizon);
  }
  return out;
}

std::vector<RatePrediction> reference_rates(const SpectralModel& model,
                                            const std::vector<std::size_t>& n_grid,
                                            ReferenceEstimator which) {
  if (which == ReferenceEstimator::Mle) {
    RatePrediction mle{RateKind::MleRate, n_grid, {}, true, {}};
    for (std::size_t N : n_grid) {
      check_n(model, N);
      double sum = 0.0;
      for (std::size_t k = 0; k < N; ++k) sum += model.theta(k);
      mle.values.push_back(1.0 / std::sqrt(sum));
    }
    return {mle};
  }
  if (!model.dimension_hint()) {
    throw ValidationError("TFE reference rates need the model dimension hint d");
  }
  const double d = *model.dimension_hint();
  RatePrediction spread{RateKind::TfeRate, n_grid, {}, true, {{"d", std::to_string(*model.dimension_hint())}}};
  RatePrediction bias{RateKind::TfeBias, n_grid, {}, true, {{"d", std::to_string(*model.dimension_hint())}}};
  for (std::size_t N : n_grid) {
    if (N == 0) throw ValidationError("N must be >= 1");
    const double n = static_cast<double>(N);
    spread.values.push_back(std::pow(n, -(1.0 + 2.0 / d) / 2.0));
    bias.values.push_back(std::pow(n, -2.0 / d));
  }
  return {spread, bias};
}

void write_rates_csv(const std::vector<RatePrediction>& predictions, std::ostream& out) {
  out << "N,value,kind,order_only\r\n";
  for (const auto& p : predictions) {
    for (std::size_t i = 0; i < p.values.size(); ++i) {
      out << p.n_values[i] << ',' << format_double(p.values[i]) << ',' << to_string(p.kind) << ','
          << (p.order_only ? "true" : "false") << "\r\n";
    }
  }
}

}  // namespace wmce
