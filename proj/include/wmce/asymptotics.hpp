#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "wmce/estimators.hpp"
#include "wmce/spectral_model.hpp"

namespace wmce {

/// lim N var(Y_N) = (2/n) alpha^{-4H}, returned divided by N.
double predicted_var_yn_discrete(const SpectralModel& model, std::size_t n, std::size_t N);

/// alpha^2 / (2 n H^2) / N: asymptotic variance of alpha*_N.
double predicted_alpha_var_discrete(const SpectralModel& model, std::size_t n, std::size_t N);

/// s_k^2 for k = 0..N-1 at n unit-step observations.
std::vector<double> s_squared_discrete_all(const SpectralModel& model, std::size_t N,
                                           std::size_t n);

/// Finite-N variance of the discrete weighted Y_N:
///   sum_k theta_k^{4H}/sigma_k^4 s_k^2 / (N H Gamma(2H))^2.
double exact_var_yn_discrete(const SpectralModel& model, std::size_t N, std::size_t n);
double exact_var_yn_discrete(const SpectralModel& model, const std::vector<double>& s_squared,
                             std::size_t N);

/// Order of var(Y_N) for the continuous estimator (constant 1):
///   1/sum theta_k, 1/sum theta_k/ln(theta_k T), 1/sum theta_k^{4-4H}.
double continuous_var_rate(const SpectralModel& model, double horizon, std::size_t N);

enum class ZetaCase { Below58, At58, Between58And34, At34, Above34 };

/// Sub-case of H with boundaries 5/8 and 3/4 resolved at kRegimeTolerance.
ZetaCase zeta_case(double hurst);

/// Fourth-cumulant bound shape zeta(N) for the continuous estimator.
double zeta_bound(const SpectralModel& model, double horizon, std::size_t N);

/// (alpha* - alpha) / ((alpha^{1+2H} / (2H)) sqrt(var_yn)), alpha taken from `model`.
double standardize_estimate(const EstimateResult& estimate, const SpectralModel& model,
                            double var_yn);
double standardize_alpha(double alpha_star, const SpectralModel& model, double var_yn);

/// sqrt(var Y_N) for the heat example with theta_k ~ k^{2/d}:
///   N^{-(1+2/d)/2}, sqrt(ln N) N^{-(1+2/d)/2}, N^{-(1+(8-8H)/d)/2}.
double heat_example_rate(int dimension, double hurst, std::size_t N);

enum class RateKind {
  DiscreteVarYN,
  DiscreteAlphaVar,
  ContinuousVarRate,
  ZetaBound,
  MleRate,
  TfeRate,
  TfeBias,
  HeatExampleRate
};

std::string to_string(RateKind kind);

struct RatePrediction {
  RateKind kind;
  std::vector<std::size_t> n_values;
  std::vector<double> values;
  bool order_only = false;
  std::map<std::string, std::string> meta;
};

struct RateParams {
  std::size_t n = 10;      ///< discrete observation count
  double horizon = 1.0;    ///< continuous horizon T
};

/// Evaluates one kind over an N grid.
RatePrediction predict_rates(RateKind kind, const SpectralModel& model,
                             const std::vector<std::size_t>& n_grid, const RateParams& params);

enum class ReferenceEstimator { Mle, Tfe };

/// Published rate curves of competing estimators (constant 1, order only).
/// MLE: 1/sqrt(sum theta_k). TFE: b_N = N^{-(1+2/d)/2} and a_N = N^{-2/d};
/// TFE needs the model's dimension hint.
std::vector<RatePrediction> reference_rates(const SpectralModel& model,
                                            const std::vector<std::size_t>& n_grid,
                                            ReferenceEstimator which);

/// CSV `N,value,kind,order_only` for every prediction, in order.
void write_rates_csv(const std::vector<RatePrediction>& predictions, std::ostream& out);

}  // namespace wmce
