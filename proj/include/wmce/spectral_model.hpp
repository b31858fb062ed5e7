#pragma once

// Spectral description of a diagonalizable linear evolution equation
//   dX = alpha A X dt + Phi dB^H
// through the eigenvalue sequences of A (-theta_k) and Phi (sigma_k).
// Coordinates are indexed from 0 in code; coordinate k corresponds to the
// (k+1)-th eigenpair.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace wmce {

class SpectralModel {
 public:
  /// Validates every invariant; throws ValidationError on violation.
  SpectralModel(double alpha, double hurst, std::vector<double> thetas,
                std::vector<double> sigmas,
                std::optional<std::vector<double>> nus = std::nullopt,
                std::optional<int> dimension_hint = std::nullopt);

  double alpha() const noexcept { return alpha_; }
  double hurst() const noexcept { return hurst_; }
  std::size_t size() const noexcept { return thetas_.size(); }

  double theta(std::size_t k) const { return thetas_.at(k); }
  double sigma(std::size_t k) const { return sigmas_.at(k); }
  /// Second drift eigenvalue; 0 when the model has a single drift term.
  double nu(std::size_t k) const { return nus_ ? nus_->at(k) : 0.0; }

  std::span<const double> thetas() const noexcept { return thetas_; }
  std::span<const double> sigmas() const noexcept { return sigmas_; }
  const std::optional<std::vector<double>>& nus() const noexcept { return nus_; }
  std::optional<int> dimension_hint() const noexcept { return dimension_hint_; }

  /// Same eigen-structure with a different drift parameter.
  SpectralModel with_alpha(double alpha) const;

  bool operator==(const SpectralModel&) const = default;

 private:
  double alpha_;
  double hurst_;
  std::vector<double> thetas_;
  std::vector<double> sigmas_;
  std::optional<std::vector<double>> nus_;
  std::optional<int> dimension_hint_;
};

struct StationaryInit {
  bool operator==(const StationaryInit&) const = default;
};

/// x_k(0) given coordinate-wise.
struct DeterministicInit {
  std::vector<double> values;
  bool operator==(const DeterministicInit&) const = default;
};

/// x_k(0) ~ N(mean, std^2), independent across coordinates.
struct GaussianIidInit {
  double mean = 0.0;
  double std = 1.0;
  bool operator==(const GaussianIidInit&) const = default;
};

using InitialCondition = std::variant<StationaryInit, DeterministicInit, GaussianIidInit>;

void validate_initial_condition(const InitialCondition& init, const SpectralModel& model);

bool is_stationary(const InitialCondition& init) noexcept;

/// E x_k(0)^2 and E x_k(0)^4. For the stationary law these are r_k(0) and 3 r_k(0)^2.
double initial_second_moment(const InitialCondition& init, const SpectralModel& model,
                             std::size_t k);
double initial_fourth_moment(const InitialCondition& init, const SpectralModel& model,
                             std::size_t k);

enum class HurstRegime { Sub34, Eq34, Super34 };

inline constexpr double kRegimeTolerance = 1e-12;

/// Selects the continuous-time weight family. Throws for H outside (0,1).
HurstRegime hurst_regime(double hurst);

std::string to_string(HurstRegime regime);

/// theta_k = k^(2/d), k = 1..count: growth class of Dirichlet Laplacian eigenvalues.
std::vector<double> heat_eigenvalues(int dimension, std::size_t count);

struct StationarityMargin {
  double partial_sum;
  /// Log-log slope of the last half of the summands against k. Heuristic only:
  /// a slope below -1 suggests the series converges.
  double tail_slope;
  bool heuristically_convergent;
};

StationarityMargin stationarity_margin(const SpectralModel& model, double gamma,
                                       std::size_t terms);

enum class ObservationMode { Discrete, Continuous };

enum class SequenceTrend { Vanishing, Bounded, Diverging, Unclear };

std::string to_string(SequenceTrend trend);

struct ConditionDiagnostic {
  std::string name;
  std::string requirement;
  std::vector<double> values;  ///< indexed by coordinate, k = 1..N
  double max_value;
  SequenceTrend trend;
  bool satisfied;
};

struct ConditionReport {
  ObservationMode mode;
  std::vector<ConditionDiagnostic> conditions;

  const ConditionDiagnostic& at(const std::string& name) const;
  bool all_satisfied() const;
};

/// Finite-truncation diagnostics for the consistency conditions of the
/// non-stationary estimators. Every verdict is heuristic: it inspects the
/// trend of the observed part of an infinite sequence.
ConditionReport check_nonstationary_conditions(const SpectralModel& model,
                                               const InitialCondition& init,
                                               ObservationMode mode);

}  // namespace wmce
