#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wmce/estimators.hpp"
#include "wmce/sampler.hpp"
#include "wmce/scheme.hpp"
#include "wmce/spectral_model.hpp"

namespace wmce {

struct ExperimentConfig {
  SpectralModel model;
  InitialCondition init = StationaryInit{};
  SamplingScheme scheme = DiscreteScheme{10};
  std::vector<std::size_t> n_grid;
  std::size_t replications = 2;
  std::uint64_t master_seed = 0;
  std::vector<EstimatorKind> estimators;
  SamplerMethod sampler = SamplerMethod::Auto;
  ContinuousWeightOptions weight_options;
  RootBracket bracket;
  /// Keep every raw draw for samples.csv.
  bool keep_samples = true;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ValidationError naming the violated invariant.
void validate_experiment(const ExperimentConfig& config);

/// Default estimator set for a scheme: weighted + unweighted.
std::vector<EstimatorKind> default_estimators(const SamplingScheme& scheme);

struct SummaryRow {
  EstimatorKind estimator;
  std::size_t n_coords;
  std::size_t replications;
  double sum_theta;
  double mean_alpha;
  double bias;
  double variance;  ///< unbiased sample variance of alpha*
  double rmse;      ///< sqrt(bias^2 + variance)
  double mean_y;
  double var_y;
  double se_y;
  /// var(Y_N) used to standardize alpha*, and where it came from
  /// ("exact", "empirical", or "empirical_alpha" for the two-term drift).
  double standardizer_var;
  std::string standardizer_source;
  double ks_statistic;
  double ks_pvalue;
  double standardized_variance;
  double excess_kurtosis_y;
};

struct RateRow {
  EstimatorKind estimator;
  std::string quantity;   ///< var_y, var_alpha, rmse_alpha
  std::string regressor;  ///< N or sum_theta
  double slope;
  double intercept;
  double r2;
  std::size_t points;
};

struct ExperimentSummary {
  std::vector<SummaryRow> rows;
  std::vector<RateRow> rates;
  /// samples[e][j][r]: estimator e, n_grid[j], replication r. Empty unless kept.
  std::vector<std::vector<std::vector<double>>> alpha_samples;
  std::vector<std::vector<std::vector<double>>> y_samples;
  /// Standardized alpha* per estimator and N (always kept).
  std::vector<std::vector<std::vector<double>>> standardized;
  std::vector<EstimatorKind> estimators;
  std::vector<std::size_t> n_grid;

  const SummaryRow& row(EstimatorKind estimator, std::size_t N) const;
};

/// Seeded Monte Carlo over replications; threads = 0 uses the hardware count.
/// Results are a pure function of `config`, independent of `threads`.
ExperimentSummary run_experiment(const ExperimentConfig& config, unsigned threads = 0);

/// Resolves a thread request (0 = auto) to a positive count.
unsigned resolve_threads(unsigned requested);

/// Applies one estimator to one path sample.
EstimateResult apply_estimator(EstimatorKind kind, const CoordinatePaths& paths,
                               const ExperimentConfig& config, std::size_t N);

void write_summary_csv(const ExperimentSummary& summary, std::ostream& out);
void write_samples_csv(const ExperimentSummary& summary, std::ostream& out);
void write_rates_rows_csv(const ExperimentSummary& summary, std::ostream& out);

}  // namespace wmce
