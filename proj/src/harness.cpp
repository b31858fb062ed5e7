#include "wmce/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "wmce/asymptotics.hpp"
#include "wmce/errors.hpp"
#include "wmce/paths.hpp"
#include "wmce/stats.hpp"

namespace wmce {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool needs_discrete(EstimatorKind kind) {
  return kind == EstimatorKind::WeightedDiscrete || kind == EstimatorKind::TwoTermDrift;
}

// Re-raises the active exception with replication / N context, keeping its class.
[[noreturn]] void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const DegenerateInputError& e) {
    throw DegenerateInputError(context + e.what());
  } catch (const QuadratureError& e) {
    throw QuadratureError(context + e.what(), e.achieved_error());
  } catch (const NumericError& e) {
    throw NumericError(context + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(context + e.what());
  }
}

struct ReplicationResult {
  // [estimator][grid index]
  std::vector<std::vector<double>> alpha;
  std::vector<std::vector<double>> y;
};

}  // namespace

std::vector<EstimatorKind> default_estimators(const SamplingScheme& scheme) {
  if (is_discrete(scheme)) return {EstimatorKind::WeightedDiscrete, EstimatorKind::Unweighted};
  return {EstimatorKind::WeightedContinuous, EstimatorKind::Unweighted};
}

void validate_experiment(const ExperimentConfig& config) {
  validate_scheme(config.scheme);
  validate_initial_condition(config.init, config.model);
  if (config.replications < 2) throw ValidationError("replications must be >= 2");
  if (config.n_grid.empty()) throw ValidationError("N_grid must not be empty");
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    if (config.n_grid[i] == 0) throw ValidationError("N_grid entries must be >= 1");
    if (i > 0 && config.n_grid[i] <= config.n_grid[i - 1]) {
      throw ValidationError("N_grid must be strictly increasing");
    }
  }
  if (config.n_grid.back() > config.model.size()) {
    std::ostringstream os;
    os << "max(N_grid) = " << config.n_grid.back() << " exceeds the model length "
       << config.model.size();
    throw ValidationError(os.str());
  }
  if (config.estimators.empty()) throw ValidationError("estimator set must not be empty");
  for (EstimatorKind kind : config.estimators) {
    if (needs_discrete(kind) && !is_discrete(config.scheme)) {
      throw ValidationError(to_string(kind) + " estimator needs a discrete scheme");
    }
    if (kind == EstimatorKind::WeightedContinuous && is_discrete(config.scheme)) {
      throw ValidationError("weighted_continuous estimator needs a continuous scheme");
    }
  }
  if (const auto* c = std::get_if<ContinuousScheme>(&config.scheme)) {
    // Surfaces the H = 3/4 ln singularity before any sampling.
    if (std::find(config.estimators.begin(), config.estimators.end(),
                  EstimatorKind::WeightedContinuous) != config.estimators.end()) {
      continuous_weights(config.model, config.n_grid.back(), c->horizon, config.weight_options);
    }
  }
  refinement_factors(config.scheme, config.model, config.n_grid.back());
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

EstimateResult apply_estimator(EstimatorKind kind, const CoordinatePaths& paths,
                               const ExperimentConfig& config, std::size_t N) {
  switch (kind) {
    case EstimatorKind::WeightedDiscrete:
      return wmce_discrete(paths, config.model, N, std::get<DiscreteScheme>(config.scheme).n);
    case EstimatorKind::WeightedContinuous:
      return wmce_continuous(paths, config.model, N, std::get<ContinuousScheme>(config.scheme),
                             config.weight_options);
    case EstimatorKind::Unweighted:
      return unweighted_mce(paths, config.model, N, config.scheme);
    case EstimatorKind::TwoTermDrift:
      return wmce_two_term_drift(paths, config.model, N,
                                 std::get<DiscreteScheme>(config.scheme).n, config.bracket);
  }
  throw ValidationError("unknown estimator");
}

const SummaryRow& ExperimentSummary::row(EstimatorKind estimator, std::size_t N) const {
  for (const auto& r : rows) {
    if (r.estimator == estimator && r.n_coords == N) return r;
  }
  throw ValidationError("no summary row for " + to_string(estimator) + " at N = " +
                        std::to_string(N));
}

ExperimentSummary run_experiment(const ExperimentConfig& config, unsigned threads) {
  validate_experiment(config);
  const std::size_t max_n = config.n_grid.back();
  const std::size_t grid_count = config.n_grid.size();
  const std::size_t est_count = config.estimators.size();
  const std::size_t reps = config.replications;

  const NonstationarySampler sampler(config.model, config.init, observation_grid(config.scheme),
                                     max_n, config.sampler,
                                     refinement_factors(config.scheme, config.model, max_n));
  const RngPolicy rng(config.master_seed);

  std::vector<ReplicationResult> results(reps);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_rep = std::numeric_limits<std::size_t>::max();

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t r = next.fetch_add(1);
      if (r >= reps) return;
      std::size_t current_n = 0;
      try {
        const CoordinatePaths paths = sampler.sample(rng, r);
        ReplicationResult out;
        out.alpha.assign(est_count, std::vector<double>(grid_count));
        out.y.assign(est_count, std::vector<double>(grid_count));
        for (std::size_t e = 0; e < est_count; ++e) {
          for (std::size_t j = 0; j < grid_count; ++j) {
            current_n = config.n_grid[j];
            const EstimateResult est =
                apply_estimator(config.estimators[e], paths, config, current_n);
            out.alpha[e][j] = est.alpha_star;
            out.y[e][j] = est.y_stat;
          }
        }
        results[r] = std::move(out);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        // Keep the lowest failing replication so the reported error is stable.
        if (r < first_error_rep) {
          std::ostringstream os;
          os << "replication " << r;
          if (current_n > 0) os << ", N = " << current_n;
          os << ": ";
          try {
            rethrow_with_context(os.str());
          } catch (...) {
            first_error = std::current_exception();
          }
          first_error_rep = r;
        }
        failed = true;
      }
    }
  };

  const unsigned count = std::min<std::size_t>(resolve_threads(threads), reps);
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Ordered reduction: everything below depends only on replication index order.
  ExperimentSummary summary;
  summary.estimators = config.estimators;
  summary.n_grid = config.n_grid;
  summary.alpha_samples.assign(est_count, std::vector<std::vector<double>>(grid_count));
  summary.y_samples.assign(est_count, std::vector<std::vector<double>>(grid_count));
  summary.standardized.assign(est_count, std::vector<std::vector<double>>(grid_count));

  const double alpha = config.model.alpha();
  const bool stationary = is_stationary(config.init);
  std::vector<double> s_squared;
  if (stationary && std::find(config.estimators.begin(), config.estimators.end(),
                              EstimatorKind::WeightedDiscrete) != config.estimators.end()) {
    s_squared = s_squared_discrete_all(config.model, max_n,
                                       std::get<DiscreteScheme>(config.scheme).n);
  }

  for (std::size_t e = 0; e < est_count; ++e) {
    const EstimatorKind kind = config.estimators[e];
    std::vector<double> var_alpha_by_n;
    std::vector<double> var_y_by_n;
    std::vector<double> rmse_by_n;
    std::vector<double> sum_theta_by_n;
    for (std::size_t j = 0; j < grid_count; ++j) {
      const std::size_t N = config.n_grid[j];
      std::vector<double> a(reps);
      std::vector<double> y(reps);
      for (std::size_t r = 0; r < reps; ++r) {
        a[r] = results[r].alpha[e][j];
        y[r] = results[r].y[e][j];
      }
      SummaryRow row{};
      row.estimator = kind;
      row.n_coords = N;
      row.replications = reps;
      row.sum_theta = 0.0;
      for (std::size_t k = 0; k < N; ++k) row.sum_theta += config.model.theta(k);
      row.mean_alpha = sample_mean(a);
      row.bias = row.mean_alpha - alpha;
      row.variance = sample_variance(a);
      row.rmse = std::sqrt(row.bias * row.bias + row.variance);
      row.mean_y = sample_mean(y);
      row.var_y = sample_variance(y);
      row.se_y = std::sqrt(row.var_y / static_cast<double>(reps));

      std::vector<double> z(reps);
      if (kind == EstimatorKind::TwoTermDrift) {
        const double sd = std::sqrt(row.variance);
        row.standardizer_var = row.variance;
        row.standardizer_source = "empirical_alpha";
        for (std::size_t r = 0; r < reps; ++r) z[r] = sd > 0 ? (a[r] - alpha) / sd : kNaN;
      } else {
        if (kind == EstimatorKind::WeightedDiscrete && !s_squared.empty()) {
          row.standardizer_var = exact_var_yn_discrete(config.model, s_squared, N);
          row.standardizer_source = "exact";
        } else {
          row.standardizer_var = row.var_y;
          row.standardizer_source = "empirical";
        }
        for (std::size_t r = 0; r < reps; ++r) {
          z[r] = row.standardizer_var > 0 ? standardize_alpha(a[r], config.model,
                                                              row.standardizer_var)
                                          : kNaN;
        }
      }
      const bool finite = std::all_of(z.begin(), z.end(), [](double v) { return std::isfinite(v); });
      row.standardized_variance = finite ? sample_variance(z) : kNaN;
      if (finite && reps >= kKsMinSample) {
        const KsResult ks = ks_statistic(z);
        row.ks_statistic = ks.statistic;
        row.ks_pvalue = ks.pvalue;
      } else {
        row.ks_statistic = kNaN;
        row.ks_pvalue = kNaN;
      }
      row.excess_kurtosis_y = reps >= 4 && row.var_y > 0 ? excess_kurtosis(y) : kNaN;

      var_alpha_by_n.push_back(row.variance);
      var_y_by_n.push_back(row.var_y);
      rmse_by_n.push_back(row.rmse);
      sum_theta_by_n.push_back(row.sum_theta);
      summary.rows.push_back(row);
      summary.standardized[e][j] = std::move(z);
      if (config.keep_samples) {
        summary.alpha_samples[e][j] = std::move(a);
        summary.y_samples[e][j] = std::move(y);
      }
    }

    if (grid_count >= 3) {
      std::vector<double> ns(config.n_grid.begin(), config.n_grid.end());
      auto add = [&](const std::string& quantity, const std::string& regressor,
                     const std::vector<double>& x, const std::vector<double>& values) {
        if (std::any_of(values.begin(), values.end(), [](double v) { return !(v > 0.0); })) return;
        const RateFit fit = rate_regression(x, values);
        summary.rates.push_back({kind, quantity, regressor, fit.slope, fit.intercept, fit.r2,
                                 values.size()});
      };
      add("var_y", "N", ns, var_y_by_n);
      add("var_y", "sum_theta", sum_theta_by_n, var_y_by_n);
      add("var_alpha", "N", ns, var_alpha_by_n);
      add("rmse_alpha", "N", ns, rmse_by_n);
    }
  }
  return summary;
}

void write_summary_csv(const ExperimentSummary& summary, std::ostream& out) {
  out << "estimator,N,replications,sum_theta,mean_alpha,bias,variance,rmse,mean_y,var_y,se_y,"
         "standardizer_var,standardizer_source,ks_statistic,ks_pvalue,standardized_variance,"
         "excess_kurtosis_y\r\n";
  for (const auto& r : summary.rows) {
    out << to_string(r.estimator) << ',' << r.n_coords << ',' << r.replications << ','
        << format_double(r.sum_theta) << ',' << format_double(r.mean_alpha) << ','
        << format_double(r.bias) << ',' << format_double(r.variance) << ','
        << format_double(r.rmse) << ',' << format_double(r.mean_y) << ','
        << format_double(r.var_y) << ',' << format_double(r.se_y) << ','
        << format_double(r.standardizer_var) << ',' << r.standardizer_source << ','
        << format_double(r.ks_statistic) << ',' << format_double(r.ks_pvalue) << ','
        << format_double(r.standardized_variance) << ',' << format_double(r.excess_kurtosis_y)
        << "\r\n";
  }
}

void write_samples_csv(const ExperimentSummary& summary, std::ostream& out) {
  out << "estimator,N,replication,alpha_star,y_stat\r\n";
  for (std::size_t e = 0; e < summary.estimators.size(); ++e) {
    for (std::size_t j = 0; j < summary.n_grid.size(); ++j) {
      const auto& a = summary.alpha_samples[e][j];
      const auto& y = summary.y_samples[e][j];
      for (std::size_t r = 0; r < a.size(); ++r) {
        out << to_string(summary.estimators[e]) << ',' << summary.n_grid[j] << ',' << r << ','
            << format_double(a[r]) << ',' << format_double(y[r]) << "\r\n";
      }
    }
  }
}

void write_rates_rows_csv(const ExperimentSummary& summary, std::ostream& out) {
  out << "estimator,quantity,regressor,slope,intercept,r2,points\r\n";
  for (const auto& r : summary.rates) {
    out << to_string(r.estimator) << ',' << r.quantity << ',' << r.regressor << ','
        << format_double(r.slope) << ',' << format_double(r.intercept) << ','
        << format_double(r.r2) << ',' << r.points << "\r\n";
  }
}

}  // namespace wmce
