#include "wmce/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include "wmce/asymptotics.hpp"
#include "wmce/config.hpp"
#include "wmce/errors.hpp"
#include "wmce/harness.hpp"
#include "wmce/manifest.hpp"
#include "wmce/paths.hpp"
#include "wmce/sampler.hpp"
#include "wmce/stats.hpp"

namespace wmce {

using nlohmann::json;

namespace {

std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Simulate:
      return "simulate";
    case Subcommand::Estimate:
      return "estimate";
    case Subcommand::Experiment:
      return "experiment";
    case Subcommand::Rates:
      return "rates";
    case Subcommand::Compare:
      return "compare";
  }
  return "unknown";
}

std::string read_text(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file '" + file + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string csv_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

CoordinatePaths simulate_paths(const RunConfig& run) {
  const auto& exp = run.experiment;
  const std::size_t coords = exp.n_grid.back();
  const NonstationarySampler sampler(exp.model, exp.init, observation_grid(exp.scheme), coords,
                                     exp.sampler,
                                     refinement_factors(exp.scheme, exp.model, coords));
  return sampler.sample(RngPolicy(exp.master_seed), run.replication);
}

void cmd_simulate(const RunConfig& run, const CliInvocation& inv, OutputSet& out) {
  const CoordinatePaths paths = simulate_paths(run);
  std::ostringstream bin(std::ios::binary);
  write_paths_binary(paths, bin);
  out.write("paths.bin", bin.str());
  if (inv.format == OutputFormat::Csv) {
    std::ostringstream csv;
    write_paths_csv(paths, csv);
    out.write("paths.csv", csv.str());
  } else {
    json rows = json::array();
    for (std::size_t k = 0; k < paths.coordinates(); ++k) {
      std::vector<double> base(paths.grid_size());
      for (std::size_t i = 0; i < paths.grid_size(); ++i) base[i] = paths.at(k, i);
      rows.push_back(base);
    }
    out.write("paths.json",
              json{{"grid", paths.grid}, {"stationary", paths.stationary}, {"rows", rows}}.dump(1));
  }
}

void cmd_estimate(const RunConfig& run, const CliInvocation& inv, OutputSet& out) {
  const auto& exp = run.experiment;
  const std::string source = inv.paths_file.empty() ? run.paths_file : inv.paths_file;
  const CoordinatePaths paths = source.empty() ? simulate_paths(run) : load_paths(source);
  json results = json::array();
  std::ostringstream csv;
  csv << "estimator,N,alpha_star,y_stat,regime,weights_normalizer,weights_digest\r\n";
  for (EstimatorKind kind : exp.estimators) {
    for (std::size_t N : exp.n_grid) {
      const EstimateResult est = apply_estimator(kind, paths, exp, N);
      json j = to_json(est, exp.model);
      csv << j["estimator"].get<std::string>() << ',' << N << ',' << format_double(est.alpha_star)
          << ',' << format_double(est.y_stat) << ',' << j["regime"].get<std::string>() << ','
          << format_double(est.weights.normalizer) << ','
          << j["weights_digest"].get<std::string>() << "\r\n";
      results.push_back(std::move(j));
    }
  }
  out.write("estimates.json", results.dump(2) + "\n");
  if (inv.format == OutputFormat::Csv) out.write("estimates.csv", csv.str());
}

json summary_json(const ExperimentSummary& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"estimator", to_string(r.estimator)},
                    {"N", r.n_coords},
                    {"replications", r.replications},
                    {"sum_theta", r.sum_theta},
                    {"mean_alpha", r.mean_alpha},
                    {"bias", r.bias},
                    {"variance", r.variance},
                    {"rmse", r.rmse},
                    {"mean_y", r.mean_y},
                    {"var_y", r.var_y},
                    {"se_y", r.se_y},
                    {"standardizer_var", r.standardizer_var},
                    {"standardizer_source", r.standardizer_source},
                    {"ks_statistic", r.ks_statistic},
                    {"ks_pvalue", r.ks_pvalue},
                    {"standardized_variance", r.standardized_variance},
                    {"excess_kurtosis_y", r.excess_kurtosis_y}});
  }
  json rates = json::array();
  for (const auto& r : s.rates) {
    rates.push_back({{"estimator", to_string(r.estimator)},
                     {"quantity", r.quantity},
                     {"regressor", r.regressor},
                     {"slope", r.slope},
                     {"intercept", r.intercept},
                     {"r2", r.r2},
                     {"points", r.points}});
  }
  return {{"rows", rows}, {"rates", rates}};
}

void cmd_experiment(const RunConfig& run, const CliInvocation& inv, OutputSet& out) {
  const ExperimentSummary summary = run_experiment(run.experiment, inv.threads);
  if (inv.format == OutputFormat::Csv) {
    std::ostringstream s;
    write_summary_csv(summary, s);
    out.write("summary.csv", s.str());
    std::ostringstream r;
    write_rates_rows_csv(summary, r);
    out.write("rates.csv", r.str());
    if (run.experiment.keep_samples) {
      std::ostringstream samples;
      write_samples_csv(summary, samples);
      out.write("samples.csv", samples.str());
    }
  } else {
    out.write("summary.json", summary_json(summary).dump(2) + "\n");
  }
}

std::vector<RatePrediction> predictions_for(const ExperimentConfig& exp) {
  std::vector<RatePrediction> out;
  RateParams params;
  if (const auto* d = std::get_if<DiscreteScheme>(&exp.scheme)) {
    params.n = d->n;
    out.push_back(predict_rates(RateKind::DiscreteVarYN, exp.model, exp.n_grid, params));
    out.push_back(predict_rates(RateKind::DiscreteAlphaVar, exp.model, exp.n_grid, params));
  } else {
    params.horizon = std::get<ContinuousScheme>(exp.scheme).horizon;
    out.push_back(predict_rates(RateKind::ContinuousVarRate, exp.model, exp.n_grid, params));
    out.push_back(predict_rates(RateKind::ZetaBound, exp.model, exp.n_grid, params));
  }
  for (auto& r : reference_rates(exp.model, exp.n_grid, ReferenceEstimator::Mle)) {
    out.push_back(std::move(r));
  }
  if (exp.model.dimension_hint()) {
    out.push_back(predict_rates(RateKind::HeatExampleRate, exp.model, exp.n_grid, params));
    for (auto& r : reference_rates(exp.model, exp.n_grid, ReferenceEstimator::Tfe)) {
      out.push_back(std::move(r));
    }
  }
  return out;
}

void cmd_rates(const RunConfig& run, const CliInvocation& inv, OutputSet& out) {
  const auto predictions = predictions_for(run.experiment);
  if (inv.format == OutputFormat::Csv) {
    std::ostringstream s;
    write_rates_csv(predictions, s);
    out.write("predictions.csv", s.str());
  } else {
    json list = json::array();
    for (const auto& p : predictions) {
      list.push_back({{"kind", to_string(p.kind)},
                      {"N", p.n_values},
                      {"values", p.values},
                      {"order_only", p.order_only},
                      {"meta", p.meta}});
    }
    out.write("predictions.json", list.dump(2) + "\n");
  }
}

std::optional<double> slope_of(const std::vector<std::size_t>& ns, const std::vector<double>& v) {
  if (ns.size() < 3) return std::nullopt;
  std::vector<double> x(ns.begin(), ns.end());
  return rate_regression(x, v).slope;
}

void cmd_compare(const RunConfig& run, const CliInvocation& inv, OutputSet& out) {
  ExperimentConfig exp = run.experiment;
  const bool discrete = is_discrete(exp.scheme);
  const EstimatorKind weighted =
      discrete ? EstimatorKind::WeightedDiscrete : EstimatorKind::WeightedContinuous;
  exp.estimators = {weighted, EstimatorKind::Unweighted};
  exp.keep_samples = false;
  const ExperimentSummary summary = run_experiment(exp, inv.threads);
  const auto predictions = predictions_for(exp);
  auto find = [&](RateKind kind) -> const RatePrediction* {
    for (const auto& p : predictions) {
      if (p.kind == kind) return &p;
    }
    return nullptr;
  };
  const RatePrediction* predicted = find(discrete ? RateKind::DiscreteVarYN : RateKind::ContinuousVarRate);
  const RatePrediction* mle = find(RateKind::MleRate);
  const RatePrediction* heat = find(RateKind::HeatExampleRate);
  const RatePrediction* tfe = find(RateKind::TfeRate);
  const RatePrediction* tfe_bias = find(RateKind::TfeBias);

  std::vector<double> wvar, uvar, sd_w;
  json table = json::array();
  std::ostringstream csv;
  csv << "N,sum_theta,weighted_var_y,unweighted_var_y,weighted_rmse,unweighted_rmse,"
         "weighted_sd_y,predicted_var_y,predicted_order_only,heat_example_rate,mle_rate,"
         "tfe_rate,tfe_bias\r\n";
  for (std::size_t j = 0; j < exp.n_grid.size(); ++j) {
    const std::size_t N = exp.n_grid[j];
    const SummaryRow& w = summary.row(weighted, N);
    const SummaryRow& u = summary.row(EstimatorKind::Unweighted, N);
    wvar.push_back(w.var_y);
    uvar.push_back(u.var_y);
    sd_w.push_back(std::sqrt(w.var_y));
    auto value = [j](const RatePrediction* p) -> std::optional<double> {
      return p ? std::optional<double>(p->values[j]) : std::nullopt;
    };
    csv << N << ',' << format_double(w.sum_theta) << ',' << format_double(w.var_y) << ','
        << format_double(u.var_y) << ',' << format_double(w.rmse) << ','
        << format_double(u.rmse) << ',' << format_double(std::sqrt(w.var_y)) << ','
        << csv_cell(value(predicted)) << ',' << (predicted->order_only ? "true" : "false") << ','
        << csv_cell(value(heat)) << ',' << csv_cell(value(mle)) << ',' << csv_cell(value(tfe))
        << ',' << csv_cell(value(tfe_bias)) << "\r\n";
  }

  std::ostringstream slopes;
  slopes << "quantity,estimator,empirical_slope,theoretical_slope\r\n";
  auto slope_row = [&](const std::string& quantity, EstimatorKind kind,
                       const std::vector<double>& empirical, std::optional<double> theory) {
    const auto e = slope_of(exp.n_grid, empirical);
    slopes << quantity << ',' << wmce::to_string(kind) << ',' << csv_cell(e) << ','
           << csv_cell(theory) << "\r\n";
  };
  const auto var_slope = slope_of(exp.n_grid, predicted->values);
  slope_row("var_y_vs_N", weighted, wvar, var_slope);
  slope_row("var_y_vs_N", EstimatorKind::Unweighted, uvar, 0.0);
  slope_row("sd_y_vs_N", weighted, sd_w,
            var_slope ? std::optional<double>(0.5 * *var_slope) : std::nullopt);
  // the heat example rate describes the continuous observation scheme only
  if (heat && !discrete) {
    slope_row("sd_y_vs_N_heat_rate", weighted, sd_w, slope_of(exp.n_grid, heat->values));
  }

  if (inv.format == OutputFormat::Csv) {
    out.write("compare.csv", csv.str());
    out.write("compare_slopes.csv", slopes.str());
  } else {
    json doc = summary_json(summary);
    json preds = json::array();
    for (const auto& p : predictions) {
      preds.push_back({{"kind", to_string(p.kind)}, {"N", p.n_values}, {"values", p.values},
                       {"order_only", p.order_only}});
    }
    doc["predictions"] = preds;
    out.write("compare.json", doc.dump(2) + "\n");
  }
}

}  // namespace

int run_cli(const CliInvocation& inv, std::ostream& log) {
  std::optional<OutputSet> out;
  try {
    if (inv.config_path.empty()) throw ValidationError("--config is required");
    const RunConfig run = parse_config(read_text(inv.config_path), inv.overrides);
    out.emplace(inv.out_dir);
    const unsigned threads = resolve_threads(inv.threads);
    log << "wmce " << to_string(inv.subcommand) << ": seed " << run.experiment.master_seed
        << ", " << describe(run.experiment.scheme) << ", N_grid max "
        << run.experiment.n_grid.back() << ", threads " << threads << "\n";
    switch (inv.subcommand) {
      case Subcommand::Simulate:
        cmd_simulate(run, inv, *out);
        break;
      case Subcommand::Estimate:
        cmd_estimate(run, inv, *out);
        break;
      case Subcommand::Experiment:
        cmd_experiment(run, inv, *out);
        break;
      case Subcommand::Rates:
        cmd_rates(run, inv, *out);
        break;
      case Subcommand::Compare:
        cmd_compare(run, inv, *out);
        break;
    }
    out->write_manifest({{"tool", "wmce"},
                         {"subcommand", to_string(inv.subcommand)},
                         {"master_seed", run.experiment.master_seed},
                         {"threads", threads},
                         {"format", inv.format == OutputFormat::Csv ? "csv" : "json"},
                         {"overrides", inv.overrides},
                         {"config", serialize_config(run)}});
    return kExitOk;
  } catch (const ValidationError& e) {
    if (out) out->remove_all();
    log << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    if (out) out->remove_all();
    log << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    if (out) out->remove_all();
    log << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Weighted minimum-contrast estimation for fractional SPDE coordinates"};
  app.require_subcommand(1, 1);
  CliInvocation inv;
  std::string format = "csv";
  const std::vector<std::pair<std::string, Subcommand>> commands = {
      {"simulate", Subcommand::Simulate},
      {"estimate", Subcommand::Estimate},
      {"experiment", Subcommand::Experiment},
      {"rates", Subcommand::Rates},
      {"compare", Subcommand::Compare}};
  const std::map<std::string, std::string> descriptions = {
      {"simulate", "sample one replication of coordinate paths"},
      {"estimate", "apply the estimators to a paths file or a fresh sample"},
      {"experiment", "Monte Carlo summary, raw samples and rate slopes"},
      {"rates", "theoretical rate curves"},
      {"compare", "weighted vs unweighted vs reference rates"}};
  for (const auto& [name, kind] : commands) {
    CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", inv.config_path, "JSON config file")->required();
    sub->add_option("--out", inv.out_dir, "output directory")->capture_default_str();
    sub->add_option("--set", inv.overrides, "override key=value (dotted keys, repeatable)");
    sub->add_option("--threads", inv.threads, "worker threads, 0 = auto")->capture_default_str();
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    if (kind == Subcommand::Estimate) {
      sub->add_option("--paths", inv.paths_file, "paths file (.csv or binary)");
    }
    sub->callback([&inv, kind = kind] { inv.subcommand = kind; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  inv.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
  return run_cli(inv, std::cerr);
}

}  // namespace wmce
