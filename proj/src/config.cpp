#include "wmce/config.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "wmce/errors.hpp"
#include "wmce/manifest.hpp"

namespace wmce {

using nlohmann::json;

namespace {

// Read-only cursor into the document that remembers its JSON pointer.
class Node {
 public:
  Node(const json& value, std::string pointer) : value_(value), pointer_(std::move(pointer)) {}

  const json& value() const { return value_; }
  const std::string& pointer() const { return pointer_; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ValidationError((pointer_.empty() ? std::string("/") : pointer_) + ": " + message);
  }

  void require_object(std::initializer_list<const char*> allowed) const {
    if (!value_.is_object()) fail("expected an object");
    for (const auto& [key, unused] : value_.items()) {
      (void)unused;
      if (std::none_of(allowed.begin(), allowed.end(),
                       [&](const char* a) { return key == a; })) {
        Node(value_[key], pointer_ + "/" + key).fail("unknown key");
      }
    }
  }

  bool has(const char* key) const { return value_.contains(key); }

  Node at(const char* key) const {
    if (!value_.contains(key)) fail(std::string("missing required key '") + key + "'");
    return Node(value_.at(key), pointer_ + "/" + key);
  }

  Node at(std::size_t index) const {
    return Node(value_.at(index), pointer_ + "/" + std::to_string(index));
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  std::uint64_t unsigned_integer() const {
    if (value_.is_number_unsigned()) return value_.get<std::uint64_t>();
    if (value_.is_number_integer() && value_.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(value_.get<std::int64_t>());
    }
    if (value_.is_number_float()) {
      const double v = value_.get<double>();
      if (v >= 0 && std::floor(v) == v && v < 9007199254740992.0) {
        return static_cast<std::uint64_t>(v);
      }
    }
    fail("expected a nonnegative integer");
  }

  bool boolean() const {
    if (!value_.is_boolean()) fail("expected true or false");
    return value_.get<bool>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  std::vector<double> numbers() const {
    if (!value_.is_array()) fail("expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < value_.size(); ++i) out.push_back(at(i).number());
    return out;
  }

 private:
  const json& value_;
  std::string pointer_;
};

SpectralModel parse_model(const Node& node) {
  node.require_object({"alpha", "hurst", "thetas", "heat", "sigmas", "nus", "dimension_hint"});
  const double alpha = node.at("alpha").number();
  const double hurst = node.at("hurst").number();
  std::vector<double> thetas;
  std::optional<int> dimension;
  if (node.has("thetas") && node.has("heat")) node.fail("give either 'thetas' or 'heat', not both");
  if (node.has("heat")) {
    const Node heat = node.at("heat");
    heat.require_object({"d", "count"});
    const auto d = heat.at("d").unsigned_integer();
    const auto count = heat.at("count").unsigned_integer();
    if (d == 0 || d > 1000) heat.at("d").fail("d must be a positive integer");
    if (count == 0) heat.at("count").fail("count must be >= 1");
    thetas = heat_eigenvalues(static_cast<int>(d), count);
    dimension = static_cast<int>(d);
  } else {
    thetas = node.at("thetas").numbers();
  }
  if (node.has("dimension_hint")) {
    const auto d = node.at("dimension_hint").unsigned_integer();
    if (d == 0 || d > 1000) node.at("dimension_hint").fail("dimension_hint must be a positive integer");
    if (dimension && *dimension != static_cast<int>(d)) {
      node.at("dimension_hint").fail("dimension_hint disagrees with heat.d");
    }
    dimension = static_cast<int>(d);
  }
  std::vector<double> sigmas;
  const Node sigma_node = node.at("sigmas");
  if (sigma_node.value().is_string()) {
    if (sigma_node.string() != "unit") sigma_node.fail("expected an array or \"unit\"");
    sigmas.assign(thetas.size(), 1.0);
  } else {
    sigmas = sigma_node.numbers();
  }
  std::optional<std::vector<double>> nus;
  if (node.has("nus")) nus = node.at("nus").numbers();
  try {
    return SpectralModel(alpha, hurst, std::move(thetas), std::move(sigmas), std::move(nus),
                         dimension);
  } catch (const ValidationError& e) {
    node.fail(e.what());
  }
}

InitialCondition parse_init(const Node& node, std::size_t model_size) {
  if (!node.value().is_object()) node.fail("expected an object");
  const std::string kind = node.at("kind").string();
  if (kind == "stationary") {
    node.require_object({"kind"});
    return StationaryInit{};
  }
  if (kind == "deterministic") {
    node.require_object({"kind", "values", "value"});
    if (node.has("values") == node.has("value")) node.fail("give exactly one of 'values' or 'value'");
    if (node.has("value")) {
      return DeterministicInit{std::vector<double>(model_size, node.at("value").number())};
    }
    return DeterministicInit{node.at("values").numbers()};
  }
  if (kind == "gaussian_iid") {
    node.require_object({"kind", "mean", "std"});
    GaussianIidInit g;
    if (node.has("mean")) g.mean = node.at("mean").number();
    if (node.has("std")) g.std = node.at("std").number();
    return g;
  }
  node.at("kind").fail("expected stationary, deterministic or gaussian_iid");
}

SamplingScheme parse_scheme(const Node& node, bool stationary) {
  if (!node.value().is_object()) node.fail("expected an object");
  const std::string kind = node.at("kind").string();
  if (kind == "discrete") {
    node.require_object({"kind", "n"});
    return DiscreteScheme{node.at("n").unsigned_integer()};
  }
  if (kind == "continuous") {
    node.require_object({"kind", "T", "h", "delta", "resolve_step"});
    ContinuousScheme c;
    c.horizon = node.at("T").number();
    c.step = node.at("h").number();
    // Non-stationary runs idle for a tenth of the window unless told otherwise.
    c.burn_in = node.has("delta") ? node.at("delta").number() : (stationary ? 0.0 : 0.1 * c.horizon);
    if (node.has("resolve_step")) c.resolve_step = node.at("resolve_step").number();
    return c;
  }
  node.at("kind").fail("expected discrete or continuous");
}

json scheme_json(const SamplingScheme& scheme) {
  if (const auto* d = std::get_if<DiscreteScheme>(&scheme)) {
    return {{"kind", "discrete"}, {"n", d->n}};
  }
  const auto& c = std::get<ContinuousScheme>(scheme);
  return {{"kind", "continuous"},
          {"T", c.horizon},
          {"h", c.step},
          {"delta", c.burn_in},
          {"resolve_step", c.resolve_step}};
}

// Splits "a.b.c" and walks/creates objects down to the parent of the leaf.
void set_dotted(json& doc, const std::string& key, json value) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(key);
  while (std::getline(in, part, '.')) {
    if (part.empty()) throw ValidationError("override key '" + key + "' has an empty segment");
    parts.push_back(part);
  }
  if (parts.empty()) throw ValidationError("override key must not be empty");
  json* cursor = &doc;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!cursor->is_object()) {
      throw ValidationError("override '" + key + "': '" + parts[i - 1] + "' is not an object");
    }
    cursor = &(*cursor)[parts[i]];
    if (cursor->is_null()) *cursor = json::object();
  }
  if (!cursor->is_object()) throw ValidationError("override '" + key + "' does not address an object member");
  (*cursor)[parts.back()] = std::move(value);
}

}  // namespace

void apply_overrides(json& doc, const std::vector<std::string>& overrides) {
  if (!doc.is_object()) throw ValidationError("/: config must be a JSON object");
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("override '" + item + "' must have the form key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;
    set_dotted(doc, key, std::move(value));
  }
}

RunConfig parse_config(const json& doc) {
  const Node root(doc, "");
  root.require_object({"model", "init", "scheme", "N_grid", "replications", "master_seed",
                       "estimators", "sampler", "eq34_printed_constant", "bracket",
                       "keep_samples", "replication", "paths_file"});
  SpectralModel model = parse_model(root.at("model"));
  InitialCondition init = StationaryInit{};
  if (root.has("init")) init = parse_init(root.at("init"), model.size());
  try {
    validate_initial_condition(init, model);
  } catch (const ValidationError& e) {
    root.at("init").fail(e.what());
  }
  const SamplingScheme scheme = parse_scheme(root.at("scheme"), is_stationary(init));
  try {
    validate_scheme(scheme);
  } catch (const ValidationError& e) {
    root.at("scheme").fail(e.what());
  }

  ExperimentConfig exp{model, init, scheme, {}, 2, 0, {}, SamplerMethod::Auto, {}, {}, true};
  const Node grid = root.at("N_grid");
  if (!grid.value().is_array()) grid.fail("expected an array of integers");
  for (std::size_t i = 0; i < grid.value().size(); ++i) {
    exp.n_grid.push_back(grid.at(i).unsigned_integer());
  }
  exp.replications = root.at("replications").unsigned_integer();
  exp.master_seed = root.at("master_seed").unsigned_integer();
  if (root.has("estimators")) {
    const Node list = root.at("estimators");
    if (!list.value().is_array()) list.fail("expected an array of estimator names");
    for (std::size_t i = 0; i < list.value().size(); ++i) {
      try {
        exp.estimators.push_back(estimator_kind_from_string(list.at(i).string()));
      } catch (const ValidationError& e) {
        list.at(i).fail(e.what());
      }
    }
  } else {
    exp.estimators = default_estimators(scheme);
  }
  if (root.has("sampler")) {
    try {
      exp.sampler = sampler_method_from_string(root.at("sampler").string());
    } catch (const ValidationError& e) {
      root.at("sampler").fail(e.what());
    }
  }
  if (root.has("eq34_printed_constant")) {
    exp.weight_options.eq34_printed_constant = root.at("eq34_printed_constant").boolean();
  }
  if (root.has("bracket")) {
    const Node b = root.at("bracket");
    b.require_object({"lo", "hi"});
    if (b.has("lo")) exp.bracket.lo = b.at("lo").number();
    if (b.has("hi")) exp.bracket.hi = b.at("hi").number();
  }
  if (root.has("keep_samples")) exp.keep_samples = root.at("keep_samples").boolean();

  validate_experiment(exp);

  RunConfig run{std::move(exp), 0, {}};
  if (root.has("replication")) run.replication = root.at("replication").unsigned_integer();
  if (root.has("paths_file")) run.paths_file = root.at("paths_file").string();
  return run;
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("/: config is not valid JSON");
  apply_overrides(doc, overrides);
  return parse_config(doc);
}

json serialize_config(const RunConfig& config) {
  const auto& exp = config.experiment;
  const auto& m = exp.model;
  json model = {{"alpha", m.alpha()},
                {"hurst", m.hurst()},
                {"thetas", std::vector<double>(m.thetas().begin(), m.thetas().end())},
                {"sigmas", std::vector<double>(m.sigmas().begin(), m.sigmas().end())}};
  if (m.nus()) model["nus"] = *m.nus();
  if (m.dimension_hint()) model["dimension_hint"] = *m.dimension_hint();

  json init;
  if (const auto* d = std::get_if<DeterministicInit>(&exp.init)) {
    init = {{"kind", "deterministic"}, {"values", d->values}};
  } else if (const auto* g = std::get_if<GaussianIidInit>(&exp.init)) {
    init = {{"kind", "gaussian_iid"}, {"mean", g->mean}, {"std", g->std}};
  } else {
    init = {{"kind", "stationary"}};
  }
  json estimators = json::array();
  for (auto e : exp.estimators) estimators.push_back(to_string(e));

  json doc = {{"model", model},
              {"init", init},
              {"scheme", scheme_json(exp.scheme)},
              {"N_grid", exp.n_grid},
              {"replications", exp.replications},
              {"master_seed", exp.master_seed},
              {"estimators", estimators},
              {"sampler", to_string(exp.sampler)},
              {"eq34_printed_constant", exp.weight_options.eq34_printed_constant},
              {"bracket", {{"lo", exp.bracket.lo}, {"hi", exp.bracket.hi}}},
              {"keep_samples", exp.keep_samples},
              {"replication", config.replication}};
  if (!config.paths_file.empty()) doc["paths_file"] = config.paths_file;
  return doc;
}

json to_json(const SamplingScheme& scheme) { return scheme_json(scheme); }

json to_json(const EstimateResult& result, const SpectralModel& model) {
  std::string bytes(reinterpret_cast<const char*>(result.weights.weights.data()),
                    result.weights.weights.size() * sizeof(double));
  return {{"estimator", to_string(result.kind)},
          {"alpha_star", result.alpha_star},
          {"y_stat", result.y_stat},
          {"N", result.n_coords},
          {"hurst", model.hurst()},
          {"scheme", scheme_json(result.scheme)},
          {"regime", to_string(result.weights.regime)},
          {"weights_normalizer", result.weights.normalizer},
          {"weights_digest", sha256_hex(bytes).substr(0, 16)}};
}

}  // namespace wmce
