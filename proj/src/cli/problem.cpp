#include "problem.hpp"

#include <cmath>
#include <set>

namespace dflat::cli::detail {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw InputError(path + ": " + message);
}

const Json& field(const Json& node, const char* key, const std::string& path) {
  const auto it = node.find(key);
  if (it == node.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

void only_keys(const Json& node, std::initializer_list<const char*> allowed,
               const std::string& path) {
  for (const auto& item : node.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) fail(path, "unexpected field '" + item.key() + "'");
  }
}

double number(const Json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  const double value = node.get<double>();
  if (!std::isfinite(value)) fail(path, "expected a finite number");
  return value;
}

int count(const Json& node, const std::string& path) {
  if (!node.is_number_integer()) fail(path, "expected an integer");
  return node.get<int>();
}

std::vector<double> numbers(const Json& node, const std::string& path) {
  if (!node.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> values;
  for (std::size_t i = 0; i < node.size(); ++i) {
    values.push_back(number(node[i], path + "[" + std::to_string(i) + "]"));
  }
  return values;
}

Vector to_vector(const std::vector<double>& values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

std::optional<double> optional_number(const Json& node, const char* key, const std::string& path) {
  const auto it = node.find(key);
  if (it == node.end()) return std::nullopt;
  return number(*it, path + "." + key);
}

const std::set<std::string>& known_ops() {
  static const std::set<std::string> ops{
      "canonical",      "affine",           "dual_inner_product",         "psi_divergence",
      "phi_divergence", "renyi",            "skew_combination",           "affine_via_metric_integral",
      "canonical_via_weighted_integral"};
  return ops;
}

std::size_t arity(const std::string& op) { return op == "dual_inner_product" ? 3 : 2; }

}  // namespace

Chart parse_chart(const std::string& text, const std::string& path) {
  if (text == "theta") return Chart::theta;
  if (text == "eta") return Chart::eta;
  fail(path, "chart must be \"theta\" or \"eta\", got \"" + text + "\"");
}

FamilyConfig family_from_json(const Json& node, const std::string& path) {
  if (node.is_string()) {
    try {
      return parse_family_spec(node.get<std::string>());
    } catch (const ConfigError& e) {
      fail(path, e.what());
    }
  }
  if (!node.is_object()) fail(path, "expected an object or a \"kind:config\" string");
  const Json& kind_node = field(node, "kind", path);
  if (!kind_node.is_string()) fail(path + ".kind", "expected a string");
  const std::string kind = kind_node.get<std::string>();
  if (kind == "gaussian1d") {
    only_keys(node, {"kind"}, path);
    return Gaussian1dConfig{};
  }
  if (kind == "binomial") {
    only_keys(node, {"kind", "trials"}, path);
    return BinomialConfig{count(field(node, "trials", path), path + ".trials")};
  }
  if (kind == "categorical") {
    only_keys(node, {"kind", "outcomes"}, path);
    return CategoricalConfig{count(field(node, "outcomes", path), path + ".outcomes")};
  }
  if (kind == "selfdual") {
    only_keys(node, {"kind", "dimension"}, path);
    return SelfDualConfig{count(field(node, "dimension", path), path + ".dimension")};
  }
  if (kind == "mixture") {
    only_keys(node, {"kind", "components"}, path);
    const Json& rows = field(node, "components", path);
    if (!rows.is_array()) fail(path + ".components", "expected an array of rows");
    MixtureConfig config;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      config.components.push_back(numbers(rows[i], path + ".components[" + std::to_string(i) + "]"));
    }
    return config;
  }
  fail(path + ".kind", "unknown family kind \"" + kind + "\"");
}

Json family_to_json(const FamilyConfig& config) {
  Json node = Json::object();
  if (std::holds_alternative<Gaussian1dConfig>(config)) {
    node["kind"] = "gaussian1d";
  } else if (const auto* b = std::get_if<BinomialConfig>(&config)) {
    node["kind"] = "binomial";
    node["trials"] = b->trials;
  } else if (const auto* c = std::get_if<CategoricalConfig>(&config)) {
    node["kind"] = "categorical";
    node["outcomes"] = c->outcomes;
  } else if (const auto* m = std::get_if<MixtureConfig>(&config)) {
    node["kind"] = "mixture";
    node["components"] = m->components;
  } else if (const auto* s = std::get_if<SelfDualConfig>(&config)) {
    node["kind"] = "selfdual";
    node["dimension"] = s->dimension;
  }
  return node;
}

CoordinatePair point_from_json(const FamilyDescriptor& family, const Json& node,
                               const std::string& path) {
  if (!node.is_object() || node.size() != 1) {
    fail(path, "expected exactly one of {\"theta\": [...]}, {\"eta\": [...]}, {\"params\": {...}}");
  }
  const auto entry = node.begin();
  const std::string key = entry.key();
  const Json& value = entry.value();
  const std::string sub = path + "." + key;
  if (key == "theta" || key == "eta") {
    const std::vector<double> coords = numbers(value, sub);
    if (static_cast<int>(coords.size()) != family.dimension()) {
      fail(sub, "expected " + std::to_string(family.dimension()) + " coordinates, got " +
                    std::to_string(coords.size()));
    }
    return key == "theta" ? point_from_theta(family, ThetaCoord{to_vector(coords)})
                          : point_from_eta(family, EtaCoord{to_vector(coords)});
  }
  if (key != "params") fail(path, "unknown point form \"" + key + "\"");
  if (!value.is_object()) fail(sub, "expected an object");
  switch (family.kind()) {
    case FamilyKind::gaussian1d:
      only_keys(value, {"mu", "sigma"}, sub);
      return point_from_params(family, GaussianParams{number(field(value, "mu", sub), sub + ".mu"),
                                                      number(field(value, "sigma", sub), sub + ".sigma")});
    case FamilyKind::binomial:
      only_keys(value, {"p"}, sub);
      return point_from_params(family, BinomialParams{number(field(value, "p", sub), sub + ".p")});
    case FamilyKind::categorical:
      only_keys(value, {"probabilities"}, sub);
      return point_from_params(
          family, CategoricalParams{numbers(field(value, "probabilities", sub), sub + ".probabilities")});
    case FamilyKind::mixture: {
      only_keys(value, {"weights"}, sub);
      MixtureParams params{numbers(field(value, "weights", sub), sub + ".weights")};
      if (static_cast<int>(params.weights.size()) != family.dimension()) {
        fail(sub + ".weights", "expected " + std::to_string(family.dimension()) + " weights");
      }
      return point_from_params(family, params);
    }
    case FamilyKind::selfdual: {
      only_keys(value, {"values"}, sub);
      SelfDualParams params{numbers(field(value, "values", sub), sub + ".values")};
      if (static_cast<int>(params.values.size()) != family.dimension()) {
        fail(sub + ".values", "expected " + std::to_string(family.dimension()) + " values");
      }
      return point_from_params(family, params);
    }
  }
  fail(path, "unsupported family");
}

Json vector_to_json(const Vector& v) {
  Json array = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) array.push_back(v[i]);
  return array;
}

Json point_to_json(const CoordinatePair& point) {
  Json node = Json::object();
  node["theta"] = vector_to_json(point.theta());
  node["eta"] = vector_to_json(point.eta());
  node["psi"] = point.psi();
  node["phi"] = point.phi();
  return node;
}

Problem parse_problem(const Json& document) {
  if (!document.is_object()) fail("$", "expected a JSON object");
  only_keys(document, {"family", "points", "tasks"}, "$");
  Problem problem;
  problem.family_node = field(document, "family", "$");
  problem.config = family_from_json(problem.family_node, "$.family");

  const Json& points = field(document, "points", "$");
  if (!points.is_object()) fail("$.points", "expected an object mapping names to points");
  std::set<std::string> names;
  for (const auto& item : points.items()) {
    names.insert(item.key());
    problem.points.emplace_back(item.key(), item.value());
  }

  const Json& tasks = field(document, "tasks", "$");
  if (!tasks.is_array()) fail("$.tasks", "expected an array");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string path = "$.tasks[" + std::to_string(i) + "]";
    const Json& node = tasks[i];
    if (!node.is_object()) fail(path, "expected an object");
    only_keys(node, {"op", "args", "alpha", "a", "b", "chart"}, path);
    Task task;
    const Json& op = field(node, "op", path);
    if (!op.is_string()) fail(path + ".op", "expected a string");
    task.op = op.get<std::string>();
    if (known_ops().count(task.op) == 0) fail(path + ".op", "unknown operation \"" + task.op + "\"");
    const Json& args = field(node, "args", path);
    if (!args.is_array()) fail(path + ".args", "expected an array of point names");
    for (std::size_t k = 0; k < args.size(); ++k) {
      const std::string arg_path = path + ".args[" + std::to_string(k) + "]";
      if (!args[k].is_string()) fail(arg_path, "expected a point name");
      const std::string name = args[k].get<std::string>();
      if (names.count(name) == 0) fail(arg_path, "undefined point \"" + name + "\"");
      task.args.push_back(name);
    }
    if (task.args.size() != arity(task.op)) {
      fail(path + ".args", task.op + " takes " + std::to_string(arity(task.op)) + " points");
    }
    task.alpha = optional_number(node, "alpha", path);
    task.a = optional_number(node, "a", path);
    task.b = optional_number(node, "b", path);
    if (const auto it = node.find("chart"); it != node.end()) {
      if (!it->is_string()) fail(path + ".chart", "expected a string");
      task.chart = parse_chart(it->get<std::string>(), path + ".chart");
    }
    const bool skew = task.op == "psi_divergence" || task.op == "phi_divergence" || task.op == "renyi";
    if (skew && !task.alpha) fail(path, task.op + " requires \"alpha\"");
    if (!skew && task.alpha) fail(path + ".alpha", task.op + " takes no alpha");
    const bool weighted = task.op == "skew_combination";
    if (weighted && (!task.a || !task.b)) fail(path, "skew_combination requires \"a\" and \"b\"");
    if (!weighted && (task.a || task.b)) fail(path, task.op + " takes no weights");
    const bool charted = weighted || task.op == "affine_via_metric_integral" ||
                         task.op == "canonical_via_weighted_integral";
    if (!charted && task.chart) fail(path + ".chart", task.op + " takes no chart");
    problem.tasks.push_back(std::move(task));
  }
  return problem;
}

}  // namespace dflat::cli::detail
