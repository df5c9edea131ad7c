#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "dflat/divergences.hpp"
#include "dflat/geodesics.hpp"
#include "problem.hpp"

namespace dflat::cli {

namespace {

using detail::Json;

struct Record {
  std::string op;
  std::vector<std::string> args;
  std::vector<std::pair<std::string, std::string>> parameters;  // name, rendered value
  Json parameter_json = Json::object();
  double value = 0.0;
  std::string status = "ok";
  std::string message;
};

struct PointState {
  std::optional<CoordinatePair> point;
  std::string status = "ok";
  std::string message;
};

double evaluate(const FamilyDescriptor& family, const detail::Task& task,
                const std::vector<const CoordinatePair*>& pts) {
  const CoordinatePair& p = *pts[0];
  const CoordinatePair& q = *pts[1];
  const Chart chart = task.chart.value_or(Chart::theta);
  if (task.op == "canonical") return canonical(family, p, q).value;
  if (task.op == "affine") return affine(family, p, q).value;
  if (task.op == "dual_inner_product") return dual_inner_product(family, p, q, *pts[2]);
  if (task.op == "psi_divergence") return psi_divergence(family, p, q, *task.alpha).value;
  if (task.op == "phi_divergence") return phi_divergence(family, p, q, *task.alpha).value;
  if (task.op == "renyi") return renyi(family, p, q, *task.alpha).value;
  if (task.op == "skew_combination") {
    return skew_combination(family, p, q, *task.a, *task.b, chart).divergence_sum;
  }
  if (task.op == "affine_via_metric_integral") {
    return affine_via_metric_integral(family, segment(family, p, q, chart));
  }
  return canonical_via_weighted_integral(family, segment(family, p, q, chart));
}

Record run_task(const FamilyDescriptor& family, const detail::Task& task,
                const std::map<std::string, PointState>& points) {
  Record record;
  record.op = task.op;
  record.args = task.args;
  auto add = [&](const std::string& name, const Json& value, const std::string& text) {
    record.parameter_json[name] = value;
    record.parameters.emplace_back(name, text);
  };
  if (task.alpha) add("alpha", *task.alpha, format_number(*task.alpha));
  if (task.a) add("a", *task.a, format_number(*task.a));
  if (task.b) add("b", *task.b, format_number(*task.b));
  if (task.chart) add("chart", to_string(*task.chart), to_string(*task.chart));

  std::vector<const CoordinatePair*> pts;
  for (const std::string& name : task.args) {
    const PointState& state = points.at(name);
    if (!state.point) {
      record.status = state.status;
      record.message = "point " + name + ": " + state.message;
      return record;
    }
    pts.push_back(&*state.point);
  }
  try {
    record.value = evaluate(family, task, pts);
  } catch (const UnsupportedError& e) {
    record.status = "unsupported";
    record.message = e.what();
  } catch (const Error& e) {
    record.status = "domain_error";
    record.message = e.what();
  }
  return record;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

template <class Range, class Fn>
std::string join(const Range& items, char separator, Fn&& render) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += separator;
    out += render(item);
  }
  return out;
}

}  // namespace

int run_compute(const std::string& problem_path, OutputFormat format, std::ostream& out,
                std::ostream& err) {
  detail::Problem problem;
  FamilyDescriptor family = make_family(SelfDualConfig{1});
  try {
    std::ifstream in(problem_path, std::ios::binary);
    if (!in) {
      err << "error: cannot read problem file " << problem_path << "\n";
      return kExitBadInput;
    }
    const Json document = Json::parse(in);
    problem = detail::parse_problem(document);
    family = make_family(problem.config);
  } catch (const Json::exception& e) {
    err << "error: " << problem_path << ": " << e.what() << "\n";
    return kExitBadInput;
  } catch (const detail::InputError& e) {
    err << "error: " << problem_path << ": " << e.what() << "\n";
    return kExitBadInput;
  } catch (const ConfigError& e) {
    err << "error: " << problem_path << ": $.family: " << e.what() << "\n";
    return kExitBadInput;
  }

  std::map<std::string, PointState> points;
  Json points_json = Json::object();
  for (const auto& [name, node] : problem.points) {
    PointState state;
    try {
      state.point = detail::point_from_json(family, node, "$.points." + name);
      points_json[name] = detail::point_to_json(*state.point);
    } catch (const detail::InputError& e) {
      err << "error: " << problem_path << ": " << e.what() << "\n";
      return kExitBadInput;
    } catch (const UnsupportedError& e) {
      state.status = "unsupported";
      state.message = e.what();
    } catch (const Error& e) {
      state.status = "domain_error";
      state.message = e.what();
    }
    if (!state.point) {
      points_json[name] = Json{{"status", state.status}, {"message", state.message}};
    }
    points.emplace(name, std::move(state));
  }

  std::vector<Record> records;
  bool all_ok = true;
  for (const detail::Task& task : problem.tasks) {
    records.push_back(run_task(family, task, points));
    all_ok = all_ok && records.back().status == "ok";
  }

  if (format == OutputFormat::csv) {
    out << "op,args,parameters,value,status\n";
    for (const Record& r : records) {
      const std::string params = join(r.parameters, ';', [](const auto& kv) {
        return kv.first + "=" + kv.second;
      });
      out << csv_field(r.op) << ',' << csv_field(join(r.args, ';', [](const auto& s) { return s; }))
          << ',' << csv_field(params) << ',' << (r.status == "ok" ? format_number(r.value) : "")
          << ',' << r.status << '\n';
    }
  } else {
    Json results = Json::array();
    for (const Record& r : records) {
      Json node = Json::object();
      node["op"] = r.op;
      node["args"] = r.args;
      node["parameters"] = r.parameter_json;
      if (r.status == "ok") node["value"] = r.value;
      node["status"] = r.status;
      if (r.status != "ok") node["message"] = r.message;
      results.push_back(std::move(node));
    }
    Json document = Json::object();
    document["family"] = detail::family_to_json(problem.config);
    document["points"] = std::move(points_json);
    document["results"] = std::move(results);
    out << document.dump(2) << "\n";
  }
  return all_ok ? kExitOk : kExitDomain;
}

}  // namespace dflat::cli
