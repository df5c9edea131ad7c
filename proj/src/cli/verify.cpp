#include <cstdio>
#include <ostream>

#include "problem.hpp"

namespace dflat::cli {

namespace {

using detail::Json;

std::string scientific(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3e", value);
  return buffer;
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

const char* measure(const ResidualReport& r) {
  if (r.kind == ReportKind::slack) return "min_slack";
  return r.relative ? "max_rel" : "max_abs";
}

Json report_to_json(const ResidualReport& r) {
  Json node = Json::object();
  node["identity"] = r.identity;
  node["kind"] = r.kind == ReportKind::slack ? "slack" : "residual";
  node["samples"] = r.samples;
  if (r.kind == ReportKind::slack) {
    node["min_slack"] = r.min_slack;
  } else {
    node["max_abs_residual"] = r.max_abs_residual;
    node["max_rel_residual"] = r.max_rel_residual;
    node["relative"] = r.relative;
  }
  node["tolerance"] = r.tolerance;
  node["passed"] = r.passed;
  Json worst = Json::object();
  worst["seed"] = r.worst_case.seed;
  worst["sample_index"] = r.worst_case.sample_index;
  Json points = Json::array();
  for (const auto& p : r.worst_case.points) {
    points.push_back(Json{{"name", p.name},
                          {"theta", detail::vector_to_json(p.theta)},
                          {"eta", detail::vector_to_json(p.eta)}});
  }
  worst["points"] = std::move(points);
  Json parameters = Json::object();
  for (const auto& [name, value] : r.worst_case.parameters) parameters[name] = value;
  worst["parameters"] = std::move(parameters);
  node["worst_case"] = std::move(worst);
  return node;
}

}  // namespace

int run_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  if (options.config.samples < 1) {
    err << "error: --samples must be at least 1\n";
    return kExitBadInput;
  }
  if (!(options.config.tol_closed > 0.0) || !(options.config.tol_quad > 0.0)) {
    err << "error: tolerances must be positive\n";
    return kExitBadInput;
  }
  FamilyConfig config;
  try {
    config = parse_family_spec(options.family);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  std::vector<ResidualReport> reports;
  try {
    const FamilyDescriptor family = make_family(config);
    reports = run_all_checks(family, options.config);
  } catch (const ConfigError& e) {
    err << "error: --family " << options.family << ": " << e.what() << "\n";
    return kExitBadInput;
  } catch (const Error& e) {
    err << "verification aborted: " << e.what() << "\n";
    return kExitVerifyFailed;
  }

  std::size_t passed = 0;
  for (const ResidualReport& r : reports) passed += r.passed ? 1 : 0;
  const bool all_passed = passed == reports.size();

  if (options.format == OutputFormat::json) {
    Json document = Json::object();
    document["family"] = detail::family_to_json(config);
    document["seed"] = options.config.seed;
    document["samples"] = options.config.samples;
    document["tol_closed"] = options.config.tol_closed;
    document["tol_quad"] = options.config.tol_quad;
    Json list = Json::array();
    for (const ResidualReport& r : reports) list.push_back(report_to_json(r));
    document["reports"] = std::move(list);
    document["passed"] = all_passed;
    out << document.dump(2) << "\n";
  } else {
    out << "family " << options.family << "  seed " << options.config.seed << "  samples "
        << options.config.samples << "  tol-closed " << scientific(options.config.tol_closed)
        << "  tol-quad " << scientific(options.config.tol_quad) << "\n";
    out << pad("identity", 40) << pad("samples", 9) << pad("measure", 11) << pad("value", 12)
        << pad("tolerance", 12) << "result\n";
    for (const ResidualReport& r : reports) {
      const double value = r.figure_of_merit();
      out << pad(r.identity, 40) << pad(std::to_string(r.samples), 9) << pad(measure(r), 11)
          << pad(scientific(value), 12) << pad(scientific(r.tolerance), 12)
          << (r.passed ? "pass" : "FAIL") << "\n";
    }
    out << passed << "/" << reports.size() << " checks passed\n";
  }
  return all_passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace dflat::cli
