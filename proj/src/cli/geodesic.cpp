#include <fstream>
#include <ostream>
#include <sstream>

#include "dflat/geodesics.hpp"
#include "problem.hpp"

namespace dflat::cli {

namespace {

using detail::Json;

// "theta:1,2", "eta:0.5" or a JSON point object.
CoordinatePair parse_point(const FamilyDescriptor& family, const std::string& text,
                           const std::string& flag) {
  const std::size_t colon = text.find(':');
  if (!text.empty() && text.front() == '{') {
    return detail::point_from_json(family, Json::parse(text), flag);
  }
  if (colon == std::string::npos) {
    throw detail::InputError(flag + ": expected theta:..., eta:... or a JSON point object");
  }
  const std::string chart = text.substr(0, colon);
  if (chart != "theta" && chart != "eta") {
    throw detail::InputError(flag + ": unknown chart \"" + chart + "\"");
  }
  Json values = Json::array();
  std::stringstream cells(text.substr(colon + 1));
  std::string cell;
  while (std::getline(cells, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != cell.size() || cell.empty()) {
      throw detail::InputError(flag + ": \"" + cell + "\" is not a number");
    }
    values.push_back(v);
  }
  return detail::point_from_json(family, Json{{chart, values}}, flag);
}

}  // namespace

int run_geodesic(const GeodesicOptions& options, std::ostream& out, std::ostream& err) {
  if (options.grid < 2) {
    err << "error: --grid must be at least 2\n";
    return kExitBadInput;
  }
  std::optional<FamilyDescriptor> family;
  try {
    family = make_family(parse_family_spec(options.family));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  GeodesicProfile profile;
  try {
    const CoordinatePair p = parse_point(*family, options.from, "--from");
    const CoordinatePair r = parse_point(*family, options.to, "--to");
    profile = divergence_profile(*family, p, r, options.chart, options.grid);
  } catch (const detail::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const InvariantError& e) {
    err << "error: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const Error& e) {
    err << "domain error: " << e.what() << "\n";
    return kExitDomain;
  }

  std::ostringstream csv;
  const int n = family->dimension();
  csv << "t";
  for (int i = 1; i <= n; ++i) csv << ",theta_" << i;
  for (int i = 1; i <= n; ++i) csv << ",eta_" << i;
  csv << ",canonical,affine\n";
  for (const ProfileRow& row : profile.rows) {
    csv << format_number(row.t);
    for (int i = 0; i < n; ++i) csv << ',' << format_number(row.point.theta()[i]);
    for (int i = 0; i < n; ++i) csv << ',' << format_number(row.point.eta()[i]);
    csv << ',' << format_number(row.canonical) << ',' << format_number(row.affine) << '\n';
  }

  if (options.output.empty()) {
    out << csv.str();
    return kExitOk;
  }
  std::ofstream file(options.output, std::ios::binary);
  if (!file) {
    err << "error: cannot write " << options.output << "\n";
    return kExitBadInput;
  }
  file << csv.str();
  return file ? kExitOk : kExitBadInput;
}

}  // namespace dflat::cli
