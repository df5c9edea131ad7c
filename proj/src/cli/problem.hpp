#pragma once

// ProblemFile schema:
//
//   {
//     "family": {"kind": "binomial", "trials": 10} | "binomial:10",
//     "points": {"P": {"theta": [..]} | {"eta": [..]} | {"params": {..}}, ...},
//     "tasks":  [{"op": "psi_divergence", "args": ["P", "Q"], "alpha": 0.5}, ...]
//   }
//
// params by kind: gaussian1d {mu, sigma}; binomial {p};
// categorical {probabilities}; mixture {weights}; selfdual {values}.

#include "json.hpp"

#include <optional>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include "dflat/cli.hpp"

namespace dflat::cli::detail {

using Json = nlohmann::ordered_json;

// Schema violation; the message starts with the offending field path.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

FamilyConfig family_from_json(const Json& node, const std::string& path);
Json family_to_json(const FamilyConfig& config);

// Throws InputError for schema problems and DomainError when the values lie
// outside the family domain.
CoordinatePair point_from_json(const FamilyDescriptor& family, const Json& node,
                               const std::string& path);
Json point_to_json(const CoordinatePair& point);

Json vector_to_json(const Vector& v);

struct Task {
  std::string op;
  std::vector<std::string> args;
  std::optional<double> alpha;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<Chart> chart;
};

struct Problem {
  FamilyConfig config;
  Json family_node;
  std::vector<std::pair<std::string, Json>> points;  // in file order
  std::vector<Task> tasks;
};

// Schema validation only; point values are not checked against the domain.
Problem parse_problem(const Json& document);

Chart parse_chart(const std::string& text, const std::string& path);

}  // namespace dflat::cli::detail
