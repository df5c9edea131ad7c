// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
//
// Usage: dflat_acceptance [path-to-dflat-executable]
// With the executable path, criterion 8 also compares two separate processes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli/problem.hpp"
#include "dflat/cli.hpp"
#include "dflat/divergences.hpp"
#include "dflat/families.hpp"
#include "dflat/identities.hpp"
#include "dflat/sampling.hpp"

using namespace dflat;

namespace {

// Pinned tolerances.
constexpr double kConcordance = 1e-10;
constexpr double kOracleMatch = 1e-9;
constexpr double kEntropyMatch = 1e-10;
constexpr double kClosedTolerance = 1e-9;
constexpr double kSelfDualTolerance = 1e-12;
constexpr double kSlackFloor = -1e-10;
constexpr double kQuadTolerance = 1e-6;
constexpr double kDualityClosed = 1e-9;
constexpr double kDualityNumerical = 1e-6;
constexpr double kGradient = 1e-5;
constexpr double kMetricPair = 1e-8;
constexpr double kFisher = 1e-8;
constexpr double kReingest = 1e-12;

constexpr int kIdentitySamples = 200;
constexpr int kInequalitySamples = 500;
constexpr int kGeodesicSamples = 50;
constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool passed = true;
  std::string detail;
};

struct NamedFamily {
  std::string spec;
  FamilyDescriptor family;
};

std::vector<NamedFamily> suite_families() {
  std::vector<NamedFamily> out;
  for (const char* spec : {"selfdual:2", "gaussian1d", "binomial:10", "categorical:4",
                           "mixture:0.5,0.5/0.9,0.1",
                           "mixture:0.2,0.3,0.5/0.6,0.2,0.2/0.1,0.7,0.2"}) {
    out.push_back({spec, make_family(cli::parse_family_spec(spec))});
  }
  return out;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) h -= x * std::log(x);
  return h;
}

// KL(N(m1, s1^2) || N(m2, s2^2)).
double gaussian_kl(double m1, double s1, double m2, double s2) {
  return std::log(s2 / s1) + (s1 * s1 + (m1 - m2) * (m1 - m2)) / (2.0 * s2 * s2) - 0.5;
}

Outcome criterion_gaussian() {
  const FamilyDescriptor g = make_family(Gaussian1dConfig{});
  const CoordinatePair p = point_from_params(g, GaussianParams{0.0, 1.0});
  const CoordinatePair q = point_from_params(g, GaussianParams{1.0, 2.0});
  const double closed = gaussian_affine_closed_form({0.0, 1.0}, {1.0, 2.0});
  const double generic = affine(g, p, q).value;
  const double kl_sum = gaussian_kl(0.0, 1.0, 1.0, 2.0) + gaussian_kl(1.0, 2.0, 0.0, 1.0);
  const double worst = std::max({std::abs(closed - generic), std::abs(closed - kl_sum),
                                 std::abs(generic - kl_sum), std::abs(generic - 1.75)});
  return {worst < kConcordance, "D_A = " + cli::format_number(generic) + ", max |diff| " + sci(worst)};
}

Outcome criterion_binomial() {
  const FamilyDescriptor b = make_family(BinomialConfig{1});
  const CoordinatePair p = point_from_params(b, BinomialParams{0.2});
  const CoordinatePair q = point_from_params(b, BinomialParams{0.8});
  const double closed = binomial_affine_closed_form(1, 0.2, 0.8);
  const double generic = affine(b, p, q).value;
  const double affine_gap =
      std::max(std::abs(closed - generic), std::abs(generic - 0.6 * std::log(16.0)));
  const double psi_div = psi_divergence(b, p, q, 0.5).value;
  // sum sqrt(p q) = 2 sqrt(0.16) = 0.8
  const double direct_sum = -std::log(std::sqrt(0.2 * 0.8) + std::sqrt(0.8 * 0.2));
  const double psi_gap = std::max({std::abs(psi_div - direct_sum),
                                   std::abs(psi_div - reference_bhattacharyya(b, p, q, 0.5)),
                                   std::abs(psi_div + std::log(0.8))});
  return {affine_gap < kConcordance && psi_gap < kOracleMatch,
          "D_A gap " + sci(affine_gap) + ", psi-divergence " + cli::format_number(psi_div) +
              " gap " + sci(psi_gap)};
}

Outcome criterion_mixture() {
  const FamilyDescriptor mix = make_family(MixtureConfig{{{0.5, 0.5}, {0.9, 0.1}}});
  const CoordinatePair p = point_from_params(mix, MixtureParams{{0.0}});
  const CoordinatePair q = point_from_params(mix, MixtureParams{{1.0}});
  const double phi_div = phi_divergence(mix, p, q, 0.5).value;
  const double direct =
      entropy_of({0.7, 0.3}) - 0.5 * entropy_of({0.5, 0.5}) - 0.5 * entropy_of({0.9, 0.1});
  const double js_gap = std::max(std::abs(phi_div - direct),
                                 std::abs(phi_div - reference_js(mix, p, q, 0.5)));
  double entropy_gap = 0.0;
  for (int i = 0; i < 20; ++i) {
    SampleStream stream(kSeed, "acceptance-entropy", static_cast<std::uint64_t>(i));
    const CoordinatePair x = sample_point(mix, stream);
    const double eta = x.eta()[0];
    const std::vector<double> pmf = {0.5 + eta * 0.4, 0.5 - eta * 0.4};
    entropy_gap = std::max(entropy_gap, std::abs(x.phi() + entropy_of(pmf)));
  }
  return {js_gap < kOracleMatch && entropy_gap < kEntropyMatch,
          "phi-divergence " + cli::format_number(phi_div) + " vs JS gap " + sci(js_gap) +
              ", phi + H gap over 20 points " + sci(entropy_gap)};
}

Outcome criterion_identities() {
  static const std::vector<std::string> required = {
      "triangular_relation",   "law_of_cosines",        "expansion_formula_base_R_theta",
      "expansion_formula_base_R_eta", "expansion_formula_base_P_theta",
      "expansion_formula_base_P_eta", "parallelogram_law_theta", "parallelogram_law_eta",
      "polarization_identity_theta", "polarization_identity_eta", "interior_angle_sum_theta",
      "interior_angle_sum_eta", "division_lemma_theta", "division_lemma_eta",
      "reversed_division_theta", "reversed_division_eta", "division_theorem_theta",
      "division_theorem_eta"};
  Outcome outcome;
  int failures = 0;
  std::size_t total = 0;
  double selfdual_worst = 0.0;
  for (const NamedFamily& nf : suite_families()) {
    cli::VerifyOptions options;
    options.family = nf.spec;
    options.config.seed = kSeed;
    options.config.samples = kIdentitySamples;
    options.config.tol_closed = kClosedTolerance;
    options.config.tol_quad = kQuadTolerance;
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_verify(options, out, err);
    if (code != cli::kExitOk) {
      outcome.passed = false;
      outcome.detail += " verify " + nf.spec + " exit " + std::to_string(code) + ";";
    }
    const std::vector<ResidualReport> reports = run_all_checks(nf.family, options.config);
    std::set<std::string> names;
    for (const ResidualReport& r : reports) {
      names.insert(r.identity);
      ++total;
      if (!r.passed) ++failures;
      // Gradient checks measure central-difference error, not an identity.
      if (nf.family.kind() == FamilyKind::selfdual && r.kind == ReportKind::residual &&
          !r.identity.ends_with("_gradient")) {
        selfdual_worst = std::max(selfdual_worst, r.max_rel_residual);
      }
    }
    for (const std::string& name : required) {
      if (names.count(name) == 0) {
        outcome.passed = false;
        outcome.detail += " missing " + name + " for " + nf.spec + ";";
      }
    }
  }
  outcome.passed = outcome.passed && failures == 0 && selfdual_worst < kSelfDualTolerance;
  outcome.detail = std::to_string(total - static_cast<std::size_t>(failures)) + "/" +
                   std::to_string(total) + " reports pass over 6 families, selfdual worst " +
                   sci(selfdual_worst) + outcome.detail;
  return outcome;
}

Outcome criterion_inequalities() {
  SampleConfig config;
  config.seed = kSeed;
  config.samples = kInequalitySamples;
  double worst = INFINITY;
  std::string worst_name;
  std::set<std::string> seen;
  for (const NamedFamily& nf : suite_families()) {
    for (const ResidualReport& r : check_inequalities_family(nf.family, config)) {
      seen.insert(r.identity);
      if (r.samples != kInequalitySamples) return {false, r.identity + " ran too few samples"};
      if (r.min_slack < worst) {
        worst = r.min_slack;
        worst_name = nf.spec + " " + r.identity;
      }
    }
  }
  const bool covered = seen.count("affine_bounds_psi_divergence") &&
                       seen.count("affine_bounds_phi_divergence") &&
                       seen.count("jeffreys_bounds_jensen_shannon") &&
                       seen.count("jeffreys_bounds_bhattacharyya") &&
                       seen.count("jeffreys_bounds_renyi");
  return {covered && worst >= kSlackFloor,
          std::to_string(seen.size()) + " inequalities, minimum slack " + sci(worst) + " (" +
              worst_name + ")"};
}

Outcome criterion_quadrature() {
  SampleConfig config;
  config.seed = kSeed;
  config.samples = kGeodesicSamples;
  config.tol_quad = kQuadTolerance;
  double worst = 0.0;
  int reports = 0;
  bool ok = true;
  std::string failed;
  for (const NamedFamily& nf : suite_families()) {
    for (const ResidualReport& r : check_geodesic_family(nf.family, config)) {
      ++reports;
      if (!r.passed || r.samples != kGeodesicSamples) {
        ok = false;
        failed += " " + nf.spec + ":" + r.identity;
      }
      if (r.kind == ReportKind::residual) worst = std::max(worst, r.max_rel_residual);
    }
  }
  return {ok && reports > 0, std::to_string(reports) + " reports, worst relative error " +
                                 sci(worst) + failed};
}

Outcome criterion_duality() {
  SampleConfig config;
  config.seed = kSeed;
  config.samples = kIdentitySamples;
  config.tol_closed = kDualityClosed;
  struct Bound {
    const char* name;
    double limit;
    bool relative;
  };
  const std::array<Bound, 5> bounds = {{{"legendre_duality", kDualityClosed, false},
                                        {"legendre_duality_numerical", kDualityNumerical, false},
                                        {"eta_matches_psi_gradient", kGradient, true},
                                        {"metric_pair_inverse", kMetricPair, false},
                                        {"metric_equals_fisher_sum", kFisher, true}}};
  std::array<double, 5> worst{};
  std::array<int, 5> hits{};
  bool ok = true;
  for (const NamedFamily& nf : suite_families()) {
    for (const ResidualReport& r : check_duality_family(nf.family, config)) {
      if (!r.passed) ok = false;
      for (std::size_t k = 0; k < bounds.size(); ++k) {
        if (r.identity != bounds[k].name) continue;
        const double value = bounds[k].relative ? r.max_rel_residual : r.max_abs_residual;
        worst[k] = std::max(worst[k], value);
        ++hits[k];
        if (!(value < bounds[k].limit)) ok = false;
      }
    }
  }
  // The Fisher sum check needs the binomial family; the others need every family.
  std::string detail;
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    if (hits[k] == 0) ok = false;
    detail += std::string(k ? ", " : "") + bounds[k].name + " " + sci(worst[k]);
  }
  return {ok, detail};
}

std::string run_process(const std::string& command, int& code) {
  std::string output;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) {
    code = -1;
    return output;
  }
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  code = pclose(pipe);
  return output;
}

Outcome criterion_determinism(const std::string& tool) {
  Outcome outcome;
  std::vector<std::string> notes;

  // In-process verify, twice.
  std::array<std::string, 2> reports;
  for (std::string& report : reports) {
    cli::VerifyOptions options;
    options.family = "gaussian1d";
    options.config.seed = kSeed;
    options.config.samples = kIdentitySamples;
    std::ostringstream out;
    std::ostringstream err;
    cli::run_verify(options, out, err);
    report = out.str();
  }
  if (reports[0] != reports[1] || reports[0].empty()) {
    outcome.passed = false;
    notes.push_back("in-process verify reports differ");
  }

  if (!tool.empty()) {
    const std::string command = "\"" + tool + "\" verify --family gaussian1d --seed 7";
    int code_a = 0;
    int code_b = 0;
    const std::string a = run_process(command, code_a);
    const std::string b = run_process(command, code_b);
    if (a != b || a.empty() || code_a != 0 || code_b != 0) {
      outcome.passed = false;
      notes.push_back("two verify processes differ");
    } else {
      notes.push_back("two verify processes byte-identical");
    }
  }

  // compute, then feed the emitted theta coordinates back in.
  using cli::detail::Json;
  const std::string dir = DFLAT_TEST_TMPDIR;
  Json problem = Json::parse(R"({
    "family": {"kind": "binomial", "trials": 10},
    "points": {"P": {"params": {"p": 0.2}}, "Q": {"params": {"p": 0.65}},
               "R": {"eta": [4.1]}},
    "tasks": [
      {"op": "canonical", "args": ["P", "Q"]},
      {"op": "affine", "args": ["Q", "R"]},
      {"op": "dual_inner_product", "args": ["Q", "R", "P"]},
      {"op": "psi_divergence", "args": ["P", "R"], "alpha": 0.3},
      {"op": "phi_divergence", "args": ["P", "R"], "alpha": 0.3},
      {"op": "renyi", "args": ["Q", "R"], "alpha": 0.7},
      {"op": "skew_combination", "args": ["P", "Q"], "a": 0.6, "b": 0.3}
    ]
  })");
  const std::string first_path = dir + "/acceptance_problem.json";
  std::ofstream(first_path) << problem.dump(2);
  std::ostringstream first;
  std::ostringstream err;
  int code = cli::run_compute(first_path, cli::OutputFormat::json, first, err);
  const Json emitted = Json::parse(first.str());
  Json points = Json::object();
  for (const auto& [name, node] : emitted["points"].items()) {
    points[name] = Json{{"theta", node["theta"]}};
  }
  problem["points"] = points;
  const std::string second_path = dir + "/acceptance_problem_theta.json";
  std::ofstream(second_path) << problem.dump(2);
  std::ostringstream second;
  code = std::max(code, cli::run_compute(second_path, cli::OutputFormat::json, second, err));
  const Json again = Json::parse(second.str());
  double gap = 0.0;
  const std::size_t n = emitted["results"].size();
  if (code != cli::kExitOk || again["results"].size() != n || n == 0) {
    outcome.passed = false;
    notes.push_back("compute failed: " + err.str());
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      gap = std::max(gap, std::abs(emitted["results"][i]["value"].get<double>() -
                                   again["results"][i]["value"].get<double>()));
    }
    if (!(gap < kReingest)) outcome.passed = false;
    notes.push_back("re-ingested values max |diff| " + sci(gap));
  }

  for (std::size_t i = 0; i < notes.size(); ++i) {
    outcome.detail += (i ? ", " : "") + notes[i];
  }
  return outcome;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string tool = argc > 1 ? argv[1] : "";
  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"Gaussian closed-form concordance", criterion_gaussian},
      {"Binomial concordance", criterion_binomial},
      {"Mixture concordance", criterion_mixture},
      {"Identity suites", criterion_identities},
      {"Inequality suites", criterion_inequalities},
      {"Quadrature concordance", criterion_quadrature},
      {"Duality and gradient checks", criterion_duality},
      {"Determinism", [&] { return criterion_determinism(tool); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.passed) ++failed;
    std::cout << (outcome.passed ? "PASS" : "FAIL") << " [" << (i + 1) << "] "
              << criteria[i].title << ": " << outcome.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
