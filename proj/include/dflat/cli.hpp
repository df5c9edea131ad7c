#pragma once

// Front end shared by the `dflat` executable and the CLI tests.
//
// Exit codes: 0 success, 1 bad input or flags, 2 domain errors in the
// requested computations, 3 failed verification.

#include <cstdint>
#include <iosfwd>
#include <string>

#include "dflat/families.hpp"
#include "dflat/identities.hpp"

namespace dflat::cli {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitDomain = 2;
constexpr int kExitVerifyFailed = 3;

// "gaussian1d", "binomial:10", "categorical:4", "selfdual:2",
// "mixture:0.5,0.5/0.9,0.1" (rows separated by '/'). Bare "binomial",
// "categorical" and "selfdual" take n = 1, m = 2, n = 1; bare "mixture" is
// the two-component table 0.5,0.5/0.9,0.1. Throws ConfigError.
FamilyConfig parse_family_spec(const std::string& text);

// Shortest decimal that reads back to the same double.
std::string format_number(double value);

enum class OutputFormat { json, csv, table };

int run_compute(const std::string& problem_path, OutputFormat format, std::ostream& out,
                std::ostream& err);

struct VerifyOptions {
  std::string family;
  SampleConfig config;
  OutputFormat format = OutputFormat::table;
};

int run_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

struct GeodesicOptions {
  std::string family;
  std::string from;  // "theta:x,y", "eta:x,y" or a JSON point object
  std::string to;
  Chart chart = Chart::theta;
  int grid = 11;
  std::string output;  // empty: standard output
};

int run_geodesic(const GeodesicOptions& options, std::ostream& out, std::ostream& err);

}  // namespace dflat::cli
