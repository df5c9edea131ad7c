#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "dflat/cli.hpp"

int main(int argc, char** argv) {
  using namespace dflat;

  CLI::App app{"Divergences and identities on dually flat families"};
  app.require_subcommand(1);

  const std::map<std::string, cli::OutputFormat> compute_formats{
      {"json", cli::OutputFormat::json}, {"csv", cli::OutputFormat::csv}};
  const std::map<std::string, cli::OutputFormat> verify_formats{
      {"table", cli::OutputFormat::table}, {"json", cli::OutputFormat::json}};
  const std::map<std::string, Chart> charts{{"theta", Chart::theta}, {"eta", Chart::eta}};

  std::string problem_path;
  cli::OutputFormat compute_format = cli::OutputFormat::json;
  auto* compute = app.add_subcommand("compute", "Evaluate the tasks of a JSON problem file");
  compute->add_option("problem", problem_path, "Problem file")->required();
  compute->add_option("--format", compute_format, "json or csv")
      ->transform(CLI::CheckedTransformer(compute_formats, CLI::ignore_case));

  cli::VerifyOptions verify_options;
  auto* verify = app.add_subcommand("verify", "Run the randomized identity and inequality checks");
  verify->add_option("--family", verify_options.family, "kind[:config]")->required();
  verify->add_option("--seed", verify_options.config.seed, "Base seed");
  verify->add_option("--samples", verify_options.config.samples, "Samples per check");
  verify->add_option("--tol-closed", verify_options.config.tol_closed,
                     "Relative tolerance for algebraic identities");
  verify->add_option("--tol-quad", verify_options.config.tol_quad,
                     "Relative tolerance for quadrature forms");
  verify->add_option("--format", verify_options.format, "table or json")
      ->transform(CLI::CheckedTransformer(verify_formats, CLI::ignore_case));

  cli::GeodesicOptions geodesic_options;
  auto* geodesic = app.add_subcommand("geodesic", "Write the divergence profile along a geodesic");
  geodesic->add_option("--family", geodesic_options.family, "kind[:config]")->required();
  geodesic->add_option("--from", geodesic_options.from, "theta:..., eta:... or JSON point")
      ->required();
  geodesic->add_option("--to", geodesic_options.to, "theta:..., eta:... or JSON point")
      ->required();
  geodesic->add_option("--chart", geodesic_options.chart, "theta or eta")
      ->transform(CLI::CheckedTransformer(charts, CLI::ignore_case));
  geodesic->add_option("--grid", geodesic_options.grid, "Number of grid points");
  geodesic->add_option("--output", geodesic_options.output, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitBadInput;
  }

  if (compute->parsed()) {
    return cli::run_compute(problem_path, compute_format, std::cout, std::cerr);
  }
  if (verify->parsed()) return cli::run_verify(verify_options, std::cout, std::cerr);
  return cli::run_geodesic(geodesic_options, std::cout, std::cerr);
}
