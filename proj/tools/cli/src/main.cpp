#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qmem/error.hpp"

namespace {

unsigned default_threads() {
  if (const char* env = std::getenv("QMEM_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid QMEM_THREADS=" << env << '\n';
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qmem::cli;

  CLI::App app{"Memory-impurity calculator for scattering off quaternionic potentials"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string scenario_path;
  std::string out_dir = "out";
  unsigned threads = default_threads();
  double tol = 0.0;
  std::string format = "json";
  app.add_option("--scenario", scenario_path, "Scenario JSON file");
  app.add_option("--out", out_dir, "Directory for output artifacts")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (default: $QMEM_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", tol, "Override the quadrature absolute tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  const std::map<std::string, std::pair<std::string, std::function<int(const RunContext&)>>> commands{
      {"solve", {"Scattering blocks and site fields on a frequency grid", run_solve}},
      {"impurity", {"Frequency-domain impurity report", run_impurity}},
      {"analytic", {"Closed-form point-interaction results", run_analytic}},
      {"evolve", {"Time-domain wave-packet scattering", run_evolve}},
      {"optimize", {"Minimize the impurity over tabulated spectra", run_optimize}},
      {"selftest", {"Run the acceptance checks and print a pass/fail table", run_selftest}},
  };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  RunContext ctx;
  ctx.out = out_dir;
  ctx.threads = threads;
  if (app.count("--tol")) ctx.tol = tol;
  ctx.format = format == "csv" ? Format::Csv : Format::Json;
  ctx.log = &std::cout;

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    if (!scenario_path.empty()) ctx.scenario = load_scenario(scenario_path);
    return commands.at(name).second(ctx);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kSchema;
  } catch (const qmem::InvalidArgument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kSchema;
  } catch (const qmem::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const qmem::ToleranceError& e) {
    std::cerr << "tolerance not met: " << e.what() << '\n';
    return kTolerance;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
}
