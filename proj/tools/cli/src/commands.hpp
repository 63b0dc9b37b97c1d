#pragma once

#include <filesystem>
#include <optional>
#include <ostream>

#include "scenario.hpp"

namespace qmem::cli {

enum class Format { Json, Csv };

struct RunContext {
  std::optional<Scenario> scenario;
  std::filesystem::path out{"out"};
  unsigned threads{1};
  std::optional<double> tol;  ///< overrides tolerances.quadrature_abs
  Format format{Format::Json};
  std::ostream* log{nullptr};
};

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kSchema = 1,
  kNumerical = 2,
  kTolerance = 3,
  kIo = 4,
  kUsage = 5,
};

int run_solve(const RunContext& ctx);
int run_impurity(const RunContext& ctx);
int run_analytic(const RunContext& ctx);
int run_evolve(const RunContext& ctx);
int run_optimize(const RunContext& ctx);
int run_selftest(const RunContext& ctx);

}  // namespace qmem::cli
