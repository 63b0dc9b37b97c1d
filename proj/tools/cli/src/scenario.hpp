#pragma once

// Scenario files: a JSON document describing one potential, one incoming
// state and the numerical settings of every subcommand. Unknown keys are
// rejected so that typos do not silently fall back to defaults.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmem/impurity.hpp"
#include "qmem/memory_state.hpp"
#include "qmem/point_interaction.hpp"
#include "qmem/spectrum_optimizer.hpp"
#include "qmem/time_oracle.hpp"
#include "qmem/transfer_solver.hpp"

namespace qmem::cli {

/// Malformed or inconsistent scenario (exit code 1).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scenario or artifact file could not be read or written (exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GaussianProfile {
  double center{0.0};
  double width{1.0};
  double amplitude{1.0};
  double operator()(double x) const;
  /// Exactly zero beyond six widths, where the profile is below double
  /// resolution; gives the separable term a finite interaction region.
  double truncated(double x) const;
};

enum class PotentialType { Discrete, PointEven, PointOdd, NonlocalSeparable };

struct PotentialSpec {
  PotentialType type{PotentialType::Discrete};
  std::vector<Site> sites;            // discrete
  double g{0.0};                      // point-even / point-odd
  ImaginaryQuaternion u{0.0, 0.0, 1.0};
  ImaginaryQuaternion q{};            // nonlocal-separable
  GaussianProfile alpha{}, beta{};

  bool is_point() const { return type == PotentialType::PointEven || type == PotentialType::PointOdd; }
  PointInteraction point() const;
  /// Site chain for frequency-domain work. Throws SchemaError for the odd
  /// point channel and separable potentials, which have no chain form.
  DiscretePotential chain() const;
};

struct FrequencyGridSpec {
  double omega_min{1.0};
  double omega_max{2.0};
  std::size_t n{65};
  bool logarithmic{false};
  std::vector<double> nodes() const;
};

struct TimeSpec {
  double half_width{300.0};
  std::size_t nodes{8193};
  PacketSpec packet{};
  ScatteringRunOptions run{};
};

enum class InitialWeights { Rectangular, Uniform, Spectrum };

struct OptimizerSpec {
  InitialWeights initial{InitialWeights::Rectangular};
  QuadratureRule rule{QuadratureRule::Trapezoid};
  OptimizerOptions options{};
};

struct OutputNames {
  std::string solution{"solution.csv"};
  std::string scattering{"scattering.csv"};
  std::string impurity{"impurity"};
  std::string analytic{"analytic"};
  std::string time_series{"time_series.csv"};
  std::string evolve{"evolve"};
  std::string optimal_spectrum{"optimal_spectrum.csv"};
  std::string convergence{"convergence.csv"};
  std::string optimize{"optimize"};
};

struct Scenario {
  std::filesystem::path source;
  PotentialSpec potential{};
  std::optional<IncomingState> incoming;
  std::optional<FrequencyGridSpec> frequency_grid;
  PipelineOptions pipeline{};
  double consistency_tol{1e-6};
  TimeSpec time{};
  OptimizerSpec optimizer{};
  OutputNames outputs{};
  std::uint64_t seed{20261015};

  /// The incoming state or a SchemaError naming the subcommand that needs it.
  const IncomingState& require_incoming(const char* command) const;
  const FrequencyGridSpec& require_grid(const char* command) const;
};

/// Parses a scenario document. Relative file references resolve against
/// `base_dir`. Throws SchemaError.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir);

/// Reads and parses a scenario file. Throws IoError or SchemaError.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace qmem::cli
