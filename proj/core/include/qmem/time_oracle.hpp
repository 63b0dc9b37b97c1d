#pragma once

// Time-domain reference integrator for
//   i d/dt psi = -psi'' - i q(x) psi                       (local)
//   i d/dt psi = -psi'' - i q V_alpha(x) int V_beta psi dy  (separable nonlocal)
// on a uniform grid with homogeneous Dirichlet ends.
//
// Crank-Nicolson in time, three-point Laplacian in space. Delta sites sit on
// their nearest node with weight 1/dx. The nonlocal term is a rank-2 update
// handled with the Woodbury identity, so each step costs one block-tridiagonal
// solve regardless of the coupling.

#include <cstddef>
#include <optional>
#include <vector>

#include "qmem/impurity.hpp"
#include "qmem/matrix_view.hpp"
#include "qmem/memory_state.hpp"
#include "qmem/quaternion.hpp"
#include "qmem/transfer_solver.hpp"

namespace qmem {

struct UniformGrid {
  double x0{};
  double dx{};
  std::size_t n{};

  double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
  double x_last() const { return x(n - 1); }
  std::size_t nearest(double x) const;

  /// n nodes spanning [-half_width, half_width].
  static UniformGrid symmetric(double half_width, std::size_t n);
};

struct GridField {
  UniformGrid grid;
  std::vector<Spinor> values;
  double t{0.0};

  /// sum |psi|^2 dx
  double norm2() const;
};

struct NonlocalSeparable {
  ImaginaryQuaternion q;
  std::vector<double> V_alpha;  ///< sampled on the field grid
  std::vector<double> V_beta;
};

/// Hermitian 2x2 matrix of -i q, i.e. q . sigma.
Matrix2c hermitian_coupling(const ImaginaryQuaternion& q);

class CrankNicolson {
 public:
  /// Either potential may be empty. Throws InvalidArgument for a site outside
  /// the open grid interval, separable profiles of the wrong length or not
  /// vanishing at the ends, or V_alpha and V_beta not proportional (the
  /// kernel would not be self-adjoint), and for dt == 0 or dx <= 0.
  CrankNicolson(const UniformGrid& grid, const DiscretePotential& local,
                const std::optional<NonlocalSeparable>& nonlocal, double dt);

  double dt() const { return dt_; }
  const UniformGrid& grid() const { return grid_; }

  /// Node index of every local site, in site order.
  const std::vector<std::size_t>& site_nodes() const { return site_nodes_; }

  /// Advances one step. Throws NumericalError if the result is not finite.
  void step(GridField& field) const;

 private:
  std::vector<Vector2c> apply_rhs(const std::vector<Vector2c>& psi) const;
  std::vector<Vector2c> solve_tridiagonal(std::vector<Vector2c> rhs) const;

  UniformGrid grid_;
  double dt_{};
  std::vector<Matrix2c> potential_;  // local H term per node, zero where no site
  std::vector<std::size_t> site_nodes_;
  std::vector<std::size_t> active_;  // nodes with a nonzero local term
  std::optional<NonlocalSeparable> nonlocal_;
  Matrix2c coupling_ = Matrix2c::Zero();
  complex off_diag_{};
  std::vector<Matrix2c> inv_pivot_;  // inverses of the eliminated diagonal blocks
  // Woodbury data for the separable term.
  std::vector<Vector2c> z_cols_[2];
  Matrix2c capacitance_inv_ = Matrix2c::Identity();
};

/// Symmetric triple-jump composition of Crank-Nicolson steps
/// (g1 dt, g2 dt, g1 dt with g1 = 1/(2 - 2^{1/3}), g2 = 1 - 2 g1): fourth order
/// in dt, still unitary. Used where the second-order error would dominate a
/// finite-difference check.
class FourthOrderStepper {
 public:
  FourthOrderStepper(const UniformGrid& grid, const DiscretePotential& local,
                     const std::optional<NonlocalSeparable>& nonlocal, double dt);
  double dt() const { return dt_; }
  void step(GridField& field) const;

 private:
  double dt_;
  CrankNicolson outer_;
  CrankNicolson inner_;
};

GridField evolve(GridField field, const DiscretePotential& potential, double dt,
                 std::size_t n_steps);
GridField evolve(GridField field, const NonlocalSeparable& potential, double dt,
                 std::size_t n_steps);

struct ReducedDensity {
  Matrix2c rho = Matrix2c::Zero();  ///< sum psi psi^dagger dx
  HyperbolicQuaternion m{};         ///< i rho in components
};

ReducedDensity reduced_density(const GridField& field);

/// (1/i)[(psi') psi^dagger - psi (psi')^dagger] with central differences.
/// Throws InvalidArgument at the first and last node.
Matrix2c flux_matrix(const GridField& field, std::size_t j);

/// r_V = (int V_beta psi)(int V_alpha psi)^dagger as a hyperbolic quaternion.
HyperbolicQuaternion nonlocal_density(const GridField& field, const NonlocalSeparable& potential);

/// Instantaneous dm/dt predicted by the commutator law: sum_j [r(x_j), q_j]
/// over local sites (on their grid nodes) plus [r_V, q] for the separable term.
HyperbolicQuaternion commutator_rate(const GridField& field, const CrankNicolson& stepper,
                                     const DiscretePotential& local,
                                     const std::optional<NonlocalSeparable>& nonlocal);

/// Gaussian incoming packet with k-space amplitude A0 exp(-(k - k0)^2 / 4 sigma_k^2).
/// The left-hand copy is centred at -X0 and moves right; parity mirrors it.
struct PacketSpec {
  double k0{1.0};
  double sigma_k{0.05};
  double energy{1.0};  ///< target sum |psi|^2 dx
  double X0{80.0};
  Spinor s_in{1.0, 0.0};
  Parity parity{Parity::Even};
};

/// Frequency-domain spectrum carrying the same |f|^2 as the packet.
GaussianPulse matching_pulse(const PacketSpec& packet);

GridField synthesize_packet(const UniformGrid& grid, const PacketSpec& packet);

struct ScatteringRunOptions {
  double dt{0.05};
  double region_padding{5.0};       ///< interaction region = potential support +- padding
  double stop_probability{1e-8};    ///< relative probability left in the region
  double edge_tolerance{1e-8};      ///< max |psi| at the ends relative to the peak
  std::size_t max_steps{200000};
  std::size_t record_every{0};      ///< 0 disables the time series
  bool strict{true};                ///< throw ToleranceError on edge or step-cap violations
};

struct TimeSample {
  double t{};
  double trace{};
  HyperbolicQuaternion m{};
  double imp{};
};

struct ScatteringRun {
  GridField final_field;
  ReducedDensity initial;
  ReducedDensity final;
  ImpurityReport report;  ///< unit-trace impurity of the final memory state
  std::vector<TimeSample> series;
  double norm_drift{};     ///< max |norm(t) / norm(0) - 1|
  double trace_m0_drift{}; ///< |m0(final) - m0(0)| / m0(0)
  double max_edge_ratio{};
  std::size_t steps{};
  bool stopped{false};  ///< region probability fell below the threshold
};

/// Evolves until the packet has entered and then left the interaction
/// region, and reports the frozen memory state.
ScatteringRun run_scattering(GridField initial, const DiscretePotential& local,
                             const std::optional<NonlocalSeparable>& nonlocal,
                             const ScatteringRunOptions& options);

}  // namespace qmem
