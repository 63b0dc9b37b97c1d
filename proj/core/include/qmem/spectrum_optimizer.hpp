#pragma once

// Impurity minimization over tabulated pulse spectra at fixed energy.
//
// Both m_in and Delta m are linear in the nodal densities w_k = |f(w_k)|^2,
// so m_out(w) = sum_k w_k b_k and the Minkowski norm is the quadratic form
// w^T A w with A_kl = <b_k, b_l>. Under E(w) = sum_k e_k w_k = 1 the
// substitution y_k = e_k w_k maps the feasible set onto the unit simplex,
// where |y^T A~ y| with A~_kl = A_kl / (e_k e_l) is minimized by projected
// gradient descent with Armijo backtracking.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qmem/impurity.hpp"
#include "qmem/memory_state.hpp"
#include "qmem/quaternion.hpp"
#include "qmem/transfer_solver.hpp"

namespace qmem {

struct QuadraticModel {
  std::vector<double> omega;
  std::vector<double> energy;                      ///< e_k, energy per unit density
  std::vector<HyperbolicQuaternion> m_in_part;     ///< e_k t_in
  std::vector<HyperbolicQuaternion> delta_m_part;  ///< Delta m per unit density
  std::vector<HyperbolicQuaternion> basis;         ///< b_k = m_in_part + delta_m_part
  Eigen::MatrixXd gram;                            ///< A_kl = minkowski(b_k, b_l)

  std::size_t size() const { return omega.size(); }
  HyperbolicQuaternion m_out(const std::vector<double>& w) const;
  double energy_of(const std::vector<double>& w) const;
  /// |w^T A w|
  double objective(const std::vector<double>& w) const;
  /// sqrt(2 J(w) / E(w)^2): the unit-trace impurity of m_out(w).
  double normalized_impurity(const std::vector<double>& w) const;
};

struct ModelOptions {
  Parity parity{Parity::Even};
  QuadratureRule rule{QuadratureRule::Trapezoid};
  SolveOptions solve{};
  unsigned threads{1};
};

/// Solves once per grid node (in parallel) for a unit incoming density and
/// caches the responses. The quadrature weights are those the pipeline uses
/// for a tabulated spectrum on the same grid, so m_out(w) reproduces
/// impurity_pipeline for any w. Throws InvalidArgument for an invalid grid and
/// propagates solver errors.
QuadraticModel build_model(const DiscretePotential& potential, const Spinor& s_in,
                           const std::vector<double>& omega_grid, const ModelOptions& options = {});

struct OptimizerOptions {
  std::size_t max_iterations{10000};
  double relative_decrease{1e-10};
  double armijo{1e-4};
  double initial_step{1.0};
};

struct IterationRecord {
  std::size_t iteration{};
  double objective{};
  double imp{};
  double step{};
};

struct OptimizationResult {
  std::vector<double> weights;  ///< nodal densities with E(w) = 1
  double objective{};           ///< J at the returned weights
  double imp{};                 ///< sqrt(2 J)
  std::vector<IterationRecord> trace;
  std::size_t iterations{};
  bool converged{false};  ///< false when the iteration cap was hit
  bool monotone{true};
};

/// Euclidean projection onto {y >= 0, sum y = 1}.
std::vector<double> project_simplex(const std::vector<double>& v);

/// Starts from `initial` (rescaled to unit energy; must be nonnegative with
/// positive energy) and returns the best iterate found.
OptimizationResult minimize(const QuadraticModel& model, const std::vector<double>& initial,
                            const OptimizerOptions& options = {});

}  // namespace qmem
