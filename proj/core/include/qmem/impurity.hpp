#pragma once

// Entanglement quaternion, outgoing memory quaternion and the impurity
//   Imp = sqrt(1 - tr M^2) = sqrt(2 |<m_out, m_out>|)   (unit-trace M).

#include "qmem/matrix_view.hpp"
#include "qmem/memory_state.hpp"
#include "qmem/quadrature.hpp"
#include "qmem/quaternion.hpp"
#include "qmem/transfer_solver.hpp"

namespace qmem {

enum class Normalization {
  UnitTrace,  ///< m_out divided by the energy so that tr M = 1
  Raw,        ///< m_out as is
};

struct PipelineOptions {
  QuadratureOptions quadrature{};
  SolveOptions solve{};
};

struct DeltaMResult {
  HyperbolicQuaternion delta_m{};
  QuadratureStats stats{};
};

struct ImpurityReport {
  HyperbolicQuaternion delta_m{};
  HyperbolicQuaternion m_out{};
  HyperbolicQuaternion m_normalized{};  ///< m_out after normalization
  Matrix2c M = Matrix2c::Zero();        ///< -i * realization(m_normalized)
  double imp{0.0};                      ///< sqrt(2 |minkowski(m_normalized)|)
  double imp_trace{0.0};                ///< sqrt(|(tr M)^2 - tr M^2|)
  double minkowski_norm{0.0};           ///< minkowski(m_normalized, m_normalized)
  double min_eigenvalue{0.0};           ///< smallest eigenvalue of M
  double energy{0.0};
  Normalization normalization{Normalization::UnitTrace};
  bool physical{true};  ///< time-like or null within 1e-8 (m0)^2
  QuadratureStats quadrature{};
};

/// Delta m = int dw/2pi sum_j [r~(x_j, w), q_j].
DeltaMResult delta_m(const DiscretePotential& potential, const IncomingState& state,
                     const PipelineOptions& options = {});

/// m_in + Delta m.
HyperbolicQuaternion m_out(const HyperbolicQuaternion& m_in, const HyperbolicQuaternion& delta_m);

/// Throws InvalidArgument for energy <= 0 (either normalization).
ImpurityReport impurity(const HyperbolicQuaternion& m_out, double energy,
                        Normalization normalization = Normalization::UnitTrace);

/// Full frequency-domain pipeline: m_in, Delta m, m_out and the report.
ImpurityReport impurity_pipeline(const DiscretePotential& potential, const IncomingState& state,
                                 const PipelineOptions& options = {},
                                 Normalization normalization = Normalization::UnitTrace);

}  // namespace qmem
