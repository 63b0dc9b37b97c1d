#pragma once

// Closed forms for a single point interaction q = g u at the origin.
//
// Even channel: delta potential, p e^{theta u} = 1 + (g / 2 sqrt(w)) u.
// Odd channel: delta'_p pseudo-potential, p e^{theta u} = 1 + (g/2) sqrt(w) u.
//
// In both channels scattering conjugates the projected incoming quaternion
// P_u t_in by rotors; the even channel uses e^{-theta u} (.) e^{theta u}, the
// odd channel the opposite orientation.

#include "qmem/impurity.hpp"
#include "qmem/memory_state.hpp"
#include "qmem/quadrature.hpp"
#include "qmem/quaternion.hpp"
#include "qmem/transfer_solver.hpp"

namespace qmem {

struct PointInteraction {
  double g{};
  ImaginaryQuaternion u{0.0, 0.0, 1.0};
  Parity parity{Parity::Even};

  /// Throws InvalidArgument for g < 0, a non-unit axis or Parity::None.
  PointInteraction(double g, const ImaginaryQuaternion& u, Parity parity);

  ImaginaryQuaternion q() const { return g * u; }
  Conjugation orientation() const {
    return parity == Parity::Even ? Conjugation::LeftInverse : Conjugation::RightInverse;
  }
  /// Single-site chain at x = 0 (even channel only).
  DiscretePotential as_potential() const;
};

struct MagnitudePhase {
  double p{1.0};
  double theta{0.0};
};

/// Even: p = sqrt(1 + g^2/4w), theta = atan(g / 2 sqrt(w)).
/// Odd:  p = sqrt(1 + w g^2/4), theta = atan(g sqrt(w) / 2).
MagnitudePhase magnitude_phase(const PointInteraction& pi, double omega);

/// Integrated-by-parts form
///   Delta m = 16 int dw/2pi rot_theta(w)(P_u t_in) (w^{3/2} |f|^2)'
/// with the distributional derivative at the edges of the support, so a
/// rectangular pulse reduces to 16 (rot_theta1 - rot_theta2)(P_u t_in).
DeltaMResult delta_m_closed(const PointInteraction& pi, const Spectrum& spectrum,
                            const HyperbolicQuaternion& t_in,
                            const QuadratureOptions& options = {});

/// Commutator-integrand form before integration by parts:
///   even: int dw/2pi (4g/p^2) |f|^2 e^{-theta u} [t_in, u] e^{theta u}
///   odd:  int dw/2pi w (4g/p^2) |f|^2 e^{theta u} [t_in, u] e^{-theta u}
DeltaMResult delta_m_commutator_route(const PointInteraction& pi, const Spectrum& spectrum,
                                      const HyperbolicQuaternion& t_in,
                                      const QuadratureOptions& options = {});

/// Imp = 4 sqrt(|4 (1 - cos(2 theta1 - 2 theta2)) + ln K (cos 2 theta1 - cos 2 theta2)|) / ln K
/// with the parity's angles, evaluated in 100-digit arithmetic. Throws for K <= 1.
double rectangular_impurity(const PointInteraction& pi, double omega0, double K);

/// sqrt(2/3) (g / 2 sqrt(w0)) / (w0 + g^2/4) * delta_omega; even parity only.
double small_bandwidth_asymptotic(const PointInteraction& pi, double omega0, double delta_omega);

struct OddChannelSolution {
  double omega{};
  Spinor d_a;            ///< a+ = d_a, a- = -d_a
  Spinor d_plus_left;    ///< (1 - (g/2) sqrt(w) u) d_a, equals d_in
  Spinor d_minus_left;   ///< -(1 + (g/2) sqrt(w) u) d_a
  Spinor d_plus_right;   ///< (1 + (g/2) sqrt(w) u) d_a
  Spinor d_minus_right;  ///< -(1 - (g/2) sqrt(w) u) d_a
  Spinor phi_x0;         ///< 2 i sqrt(w) d_a
};

/// Solves (1 - (g/2) sqrt(w) u) d_a = d_in, where d_in is the coefficient of
/// e^{ikx} on the left half-line.
OddChannelSolution odd_channel_solution(const PointInteraction& pi, const Spinor& d_in,
                                        double omega);

/// phi(x) of an odd-channel solution from its half-line coefficients.
Spinor evaluate_field(const OddChannelSolution& solution, double x);

/// Odd channel Delta m = int dw/2pi [i phi_x(0) phi_x(0)^dagger, q] from the
/// solved coefficients.
DeltaMResult delta_m_odd_solution(const PointInteraction& pi, const IncomingState& state,
                                  const QuadratureOptions& options = {});

/// Impurity report for a point interaction: the transfer-solver pipeline for
/// the even channel, the odd-channel solution for the odd one.
ImpurityReport impurity_point(const PointInteraction& pi, const IncomingState& state,
                              const PipelineOptions& options = {},
                              Normalization normalization = Normalization::UnitTrace);

}  // namespace qmem
