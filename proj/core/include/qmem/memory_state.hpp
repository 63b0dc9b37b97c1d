#pragma once

// Incoming pulse spectra and the incoming memory state.
//
// Units follow hbar^2/(2m) = 1, so a frequency omega has wavenumber
// k = sqrt(omega). Spectra carry |f(omega)|^2 only; the phase of f is taken
// to be zero since no implemented quantity depends on it.

#include <optional>
#include <utility>
#include <vector>

#include "qmem/quaternion.hpp"

namespace qmem {

enum class QuadratureRule { Trapezoid, Midpoint };

enum class Parity {
  Even,  ///< e^{-i k |x|} from both sides
  Odd,   ///< sg(x) e^{-i k |x|}
  None,  ///< one-sided incidence from the left
};

/// (2 pi)^{-1} omega^{3/2} |f|^2 = 1 on [omega0, K omega0], zero elsewhere.
struct RectangularPulse {
  double omega0{};
  double K{};
};

/// Gaussian in k = sqrt(omega): |A(k)|^2 = A0^2 exp(-(k - k0)^2 / (2 sigma_k^2)),
/// with |f(omega)|^2 = pi^2 |A(k)|^2 / k^2 and A0 chosen so the two-sided
/// energy 4 int dw/2pi |f|^2 sqrt(w) equals `energy`.
struct GaussianPulse {
  double k0{};
  double sigma_k{};
  double energy{1.0};
  /// Support is truncated to k0 +- span * sigma_k.
  double span{10.0};
};

class Spectrum {
 public:
  enum class Kind { Tabulated, Rectangular, Gaussian };

  /// Grid of strictly increasing positive frequencies with |f|^2 >= 0.
  static Spectrum tabulated(std::vector<double> omega, std::vector<double> density,
                            QuadratureRule rule = QuadratureRule::Trapezoid);
  static Spectrum rectangular(double omega0, double K);
  static Spectrum gaussian(const GaussianPulse& pulse);

  Kind kind() const { return kind_; }
  QuadratureRule rule() const { return rule_; }

  /// |f(omega)|^2. Tabulated spectra interpolate linearly; zero outside support.
  double density(double omega) const;

  /// d/domega (omega^{3/2} |f|^2) in the interior of the support.
  double weighted_density_derivative(double omega) const;

  std::pair<double, double> support() const;

  const std::vector<double>& omega_grid() const { return omega_; }
  const std::vector<double>& density_values() const { return density_; }
  const RectangularPulse& rectangular_pulse() const { return rect_; }
  const GaussianPulse& gaussian_pulse() const { return gauss_; }

  /// Closed-form two-sided energy 4 int dw/2pi |f|^2 sqrt(w), when known.
  std::optional<double> analytic_energy() const;

  /// Spectrum with |f|^2 multiplied by c >= 0.
  Spectrum scaled(double c) const;

 private:
  Spectrum() = default;

  Kind kind_{Kind::Tabulated};
  QuadratureRule rule_{QuadratureRule::Trapezoid};
  std::vector<double> omega_;
  std::vector<double> density_;
  RectangularPulse rect_{};
  GaussianPulse gauss_{};
  double scale_{1.0};
  double gauss_amplitude2_{0.0};
};

struct IncomingState {
  Spectrum spectrum;
  Spinor s_in;
  Parity parity{Parity::Even};

  /// Throws InvalidArgument unless s_in is normalized.
  IncomingState(Spectrum spectrum, const Spinor& s_in, Parity parity);
};

struct BoundaryBlocks {
  Spinor d_plus_left;    ///< coefficient of e^{+ikx} for x < 0
  Spinor d_minus_right;  ///< coefficient of e^{-ikx} for x > 0
};

struct QuadratureOptions;

/// i s s^dagger for a normalized spinor: null with r0 = 1/2.
HyperbolicQuaternion t_in(const Spinor& s_in);

/// Prefactor c in E = c int dw/2pi |f|^2 sqrt(w): 4 for two-sided waves,
/// 2 for one-sided incidence.
double energy_prefactor(Parity parity);

/// E = tr rho_in for the state's spectrum.
double incoming_energy(const IncomingState& state, const QuadratureOptions& options);

/// m_in = E * t_in(s_in).
HyperbolicQuaternion m_in(const IncomingState& state, const QuadratureOptions& options);

/// Incoming coefficient blocks at one frequency. Even: both f s_in. Odd:
/// d_plus_left = -f s_in, d_minus_right = f s_in. None: d_minus_right = 0.
BoundaryBlocks boundary_coefficients(const IncomingState& state, double omega);

/// Components of i psi psi^dagger without any normalization requirement.
HyperbolicQuaternion density_quaternion(const Spinor& psi);

}  // namespace qmem
