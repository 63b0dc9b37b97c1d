#include "qmem/point_interaction.hpp"

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qmem/error.hpp"

namespace qmem {

namespace {

constexpr double kInv2Pi = 0.5 / std::numbers::pi;

Vec<3> to_vec(const ImaginaryQuaternion& q) { return {q.a1, q.a2, q.a3}; }

ImaginaryQuaternion rotated_projection(const PointInteraction& pi, const ImaginaryQuaternion& pt,
                                       double theta) {
  return rotor_conjugate(pt, Rotor{theta, pi.u}, pi.orientation());
}

void require_positive_omega(double omega) {
  if (!(omega > 0.0)) throw InvalidArgument("point interaction requires omega > 0");
}

}  // namespace

PointInteraction::PointInteraction(double g_, const ImaginaryQuaternion& u_, Parity parity_)
    : g(g_), u(u_), parity(parity_) {
  if (!(g >= 0.0) || !std::isfinite(g)) throw InvalidArgument("coupling g must be >= 0");
  if (!u.is_unit()) throw InvalidArgument("point interaction axis must be unit length");
  if (parity == Parity::None) throw InvalidArgument("point interaction parity must be even or odd");
}

DiscretePotential PointInteraction::as_potential() const {
  if (parity != Parity::Even) {
    throw InvalidArgument("the odd channel has no delta-chain representation");
  }
  return DiscretePotential({Site{0.0, q()}});
}

MagnitudePhase magnitude_phase(const PointInteraction& pi, double omega) {
  require_positive_omega(omega);
  const double ratio = pi.parity == Parity::Even ? pi.g / (2.0 * std::sqrt(omega))
                                                 : 0.5 * pi.g * std::sqrt(omega);
  return {std::sqrt(1.0 + ratio * ratio), std::atan(ratio)};
}

DeltaMResult delta_m_closed(const PointInteraction& pi, const Spectrum& spectrum,
                            const HyperbolicQuaternion& t_in, const QuadratureOptions& options) {
  const ImaginaryQuaternion pt = project_orthogonal(t_in, pi.u);
  const auto [a, b] = spectrum.support();
  auto rot_at = [&](double omega) {
    return rotated_projection(pi, pt, magnitude_phase(pi, omega).theta);
  };
  auto h = [&](double omega) { return std::pow(omega, 1.5) * spectrum.density(omega); };

  DeltaMResult out;
  ImaginaryQuaternion acc = h(a) * rot_at(a) - h(b) * rot_at(b);

  switch (spectrum.kind()) {
    case Spectrum::Kind::Rectangular:
      break;  // w^{3/2}|f|^2 is constant inside the support
    case Spectrum::Kind::Gaussian: {
      const auto interior = integrate_spectrum<3>(
          spectrum,
          [&](double omega, double) -> Vec<3> {
            return to_vec(spectrum.weighted_density_derivative(omega) * rot_at(omega));
          },
          options);
      acc += ImaginaryQuaternion{interior.value[0], interior.value[1], interior.value[2]};
      out.stats = interior.stats;
      break;
    }
    case Spectrum::Kind::Tabulated: {
      // Piecewise-linear w^{3/2}|f|^2: constant slope on every interval.
      const auto& grid = spectrum.omega_grid();
      std::vector<ImaginaryQuaternion> rots(grid.size());
      parallel_for(grid.size(), options.threads, [&](std::size_t i) { rots[i] = rot_at(grid[i]); });
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double dw = grid[i + 1] - grid[i];
        const double slope = (h(grid[i + 1]) - h(grid[i])) / dw;
        acc += (0.5 * slope * dw) * (rots[i] + rots[i + 1]);
      }
      out.stats.evaluations = grid.size();
      break;
    }
  }
  out.delta_m = HyperbolicQuaternion::from_imaginary((16.0 * kInv2Pi) * acc);
  return out;
}

DeltaMResult delta_m_commutator_route(const PointInteraction& pi, const Spectrum& spectrum,
                                      const HyperbolicQuaternion& t_in,
                                      const QuadratureOptions& options) {
  const ImaginaryQuaternion tu = commutator(t_in, pi.u);
  const auto integral = integrate_spectrum<3>(
      spectrum,
      [&](double omega, double density) -> Vec<3> {
        const auto [p, theta] = magnitude_phase(pi, omega);
        const double weight = (pi.parity == Parity::Odd ? omega : 1.0) * 4.0 * pi.g / (p * p);
        return to_vec((weight * density) * rotated_projection(pi, tu, theta));
      },
      options);
  DeltaMResult out;
  out.delta_m = {0.0, kInv2Pi * integral.value[0], kInv2Pi * integral.value[1],
                 kInv2Pi * integral.value[2]};
  out.stats = integral.stats;
  return out;
}

double rectangular_impurity(const PointInteraction& pi, double omega0, double K) {
  using boost::multiprecision::cpp_bin_float_100;
  using real = cpp_bin_float_100;
  if (!(omega0 > 0.0)) throw InvalidArgument("rectangular impurity needs omega0 > 0");
  if (!(K > 1.0)) throw InvalidArgument("rectangular impurity needs K > 1");
  if (pi.g == 0.0) return 0.0;

  const real g{pi.g};
  const real w0{omega0};
  const real k{K};
  real theta1, theta2;
  if (pi.parity == Parity::Even) {
    theta1 = atan(g / (2 * sqrt(w0)));
    theta2 = atan(g / (2 * sqrt(k * w0)));
    if (!(theta2 > 0 && theta2 < theta1 && theta1 < boost::math::constants::half_pi<real>())) {
      throw NumericalError("even-channel angles violate 0 < theta2 < theta1 < pi/2");
    }
  } else {
    theta1 = atan(g * sqrt(w0) / 2);
    theta2 = atan(g * sqrt(w0 * k) / 2);
    if (!(theta1 > 0 && theta1 < theta2 && theta2 < boost::math::constants::half_pi<real>())) {
      throw NumericalError("odd-channel angles violate 0 < theta1 < theta2 < pi/2");
    }
  }
  const real lnk = log(k);
  const real x = 4 * (1 - cos(2 * theta1 - 2 * theta2)) + lnk * (cos(2 * theta1) - cos(2 * theta2));
  return static_cast<double>(4 * sqrt(abs(x)) / lnk);
}

double small_bandwidth_asymptotic(const PointInteraction& pi, double omega0, double delta_omega) {
  if (pi.parity != Parity::Even) {
    throw InvalidArgument("the small-bandwidth law is only available for the even channel");
  }
  if (!(omega0 > 0.0)) throw InvalidArgument("small-bandwidth law needs omega0 > 0");
  if (!(delta_omega >= 0.0)) throw InvalidArgument("bandwidth must be non-negative");
  return std::sqrt(2.0 / 3.0) * (pi.g / (2.0 * std::sqrt(omega0))) /
         (omega0 + 0.25 * pi.g * pi.g) * delta_omega;
}

OddChannelSolution odd_channel_solution(const PointInteraction& pi, const Spinor& d_in,
                                        double omega) {
  if (pi.parity != Parity::Odd) throw InvalidArgument("odd_channel_solution needs odd parity");
  require_positive_omega(omega);
  const double k = std::sqrt(omega);
  const double c = 0.5 * pi.g * k;
  // (1 - c u)^{-1} = (1 + c u) / (1 + c^2) because u^2 = -1.
  const Quaternion plus = Quaternion::identity() + complex{c} * pi.u.quaternion();
  const Quaternion minus = Quaternion::identity() - complex{c} * pi.u.quaternion();
  OddChannelSolution sol;
  sol.omega = omega;
  sol.d_a = complex{1.0 / (1.0 + c * c)} * apply(plus, d_in);
  sol.d_plus_left = apply(minus, sol.d_a);
  sol.d_minus_left = complex{-1.0} * apply(plus, sol.d_a);
  sol.d_plus_right = apply(plus, sol.d_a);
  sol.d_minus_right = complex{-1.0} * apply(minus, sol.d_a);
  sol.phi_x0 = complex{0.0, 2.0 * k} * sol.d_a;
  return sol;
}

Spinor evaluate_field(const OddChannelSolution& solution, double x) {
  const double k = std::sqrt(solution.omega);
  const complex ep = std::polar(1.0, k * x);
  const complex em = std::conj(ep);
  if (x < 0.0) return ep * solution.d_plus_left + em * solution.d_minus_left;
  if (x > 0.0) return ep * solution.d_plus_right + em * solution.d_minus_right;
  // Mean of the one-sided limits (sg(0) = 0).
  return complex{0.5} * (solution.d_plus_left + solution.d_minus_left + solution.d_plus_right +
                         solution.d_minus_right);
}

DeltaMResult delta_m_odd_solution(const PointInteraction& pi, const IncomingState& state,
                                  const QuadratureOptions& options) {
  if (pi.parity != Parity::Odd) throw InvalidArgument("delta_m_odd_solution needs odd parity");
  const ImaginaryQuaternion q = pi.q();
  const auto integral = integrate_spectrum<3>(
      state.spectrum,
      [&](double omega, double density) -> Vec<3> {
        if (density == 0.0) return {0.0, 0.0, 0.0};
        const auto bc = boundary_coefficients(state, omega);
        const auto sol = odd_channel_solution(pi, bc.d_plus_left, omega);
        return to_vec(commutator(density_quaternion(sol.phi_x0), q));
      },
      options);
  DeltaMResult out;
  out.delta_m = {0.0, kInv2Pi * integral.value[0], kInv2Pi * integral.value[1],
                 kInv2Pi * integral.value[2]};
  out.stats = integral.stats;
  return out;
}

ImpurityReport impurity_point(const PointInteraction& pi, const IncomingState& state,
                              const PipelineOptions& options, Normalization normalization) {
  if (state.parity != pi.parity) {
    throw InvalidArgument("incoming parity must match the point interaction channel");
  }
  if (pi.parity == Parity::Even) {
    return impurity_pipeline(pi.as_potential(), state, options, normalization);
  }
  const double energy = incoming_energy(state, options.quadrature);
  const DeltaMResult dm = delta_m_odd_solution(pi, state, options.quadrature);
  ImpurityReport rep = impurity(m_out(energy * t_in(state.s_in), dm.delta_m), energy, normalization);
  rep.delta_m = dm.delta_m;
  rep.quadrature = dm.stats;
  return rep;
}

}  // namespace qmem
