#include "qmem/impurity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmem/error.hpp"

namespace qmem {

DeltaMResult delta_m(const DiscretePotential& potential, const IncomingState& state,
                     const PipelineOptions& options) {
  const auto integral = integrate_spectrum<3>(
      state.spectrum,
      [&](double omega, double density) -> Vec<3> {
        if (density == 0.0 || potential.empty()) return {0.0, 0.0, 0.0};
        const auto bc = boundary_coefficients(state, omega);
        const auto sol = solve_frequency(potential, bc.d_plus_left, bc.d_minus_right, omega,
                                         options.solve);
        ImaginaryQuaternion acc{};
        for (std::size_t j = 0; j < potential.size(); ++j) {
          acc += commutator(scattered_density(sol, j), potential.sites()[j].q);
        }
        return {acc.a1, acc.a2, acc.a3};
      },
      options.quadrature);
  for (double v : integral.value) {
    if (!std::isfinite(v)) throw NumericalError("non-finite entanglement quaternion");
  }
  const double inv2pi = 0.5 / std::numbers::pi;
  DeltaMResult out;
  out.delta_m = {0.0, inv2pi * integral.value[0], inv2pi * integral.value[1],
                 inv2pi * integral.value[2]};
  out.stats = integral.stats;
  return out;
}

HyperbolicQuaternion m_out(const HyperbolicQuaternion& m_in, const HyperbolicQuaternion& delta_m) {
  return m_in + delta_m;
}

ImpurityReport impurity(const HyperbolicQuaternion& m_out_, double energy,
                        Normalization normalization) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw InvalidArgument("impurity requires a positive energy");
  }
  ImpurityReport rep;
  rep.m_out = m_out_;
  rep.energy = energy;
  rep.normalization = normalization;
  rep.m_normalized = normalization == Normalization::UnitTrace ? m_out_ * (1.0 / energy) : m_out_;

  rep.minkowski_norm = minkowski(rep.m_normalized, rep.m_normalized);
  rep.imp = std::sqrt(2.0 * std::abs(rep.minkowski_norm));

  rep.M = hermitian_matrix(rep.m_normalized);
  const complex tr = rep.M.trace();
  const complex tr2 = (rep.M * rep.M).trace();
  rep.imp_trace = std::sqrt(std::abs((tr * tr - tr2).real()));

  const double r0 = rep.m_normalized.r0;
  const auto s = rep.m_normalized.spatial();
  rep.min_eigenvalue = r0 - std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
  rep.physical = is_physical(rep.m_normalized, 1e-8);
  return rep;
}

ImpurityReport impurity_pipeline(const DiscretePotential& potential, const IncomingState& state,
                                 const PipelineOptions& options, Normalization normalization) {
  const double energy = incoming_energy(state, options.quadrature);
  const HyperbolicQuaternion min = energy * t_in(state.s_in);
  const DeltaMResult dm = delta_m(potential, state, options);
  ImpurityReport rep = impurity(m_out(min, dm.delta_m), energy, normalization);
  rep.delta_m = dm.delta_m;
  rep.quadrature = dm.stats;
  return rep;
}

}  // namespace qmem
