#include "qmem/memory_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmem/error.hpp"
#include "qmem/quadrature.hpp"

namespace qmem {

namespace {
constexpr double kPi = std::numbers::pi;
}

Spectrum Spectrum::tabulated(std::vector<double> omega, std::vector<double> density,
                             QuadratureRule rule) {
  if (omega.empty()) throw InvalidArgument("spectrum grid is empty");
  if (omega.size() != density.size()) {
    throw InvalidArgument("spectrum grid and density differ in length");
  }
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0) || !std::isfinite(omega[i])) {
      throw InvalidArgument("spectrum frequencies must be finite and positive");
    }
    if (i > 0 && !(omega[i] > omega[i - 1])) {
      throw InvalidArgument("spectrum frequencies must be strictly increasing");
    }
    if (!(density[i] >= 0.0) || !std::isfinite(density[i])) {
      throw InvalidArgument("spectral density must be finite and non-negative");
    }
  }
  Spectrum s;
  s.kind_ = Kind::Tabulated;
  s.rule_ = rule;
  s.omega_ = std::move(omega);
  s.density_ = std::move(density);
  return s;
}

Spectrum Spectrum::rectangular(double omega0, double K) {
  if (!(omega0 > 0.0)) throw InvalidArgument("rectangular pulse needs omega0 > 0");
  if (!(K > 1.0)) throw InvalidArgument("rectangular pulse needs K > 1");
  Spectrum s;
  s.kind_ = Kind::Rectangular;
  s.rect_ = {omega0, K};
  return s;
}

Spectrum Spectrum::gaussian(const GaussianPulse& pulse) {
  if (!(pulse.sigma_k > 0.0)) throw InvalidArgument("gaussian pulse needs sigma_k > 0");
  if (!(pulse.energy >= 0.0)) throw InvalidArgument("gaussian pulse needs energy >= 0");
  if (!(pulse.span > 0.0)) throw InvalidArgument("gaussian pulse needs span > 0");
  if (!(pulse.k0 - pulse.span * pulse.sigma_k > 0.0)) {
    throw InvalidArgument("gaussian pulse support must contain only positive frequencies");
  }
  Spectrum s;
  s.kind_ = Kind::Gaussian;
  s.gauss_ = pulse;
  // E = 4 pi int |A|^2 dk = 4 pi A0^2 sigma sqrt(2 pi)
  s.gauss_amplitude2_ = pulse.energy / (4.0 * kPi * pulse.sigma_k * std::sqrt(2.0 * kPi));
  return s;
}

std::pair<double, double> Spectrum::support() const {
  switch (kind_) {
    case Kind::Tabulated:
      return {omega_.front(), omega_.back()};
    case Kind::Rectangular:
      return {rect_.omega0, rect_.K * rect_.omega0};
    case Kind::Gaussian: {
      const double lo = gauss_.k0 - gauss_.span * gauss_.sigma_k;
      const double hi = gauss_.k0 + gauss_.span * gauss_.sigma_k;
      return {lo * lo, hi * hi};
    }
  }
  return {0.0, 0.0};
}

double Spectrum::density(double omega) const {
  const auto [lo, hi] = support();
  if (omega < lo || omega > hi) return 0.0;
  switch (kind_) {
    case Kind::Tabulated: {
      if (omega_.size() == 1) return scale_ * density_.front();
      const auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
      if (it == omega_.end()) return scale_ * density_.back();
      const std::size_t i = static_cast<std::size_t>(it - omega_.begin());
      const double t = (omega - omega_[i - 1]) / (omega_[i] - omega_[i - 1]);
      return scale_ * ((1.0 - t) * density_[i - 1] + t * density_[i]);
    }
    case Kind::Rectangular:
      return scale_ * 2.0 * kPi * std::pow(omega, -1.5);
    case Kind::Gaussian: {
      const double k = std::sqrt(omega);
      const double z = (k - gauss_.k0) / gauss_.sigma_k;
      return scale_ * kPi * kPi * gauss_amplitude2_ * std::exp(-0.5 * z * z) / omega;
    }
  }
  return 0.0;
}

double Spectrum::weighted_density_derivative(double omega) const {
  switch (kind_) {
    case Kind::Tabulated: {
      if (omega_.size() < 2) throw InvalidArgument("derivative needs at least two grid nodes");
      auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
      std::size_t i = static_cast<std::size_t>(it - omega_.begin());
      i = std::clamp<std::size_t>(i, 1, omega_.size() - 1);
      const double h0 = std::pow(omega_[i - 1], 1.5) * density_[i - 1];
      const double h1 = std::pow(omega_[i], 1.5) * density_[i];
      return scale_ * (h1 - h0) / (omega_[i] - omega_[i - 1]);
    }
    case Kind::Rectangular:
      return 0.0;
    case Kind::Gaussian: {
      // h(omega) = pi^2 A0^2 k exp(-(k-k0)^2 / 2 sigma^2), dh/domega = (dh/dk) / (2k)
      const double k = std::sqrt(omega);
      const double s2 = gauss_.sigma_k * gauss_.sigma_k;
      const double g = std::exp(-0.5 * (k - gauss_.k0) * (k - gauss_.k0) / s2);
      return scale_ * kPi * kPi * gauss_amplitude2_ * (1.0 - k * (k - gauss_.k0) / s2) * g /
             (2.0 * k);
    }
  }
  return 0.0;
}

std::optional<double> Spectrum::analytic_energy() const {
  switch (kind_) {
    case Kind::Tabulated:
      return std::nullopt;
    case Kind::Rectangular:
      return scale_ * 4.0 * std::log(rect_.K);
    case Kind::Gaussian:
      // Truncation at `span` sigmas is below double resolution for span >= 10.
      return scale_ * gauss_.energy;
  }
  return std::nullopt;
}

Spectrum Spectrum::scaled(double c) const {
  if (!(c >= 0.0)) throw InvalidArgument("spectrum scale must be non-negative");
  Spectrum s = *this;
  s.scale_ *= c;
  return s;
}

IncomingState::IncomingState(Spectrum spectrum_, const Spinor& s_in_, Parity parity_)
    : spectrum(std::move(spectrum_)), s_in(s_in_), parity(parity_) {
  if (!s_in.is_normalized()) throw InvalidArgument("incoming memory state must be normalized");
}

HyperbolicQuaternion t_in(const Spinor& s_in) {
  if (!s_in.is_normalized()) throw InvalidArgument("t_in requires a normalized spinor");
  return spinor_to_null(s_in);
}

double energy_prefactor(Parity parity) { return parity == Parity::None ? 2.0 : 4.0; }

double incoming_energy(const IncomingState& state, const QuadratureOptions& options) {
  const auto integral = integrate_spectrum<1>(
      state.spectrum,
      [](double omega, double density) { return Vec<1>{density * std::sqrt(omega)}; }, options);
  return energy_prefactor(state.parity) * integral.value[0] / (2.0 * kPi);
}

HyperbolicQuaternion m_in(const IncomingState& state, const QuadratureOptions& options) {
  return incoming_energy(state, options) * t_in(state.s_in);
}

BoundaryBlocks boundary_coefficients(const IncomingState& state, double omega) {
  const auto [lo, hi] = state.spectrum.support();
  if (!(omega >= lo && omega <= hi)) {
    throw InvalidArgument("omega lies outside the spectrum's support");
  }
  const double f = std::sqrt(state.spectrum.density(omega));
  const Spinor incoming = complex{f} * state.s_in;
  switch (state.parity) {
    case Parity::Even:
      return {incoming, incoming};
    case Parity::Odd:
      return {complex{-1.0} * incoming, incoming};
    case Parity::None:
      return {incoming, Spinor{}};
  }
  return {};
}

HyperbolicQuaternion density_quaternion(const Spinor& psi) { return spinor_to_null(psi); }

}  // namespace qmem
