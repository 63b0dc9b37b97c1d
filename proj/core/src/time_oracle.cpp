#include "qmem/time_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qmem/error.hpp"

namespace qmem {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Vector2c> to_vectors(const std::vector<Spinor>& values) {
  std::vector<Vector2c> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = to_vector(values[i]);
  return out;
}

void check_profile(const std::vector<double>& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    throw InvalidArgument(std::string("separable profile ") + name + " must match the grid size");
  }
  double peak = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string("non-finite profile ") + name);
    peak = std::max(peak, std::abs(x));
  }
  if (n > 0 && (std::abs(v.front()) > 1e-12 * peak || std::abs(v.back()) > 1e-12 * peak)) {
    throw InvalidArgument(std::string("separable profile ") + name +
                          " must vanish at the grid ends");
  }
}

complex weighted_sum_component(const std::vector<double>& w, const std::vector<Vector2c>& psi,
                               int c) {
  complex acc{};
  for (std::size_t i = 0; i < psi.size(); ++i) acc += w[i] * psi[i](c);
  return acc;
}

Vector2c weighted_sum(const std::vector<double>& w, const std::vector<Vector2c>& psi) {
  return {weighted_sum_component(w, psi, 0), weighted_sum_component(w, psi, 1)};
}

}  // namespace

std::size_t UniformGrid::nearest(double x) const {
  const double s = std::round((x - x0) / dx);
  if (s < 0.0) return 0;
  return std::min(static_cast<std::size_t>(s), n - 1);
}

UniformGrid UniformGrid::symmetric(double half_width, std::size_t n) {
  if (!(half_width > 0.0) || n < 3) throw InvalidArgument("grid needs half_width > 0 and n >= 3");
  return {-half_width, 2.0 * half_width / static_cast<double>(n - 1), n};
}

double GridField::norm2() const {
  double acc = 0.0;
  for (const auto& v : values) acc += v.norm2();
  return acc * grid.dx;
}

Matrix2c hermitian_coupling(const ImaginaryQuaternion& q) {
  return complex{0.0, -1.0} * realization(q);
}

CrankNicolson::CrankNicolson(const UniformGrid& grid, const DiscretePotential& local,
                             const std::optional<NonlocalSeparable>& nonlocal, double dt)
    : grid_(grid), dt_(dt), nonlocal_(nonlocal) {
  if (!(grid.dx > 0.0) || grid.n < 3) throw InvalidArgument("grid needs dx > 0 and n >= 3");
  if (!(std::abs(dt) > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be nonzero");
  const std::size_t n = grid.n;
  const double dx = grid.dx;

  potential_.assign(n, Matrix2c::Zero());
  for (const auto& s : local.sites()) {
    if (!(s.x > grid.x0 && s.x < grid.x_last())) {
      throw InvalidArgument("potential site lies outside the grid interior");
    }
    const std::size_t node = grid.nearest(s.x);
    if (node == 0 || node == n - 1) throw InvalidArgument("potential site maps onto a grid end");
    site_nodes_.push_back(node);
    potential_[node] += hermitian_coupling(s.q) / dx;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!potential_[i].isZero(0.0)) active_.push_back(i);
  }

  if (nonlocal_) {
    check_profile(nonlocal_->V_alpha, n, "V_alpha");
    check_profile(nonlocal_->V_beta, n, "V_beta");
    double aa = 0.0, bb = 0.0, ab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      aa += nonlocal_->V_alpha[i] * nonlocal_->V_alpha[i];
      bb += nonlocal_->V_beta[i] * nonlocal_->V_beta[i];
      ab += nonlocal_->V_alpha[i] * nonlocal_->V_beta[i];
    }
    if (aa > 0.0 && bb > 0.0 && ab * ab < (1.0 - 1e-12) * aa * bb) {
      throw InvalidArgument("V_alpha and V_beta must be proportional for a self-adjoint kernel");
    }
    coupling_ = hermitian_coupling(nonlocal_->q);
  }

  const complex half_i_tau{0.0, 0.5 * dt};
  off_diag_ = -half_i_tau / (dx * dx);
  const complex centre = 1.0 + 2.0 * half_i_tau / (dx * dx);

  inv_pivot_.resize(n);
  Matrix2c pivot = centre * Matrix2c::Identity() + half_i_tau * potential_[0];
  inv_pivot_[0] = pivot.inverse();
  for (std::size_t i = 1; i < n; ++i) {
    pivot = centre * Matrix2c::Identity() + half_i_tau * potential_[i] -
            (off_diag_ * off_diag_) * inv_pivot_[i - 1];
    inv_pivot_[i] = pivot.inverse();
  }

  if (nonlocal_) {
    // U_i = (i tau / 2) V_alpha(x_i) S, W = [V_beta(x_j) dx I].
    for (int c = 0; c < 2; ++c) {
      std::vector<Vector2c> rhs(n);
      for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = half_i_tau * nonlocal_->V_alpha[i] * coupling_.col(c);
      }
      z_cols_[c] = solve_tridiagonal(std::move(rhs));
    }
    std::vector<double> wb(n);
    for (std::size_t i = 0; i < n; ++i) wb[i] = nonlocal_->V_beta[i] * dx;
    Matrix2c cap = Matrix2c::Identity();
    for (int c = 0; c < 2; ++c) cap.col(c) += weighted_sum(wb, z_cols_[c]);
    capacitance_inv_ = cap.inverse();
  }
}

std::vector<Vector2c> CrankNicolson::solve_tridiagonal(std::vector<Vector2c> rhs) const {
  const std::size_t n = rhs.size();
  for (std::size_t i = 1; i < n; ++i) rhs[i] -= off_diag_ * (inv_pivot_[i - 1] * rhs[i - 1]);
  rhs[n - 1] = inv_pivot_[n - 1] * rhs[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = inv_pivot_[i] * (rhs[i] - off_diag_ * rhs[i + 1]);
  return rhs;
}

std::vector<Vector2c> CrankNicolson::apply_rhs(const std::vector<Vector2c>& psi) const {
  // (I - i tau/2 H) psi
  const std::size_t n = psi.size();
  const double inv_dx2 = 1.0 / (grid_.dx * grid_.dx);
  const complex half_i_tau{0.0, 0.5 * dt_};
  std::vector<Vector2c> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vector2c lap = -2.0 * psi[i];
    if (i > 0) lap += psi[i - 1];
    if (i + 1 < n) lap += psi[i + 1];
    out[i] = psi[i] + half_i_tau * inv_dx2 * lap;
  }
  for (std::size_t i : active_) out[i] -= half_i_tau * (potential_[i] * psi[i]);
  if (nonlocal_) {
    const Vector2c cb = grid_.dx * weighted_sum(nonlocal_->V_beta, psi);
    const Vector2c s_cb = coupling_ * cb;
    for (std::size_t i = 0; i < n; ++i) {
      if (nonlocal_->V_alpha[i] != 0.0) out[i] -= half_i_tau * nonlocal_->V_alpha[i] * s_cb;
    }
  }
  return out;
}

void CrankNicolson::step(GridField& field) const {
  if (field.values.size() != grid_.n) throw InvalidArgument("field does not match the grid");
  std::vector<Vector2c> y = solve_tridiagonal(apply_rhs(to_vectors(field.values)));
  if (nonlocal_) {
    const Vector2c wy = grid_.dx * weighted_sum(nonlocal_->V_beta, y);
    const Vector2c coeff = capacitance_inv_ * wy;
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] -= z_cols_[0][i] * coeff(0) + z_cols_[1][i] * coeff(1);
    }
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!std::isfinite(y[i](0).real()) || !std::isfinite(y[i](0).imag()) ||
        !std::isfinite(y[i](1).real()) || !std::isfinite(y[i](1).imag())) {
      throw NumericalError("Crank-Nicolson step produced non-finite values");
    }
    field.values[i] = to_spinor(y[i]);
  }
  field.t += dt_;
}

namespace {
const double kTripleJump = 1.0 / (2.0 - std::cbrt(2.0));
}

FourthOrderStepper::FourthOrderStepper(const UniformGrid& grid, const DiscretePotential& local,
                                       const std::optional<NonlocalSeparable>& nonlocal, double dt)
    : dt_(dt),
      outer_(grid, local, nonlocal, kTripleJump * dt),
      inner_(grid, local, nonlocal, (1.0 - 2.0 * kTripleJump) * dt) {}

void FourthOrderStepper::step(GridField& field) const {
  const double t0 = field.t;
  outer_.step(field);
  inner_.step(field);
  outer_.step(field);
  field.t = t0 + dt_;
}

GridField evolve(GridField field, const DiscretePotential& potential, double dt,
                 std::size_t n_steps) {
  const CrankNicolson cn(field.grid, potential, std::nullopt, dt);
  for (std::size_t s = 0; s < n_steps; ++s) cn.step(field);
  return field;
}

GridField evolve(GridField field, const NonlocalSeparable& potential, double dt,
                 std::size_t n_steps) {
  const CrankNicolson cn(field.grid, DiscretePotential{}, potential, dt);
  for (std::size_t s = 0; s < n_steps; ++s) cn.step(field);
  return field;
}

ReducedDensity reduced_density(const GridField& field) {
  HyperbolicQuaternion acc{};
  for (const auto& v : field.values) acc += density_quaternion(v);
  ReducedDensity out;
  out.m = field.grid.dx * acc;
  out.rho = hermitian_matrix(out.m);
  return out;
}

Matrix2c flux_matrix(const GridField& field, std::size_t j) {
  if (j == 0 || j + 1 >= field.values.size()) {
    throw InvalidArgument("flux_matrix needs an interior node");
  }
  const Vector2c psi = to_vector(field.values[j]);
  const Vector2c dpsi =
      (to_vector(field.values[j + 1]) - to_vector(field.values[j - 1])) / (2.0 * field.grid.dx);
  const Matrix2c a = dpsi * psi.adjoint();
  return complex{0.0, -1.0} * (a - a.adjoint());
}

HyperbolicQuaternion nonlocal_density(const GridField& field, const NonlocalSeparable& potential) {
  const auto psi = to_vectors(field.values);
  const Vector2c ca = field.grid.dx * weighted_sum(potential.V_alpha, psi);
  const Vector2c cb = field.grid.dx * weighted_sum(potential.V_beta, psi);
  return from_hermitian(cb * ca.adjoint());
}

HyperbolicQuaternion commutator_rate(const GridField& field, const CrankNicolson& stepper,
                                     const DiscretePotential& local,
                                     const std::optional<NonlocalSeparable>& nonlocal) {
  ImaginaryQuaternion acc{};
  const auto& nodes = stepper.site_nodes();
  if (nodes.size() != local.size()) {
    throw InvalidArgument("stepper was built for a different local potential");
  }
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    acc += commutator(density_quaternion(field.values[nodes[j]]), local.sites()[j].q);
  }
  if (nonlocal) acc += commutator(nonlocal_density(field, *nonlocal), nonlocal->q);
  return HyperbolicQuaternion::from_imaginary(acc);
}

GaussianPulse matching_pulse(const PacketSpec& packet) {
  GaussianPulse p;
  p.k0 = packet.k0;
  p.sigma_k = packet.sigma_k;
  // One-sided packets carry half the two-sided energy for the same amplitude.
  p.energy = packet.parity == Parity::None ? 2.0 * packet.energy : packet.energy;
  return p;
}

GridField synthesize_packet(const UniformGrid& grid, const PacketSpec& packet) {
  if (!(packet.sigma_k > 0.0) || !(packet.energy >= 0.0)) {
    throw InvalidArgument("packet needs sigma_k > 0 and energy >= 0");
  }
  if (!packet.s_in.is_normalized()) throw InvalidArgument("packet s_in must be normalized");
  const GaussianPulse pulse = matching_pulse(packet);
  const double sigma = packet.sigma_k;
  const double a0 = std::sqrt(pulse.energy / (4.0 * kPi * sigma * std::sqrt(2.0 * kPi)));
  const double amp = a0 * 2.0 * sigma * std::sqrt(kPi);
  auto left = [&](double x) {
    const double y = x + packet.X0;
    return amp * std::exp(-sigma * sigma * y * y) * std::polar(1.0, packet.k0 * y);
  };
  GridField field{grid, std::vector<Spinor>(grid.n), 0.0};
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double x = grid.x(i);
    complex a{};
    switch (packet.parity) {
      case Parity::Even: a = left(x) + left(-x); break;
      case Parity::Odd: a = -left(x) + left(-x); break;
      case Parity::None: a = left(x); break;
    }
    field.values[i] = a * packet.s_in;
  }
  return field;
}

ScatteringRun run_scattering(GridField initial, const DiscretePotential& local,
                             const std::optional<NonlocalSeparable>& nonlocal,
                             const ScatteringRunOptions& options) {
  const CrankNicolson cn(initial.grid, local, nonlocal, options.dt);
  const UniformGrid& grid = initial.grid;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  if (!local.empty()) {
    lo = local.sites().front().x;
    hi = local.sites().back().x;
  }
  if (nonlocal) {
    for (std::size_t i = 0; i < grid.n; ++i) {
      if (nonlocal->V_alpha[i] != 0.0 || nonlocal->V_beta[i] != 0.0) {
        lo = std::min(lo, grid.x(i));
        hi = std::max(hi, grid.x(i));
      }
    }
  }
  if (!(hi >= lo)) throw InvalidArgument("run_scattering needs a nonempty potential");
  lo -= options.region_padding;
  hi += options.region_padding;

  ScatteringRun run;
  run.initial = reduced_density(initial);
  const double norm0 = initial.norm2();
  const double m00 = run.initial.m.r0;
  if (!(norm0 > 0.0)) throw InvalidArgument("initial field is zero");

  auto region_probability = [&](const GridField& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double x = grid.x(i);
      if (x >= lo && x <= hi) acc += f.values[i].norm2();
    }
    return acc * grid.dx / norm0;
  };
  auto edge_ratio = [&](const GridField& f) {
    double peak = 0.0;
    for (const auto& v : f.values) peak = std::max(peak, v.norm2());
    const double edge = std::max({f.values[0].norm2(), f.values[1].norm2(),
                                  f.values[grid.n - 2].norm2(), f.values[grid.n - 1].norm2()});
    return peak > 0.0 ? std::sqrt(edge / peak) : 0.0;
  };
  auto record = [&](const GridField& f) {
    const ReducedDensity rd = reduced_density(f);
    const double tr = 2.0 * rd.m.r0;
    run.series.push_back({f.t, tr, rd.m, tr > 0.0 ? impurity(rd.m, tr).imp : 0.0});
  };

  GridField field = std::move(initial);
  bool armed = region_probability(field) >= options.stop_probability;
  run.max_edge_ratio = edge_ratio(field);
  if (options.record_every > 0) record(field);

  while (run.steps < options.max_steps) {
    cn.step(field);
    ++run.steps;
    const double n2 = field.norm2();
    run.norm_drift = std::max(run.norm_drift, std::abs(n2 / norm0 - 1.0));
    run.max_edge_ratio = std::max(run.max_edge_ratio, edge_ratio(field));
    if (options.record_every > 0 && run.steps % options.record_every == 0) record(field);
    const double p = region_probability(field);
    if (!armed) {
      armed = p >= options.stop_probability;
    } else if (p < options.stop_probability) {
      run.stopped = true;
      break;
    }
  }

  if (options.strict && run.max_edge_ratio > options.edge_tolerance) {
    throw ToleranceError("wave packet reached the grid ends (edge ratio " +
                         std::to_string(run.max_edge_ratio) + ")");
  }
  if (options.strict && !run.stopped) {
    throw ToleranceError("interaction region did not empty within max_steps");
  }

  run.final = reduced_density(field);
  run.trace_m0_drift = m00 > 0.0 ? std::abs(run.final.m.r0 - m00) / m00 : 0.0;
  run.report = impurity(run.final.m, 2.0 * run.final.m.r0);
  if (options.record_every > 0 && run.series.back().t != field.t) record(field);
  run.final_field = std::move(field);
  return run;
}

}  // namespace qmem
