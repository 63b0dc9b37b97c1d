#include "qmem/spectrum_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qmem/error.hpp"
#include "qmem/parallel.hpp"

namespace qmem {

namespace {

constexpr double kInv2Pi = 0.5 / std::numbers::pi;

double quad_form(const Eigen::MatrixXd& a, const std::vector<double>& v) {
  const Eigen::Map<const Eigen::VectorXd> x(v.data(), static_cast<Eigen::Index>(v.size()));
  return x.dot(a * x);
}

ImaginaryQuaternion unit_response(const DiscretePotential& potential, const IncomingState& state,
                                  double omega, const SolveOptions& solve) {
  const auto bc = boundary_coefficients(state, omega);
  const auto sol = solve_frequency(potential, bc.d_plus_left, bc.d_minus_right, omega, solve);
  ImaginaryQuaternion acc{};
  for (std::size_t j = 0; j < potential.size(); ++j) {
    acc += commutator(scattered_density(sol, j), potential.sites()[j].q);
  }
  return acc;
}

}  // namespace

HyperbolicQuaternion QuadraticModel::m_out(const std::vector<double>& w) const {
  if (w.size() != size()) throw InvalidArgument("weight vector does not match the model grid");
  HyperbolicQuaternion acc{};
  for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * basis[k];
  return acc;
}

double QuadraticModel::energy_of(const std::vector<double>& w) const {
  if (w.size() != size()) throw InvalidArgument("weight vector does not match the model grid");
  double acc = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) acc += w[k] * energy[k];
  return acc;
}

double QuadraticModel::objective(const std::vector<double>& w) const {
  if (w.size() != size()) throw InvalidArgument("weight vector does not match the model grid");
  return std::abs(quad_form(gram, w));
}

double QuadraticModel::normalized_impurity(const std::vector<double>& w) const {
  const double e = energy_of(w);
  if (!(e > 0.0)) throw InvalidArgument("weights carry no energy");
  return std::sqrt(2.0 * objective(w)) / e;
}

QuadraticModel build_model(const DiscretePotential& potential, const Spinor& s_in,
                           const std::vector<double>& omega_grid, const ModelOptions& options) {
  if (omega_grid.size() < 2) throw InvalidArgument("model grid needs at least two nodes");
  const std::size_t n = omega_grid.size();
  // Validates the grid and provides unit densities at every frequency.
  const IncomingState unit{Spectrum::tabulated(omega_grid, std::vector<double>(n, 1.0)), s_in,
                           options.parity};
  const HyperbolicQuaternion t = t_in(s_in);
  const double prefactor = energy_prefactor(options.parity);

  QuadraticModel model;
  model.omega = omega_grid;
  model.energy.assign(n, 0.0);
  model.m_in_part.assign(n, {});
  model.delta_m_part.assign(n, {});

  if (options.rule == QuadratureRule::Trapezoid) {
    std::vector<ImaginaryQuaternion> resp(n);
    parallel_for(n, options.threads, [&](std::size_t k) {
      resp[k] = unit_response(potential, unit, omega_grid[k], options.solve);
    });
    for (std::size_t k = 0; k < n; ++k) {
      const double left = k > 0 ? omega_grid[k] - omega_grid[k - 1] : 0.0;
      const double right = k + 1 < n ? omega_grid[k + 1] - omega_grid[k] : 0.0;
      const double nu = 0.5 * (left + right) * kInv2Pi;
      model.energy[k] = nu * prefactor * std::sqrt(omega_grid[k]);
      model.delta_m_part[k] = HyperbolicQuaternion::from_imaginary(nu * resp[k]);
    }
  } else {
    // Midpoint rule: each cell sees the mean of its two nodal densities.
    std::vector<ImaginaryQuaternion> resp(n - 1);
    parallel_for(n - 1, options.threads, [&](std::size_t i) {
      resp[i] = unit_response(potential, unit, 0.5 * (omega_grid[i] + omega_grid[i + 1]),
                              options.solve);
    });
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double mid = 0.5 * (omega_grid[i] + omega_grid[i + 1]);
      const double half = 0.5 * (omega_grid[i + 1] - omega_grid[i]) * kInv2Pi;
      for (std::size_t k : {i, i + 1}) {
        model.energy[k] += half * prefactor * std::sqrt(mid);
        model.delta_m_part[k] += HyperbolicQuaternion::from_imaginary(half * resp[i]);
      }
    }
  }

  model.basis.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    model.m_in_part[k] = model.energy[k] * t;
    model.basis[k] = model.m_in_part[k] + model.delta_m_part[k];
  }
  model.gram.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = k; l < n; ++l) {
      const double v = minkowski(model.basis[k], model.basis[l]);
      model.gram(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = v;
      model.gram(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = v;
    }
  }
  return model;
}

std::vector<double> project_simplex(const std::vector<double>& v) {
  if (v.empty()) throw InvalidArgument("cannot project an empty vector");
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) tau = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(v[i] - tau, 0.0);
  return out;
}

OptimizationResult minimize(const QuadraticModel& model, const std::vector<double>& initial,
                            const OptimizerOptions& options) {
  const std::size_t n = model.size();
  if (initial.size() != n) throw InvalidArgument("initial weights do not match the model grid");
  for (std::size_t k = 0; k < n; ++k) {
    if (!(initial[k] >= 0.0) || !std::isfinite(initial[k])) {
      throw InvalidArgument("initial weights must be finite and nonnegative");
    }
    if (!(model.energy[k] > 0.0)) throw InvalidArgument("model node without energy weight");
  }
  const double e0 = model.energy_of(initial);
  if (!(e0 > 0.0)) throw InvalidArgument("initial weights carry no energy");

  // Scaled Gram matrix in the simplex variables y_k = e_k w_k.
  Eigen::MatrixXd scaled = model.gram;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      scaled(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) /=
          model.energy[k] * model.energy[l];
    }
  }
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) y[k] = model.energy[k] * initial[k] / e0;

  auto signed_value = [&](const std::vector<double>& v) { return quad_form(scaled, v); };
  auto to_weights = [&](const std::vector<double>& v) {
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[k] = v[k] / model.energy[k];
    return w;
  };

  OptimizationResult result;
  double q = signed_value(y);
  double j = std::abs(q);
  double step = options.initial_step;
  result.trace.push_back({0, j, std::sqrt(2.0 * j), 0.0});

  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    if (j == 0.0) {
      result.converged = true;
      break;
    }
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd grad = (q >= 0.0 ? 2.0 : -2.0) * (scaled * yv);

    bool accepted = false;
    std::vector<double> trial(n);
    double q_trial = q;
    double j_trial = j;
    step *= 2.0;
    while (step > 1e-300) {
      std::vector<double> moved(n);
      for (std::size_t k = 0; k < n; ++k) {
        moved[k] = y[k] - step * grad(static_cast<Eigen::Index>(k));
      }
      trial = project_simplex(moved);
      double directional = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        directional += grad(static_cast<Eigen::Index>(k)) * (trial[k] - y[k]);
      }
      q_trial = signed_value(trial);
      j_trial = std::abs(q_trial);
      if (j_trial <= j + options.armijo * directional && j_trial <= j) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    result.iterations = it;
    if (!accepted) {
      // No descent direction left at working precision.
      result.converged = true;
      break;
    }
    const double decrease = j - j_trial;
    if (j_trial > j) result.monotone = false;
    y = trial;
    q = q_trial;
    j = j_trial;
    result.trace.push_back({it, j, std::sqrt(2.0 * j), step});
    if (decrease <= options.relative_decrease * (j + decrease)) {
      result.converged = true;
      break;
    }
  }

  result.weights = to_weights(y);
  result.objective = model.objective(result.weights);
  result.imp = std::sqrt(2.0 * result.objective);
  return result;
}

}  // namespace qmem
