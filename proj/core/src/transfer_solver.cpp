#include "qmem/transfer_solver.hpp"

#include <cmath>
#include <limits>

#include "qmem/error.hpp"
#include "qmem/memory_state.hpp"

namespace qmem {

DiscretePotential::DiscretePotential(std::vector<Site> sites) : sites_(std::move(sites)) {
  for (std::size_t j = 0; j < sites_.size(); ++j) {
    const auto& s = sites_[j];
    if (!std::isfinite(s.x) || !std::isfinite(s.q.a1) || !std::isfinite(s.q.a2) ||
        !std::isfinite(s.q.a3)) {
      throw InvalidArgument("potential sites must be finite");
    }
    if (j > 0 && !(s.x > sites_[j - 1].x)) {
      throw InvalidArgument("potential site positions must be strictly increasing");
    }
  }
}

DiscretePotential DiscretePotential::from_continuum(
    const std::function<ImaginaryQuaternion(double)>& q, double a, double b, std::size_t n) {
  if (!(b > a) || n == 0) throw InvalidArgument("continuum sampling needs b > a and n > 0");
  const double dx = (b - a) / static_cast<double>(n);
  std::vector<Site> sites(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = a + (static_cast<double>(j) + 0.5) * dx;
    sites[j] = {x, dx * q(x)};
  }
  return DiscretePotential(std::move(sites));
}

Matrix4c omega_block(const ImaginaryQuaternion& q, double x, double omega) {
  if (!(omega > 0.0)) throw InvalidArgument("omega_block requires omega > 0");
  const double k = std::sqrt(omega);
  const complex w = std::polar(1.0, -2.0 * k * x);
  const Matrix2c qm = realization(q) / (4.0 * k);
  Matrix4c block;
  block.topLeftCorner<2, 2>() = qm;
  block.topRightCorner<2, 2>() = w * qm;
  block.bottomLeftCorner<2, 2>() = -std::conj(w) * qm;
  block.bottomRightCorner<2, 2>() = -qm;
  return block;
}

Propagation propagation_matrices(const DiscretePotential& potential, double omega) {
  if (!(omega > 0.0)) throw InvalidArgument("propagation_matrices requires omega > 0");
  Propagation out;
  out.site.reserve(potential.size());
  const Matrix4c id = Matrix4c::Identity();
  Matrix4c running = id;  // product of (I - 2 Omega_k) for k < j
  for (const auto& s : potential.sites()) {
    const Matrix4c om = omega_block(s.q, s.x, omega);
    out.site.push_back((id - om) * running);
    running = (id - 2.0 * om) * running;
  }
  out.total = running;
  return out;
}

FrequencySolution solve_frequency(const DiscretePotential& potential, const Spinor& d_plus_left,
                                  const Spinor& d_minus_right, double omega,
                                  const SolveOptions& options) {
  if (!(omega > 0.0)) throw InvalidArgument("solve_frequency requires omega > 0");
  const Propagation prop = propagation_matrices(potential, omega);
  const Matrix4c& R = prop.total;
  const Matrix2c R3 = R.bottomLeftCorner<2, 2>();
  const Matrix2c R4 = R.bottomRightCorner<2, 2>();

  Eigen::JacobiSVD<Matrix2c> svd(R4, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double condition =
      sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
  if (!(condition <= options.max_condition)) throw SingularBlockError(omega, condition);

  const Vector2c dpl = to_vector(d_plus_left);
  const Vector2c dmr = to_vector(d_minus_right);
  const Vector2c dml = svd.solve(dmr - R3 * dpl);

  FrequencySolution sol;
  sol.omega = omega;
  sol.r4_condition = condition;
  sol.d_left << dpl, dml;
  sol.d_right = R * sol.d_left;
  sol.a = 0.5 * (Matrix4c::Identity() + R) * sol.d_left;

  const double k = std::sqrt(omega);
  sol.d.reserve(potential.size());
  sol.phi.reserve(potential.size());
  for (std::size_t j = 0; j < potential.size(); ++j) {
    const Vector4c dj = prop.site[j] * sol.d_left;
    const double x = potential.sites()[j].x;
    const complex ep = std::polar(1.0, k * x);
    const complex em = std::conj(ep);
    sol.d.push_back(dj);
    sol.phi.push_back({dj(0) * ep + dj(2) * em, dj(1) * ep + dj(3) * em});
  }
  return sol;
}

HyperbolicQuaternion scattered_density(const FrequencySolution& solution, std::size_t j) {
  return density_quaternion(solution.phi.at(j));
}

Spinor evaluate_field(const FrequencySolution& solution, const DiscretePotential& potential,
                      double x) {
  const auto& sites = potential.sites();
  Vector4c d;
  if (sites.empty() || x < sites.front().x) {
    d = solution.d_left;
  } else if (x > sites.back().x) {
    d = solution.d_right;
  } else {
    std::size_t j = 0;
    while (j + 1 < sites.size() && sites[j + 1].x <= x) ++j;
    if (x == sites[j].x) return solution.phi[j];
    d = (Matrix4c::Identity() - omega_block(sites[j].q, sites[j].x, solution.omega)) *
        solution.d[j];
  }
  const double k = std::sqrt(solution.omega);
  const complex ep = std::polar(1.0, k * x);
  const complex em = std::conj(ep);
  return {d(0) * ep + d(2) * em, d(1) * ep + d(3) * em};
}

double summation_residual(const FrequencySolution& solution, const DiscretePotential& potential) {
  const auto& sites = potential.sites();
  std::vector<Vector4c> terms(sites.size());
  double scale = solution.a.norm();
  for (std::size_t k = 0; k < sites.size(); ++k) {
    terms[k] = omega_block(sites[k].q, sites[k].x, solution.omega) * solution.d[k];
    scale += terms[k].norm();
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < sites.size(); ++j) {
    Vector4c r = solution.d[j] - solution.a;
    for (std::size_t k = 0; k < sites.size(); ++k) {
      if (k < j) r += terms[k];
      if (k > j) r -= terms[k];
    }
    worst = std::max(worst, r.norm());
  }
  return scale > 0.0 ? worst / scale : worst;
}

ScatteringMatrix scattering_matrix(const DiscretePotential& potential, double omega,
                                   const SolveOptions& options) {
  const Matrix4c R = propagation_matrices(potential, omega).total;
  const Matrix2c R1 = R.topLeftCorner<2, 2>();
  const Matrix2c R2 = R.topRightCorner<2, 2>();
  const Matrix2c R3 = R.bottomLeftCorner<2, 2>();
  const Matrix2c R4 = R.bottomRightCorner<2, 2>();
  Eigen::JacobiSVD<Matrix2c> svd(R4, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double condition =
      sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
  if (!(condition <= options.max_condition)) throw SingularBlockError(omega, condition);
  const Matrix2c R4inv = svd.solve(Matrix2c::Identity());
  ScatteringMatrix s;
  s.reflection_left = -R4inv * R3;
  s.transmission_left = R1 + R2 * s.reflection_left;
  s.transmission_right = R4inv;
  s.reflection_right = R2 * R4inv;
  return s;
}

}  // namespace qmem
