#pragma once

// Frequency-domain solver for a chain of delta interactions
//
//   omega phi = -phi'' - sum_j i q_j delta(x - x_j) phi_j
//
// using four-component coefficient vectors d = (d+, d-) with
// phi = d+ e^{ikx} + d- e^{-ikx}, k = sqrt(omega). Neighbouring sites are
// linked by d_{j+1} = (I - Omega_{j+1})(I - Omega_j) d_j, where the site
// blocks Omega_j are nilpotent.

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qmem/matrix_view.hpp"
#include "qmem/quaternion.hpp"

namespace qmem {

using Matrix4c = Eigen::Matrix<complex, 4, 4>;
using Vector4c = Eigen::Matrix<complex, 4, 1>;

struct Site {
  double x{};
  ImaginaryQuaternion q{};
};

/// Finite chain of delta sites with strictly increasing positions. Sites are
/// indexed 0..size()-1; outside the chain q vanishes.
class DiscretePotential {
 public:
  DiscretePotential() = default;
  explicit DiscretePotential(std::vector<Site> sites);

  /// Samples a continuum q(x) on [a, b] onto n cell-centred delta sites with
  /// weights q(x_j) * dx.
  static DiscretePotential from_continuum(const std::function<ImaginaryQuaternion(double)>& q,
                                          double a, double b, std::size_t n);

  const std::vector<Site>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }

 private:
  std::vector<Site> sites_;
};

/// (1 / 4k) [[q, w q], [-w* q, -q]] with w = exp(-2ik x). Throws for omega <= 0.
Matrix4c omega_block(const ImaginaryQuaternion& q, double x, double omega);

struct Propagation {
  /// R_j = (I - Omega_j)(I - 2 Omega_{j-1}) ... (I - 2 Omega_0), higher index leftmost.
  std::vector<Matrix4c> site;
  /// R = (I - 2 Omega_{n-1}) ... (I - 2 Omega_0).
  Matrix4c total = Matrix4c::Identity();
};

Propagation propagation_matrices(const DiscretePotential& potential, double omega);

struct SolveOptions {
  /// R4 blocks with a larger 2-norm condition number are rejected.
  double max_condition{1e12};
};

struct FrequencySolution {
  double omega{};
  std::vector<Vector4c> d;  ///< d_j at each site
  std::vector<Spinor> phi;  ///< phi(x_j)
  Vector4c a = Vector4c::Zero();
  Vector4c d_left = Vector4c::Zero();
  Vector4c d_right = Vector4c::Zero();
  double r4_condition{1.0};

  Spinor incoming_left() const { return {d_left(0), d_left(1)}; }
  Spinor outgoing_left() const { return {d_left(2), d_left(3)}; }
  Spinor outgoing_right() const { return {d_right(0), d_right(1)}; }
  Spinor incoming_right() const { return {d_right(2), d_right(3)}; }
};

/// Solves for given incoming blocks d+ (left) and d- (right). Throws
/// SingularBlockError when R4 is numerically singular.
FrequencySolution solve_frequency(const DiscretePotential& potential, const Spinor& d_plus_left,
                                  const Spinor& d_minus_right, double omega,
                                  const SolveOptions& options = {});

/// r~(x_j, omega) = i phi_j phi_j^dagger.
HyperbolicQuaternion scattered_density(const FrequencySolution& solution, std::size_t j);

/// phi(x) anywhere, from the piecewise-constant coefficients.
Spinor evaluate_field(const FrequencySolution& solution, const DiscretePotential& potential,
                      double x);

/// max_j |d_j - a + sum_k sg(j-k) Omega_k d_k| / (|a| + sum_k |Omega_k d_k|).
double summation_residual(const FrequencySolution& solution, const DiscretePotential& potential);

struct ScatteringMatrix {
  Matrix2c transmission_left;   ///< d+_right for unit d+_left, d-_right = 0
  Matrix2c reflection_left;     ///< d-_left  for unit d+_left, d-_right = 0
  Matrix2c transmission_right;  ///< d-_left  for unit d-_right, d+_left = 0
  Matrix2c reflection_right;    ///< d+_right for unit d-_right, d+_left = 0
};

ScatteringMatrix scattering_matrix(const DiscretePotential& potential, double omega,
                                   const SolveOptions& options = {});

}  // namespace qmem
