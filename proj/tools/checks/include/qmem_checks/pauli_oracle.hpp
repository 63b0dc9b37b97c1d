#pragma once

// Reference realization of the quaternion basis by explicit Pauli matrices.
// Deliberately independent of the library's component algebra: products are
// plain 2x2 complex matrix products and exponentials use Eigen's matrix
// exponential.

#include <complex>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace qmem::oracle {

using cd = std::complex<double>;
using Mat = Eigen::Matrix2cd;

inline Mat pauli(int a) {
  Mat m;
  switch (a) {
    case 1: m << 0.0, 1.0, 1.0, 0.0; break;
    case 2: m << 0.0, cd{0.0, -1.0}, cd{0.0, 1.0}, 0.0; break;
    case 3: m << 1.0, 0.0, 0.0, -1.0; break;
    default: m = Mat::Identity(); break;
  }
  return m;
}

/// Basis element: index 0 is the identity, 1..3 are i * sigma_a.
inline Mat basis(int mu) { return mu == 0 ? Mat::Identity() : Mat(cd{0.0, 1.0} * pauli(mu)); }

inline Mat from_components(cd c0, cd c1, cd c2, cd c3) {
  return c0 * basis(0) + c1 * basis(1) + c2 * basis(2) + c3 * basis(3);
}

/// Hyperbolic quaternion (r0, r) realized as i r0 I + sum r_a i sigma_a.
inline Mat hyperbolic(double r0, double r1, double r2, double r3) {
  return from_components(cd{0.0, r0}, r1, r2, r3);
}

/// Components c_mu with m = sum c_mu basis(mu).
inline void components(const Mat& m, cd out[4]) {
  out[0] = 0.5 * m.trace();
  for (int a = 1; a <= 3; ++a) out[a] = (pauli(a) * m).trace() / cd{0.0, 2.0};
}

inline Mat exp(const Mat& m) { return m.exp(); }

}  // namespace qmem::oracle
