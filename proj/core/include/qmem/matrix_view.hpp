#pragma once

// 2x2 complex matrix realizations of the quaternion types. Component form is
// canonical; these views exist for code that needs explicit block matrices
// (the transfer solver) or explicit density matrices (impurity reports).

#include <Eigen/Dense>

#include "qmem/quaternion.hpp"

namespace qmem {

using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

inline Matrix2c realization(const Quaternion& q) {
  const complex i{0.0, 1.0};
  Matrix2c m;
  m << q.c0 + i * q.c3, i * q.c1 + q.c2,  //
      i * q.c1 - q.c2, q.c0 - i * q.c3;
  return m;
}

inline Matrix2c realization(const ImaginaryQuaternion& q) { return realization(q.quaternion()); }
inline Matrix2c realization(const HyperbolicQuaternion& r) { return realization(r.quaternion()); }

/// Hermitian matrix -i * realization(r) = r0 I + r_vec . sigma.
inline Matrix2c hermitian_matrix(const HyperbolicQuaternion& r) {
  Matrix2c m;
  m << complex{r.r0 + r.r3, 0.0}, complex{r.r1, -r.r2},  //
      complex{r.r1, r.r2}, complex{r.r0 - r.r3, 0.0};
  return m;
}

/// Inverse of hermitian_matrix; the anti-Hermitian part of m is discarded.
inline HyperbolicQuaternion from_hermitian(const Matrix2c& m) {
  return {0.5 * (m(0, 0) + m(1, 1)).real(), 0.5 * (m(0, 1) + m(1, 0)).real(),
          0.5 * (m(1, 0) - m(0, 1)).imag(), 0.5 * (m(0, 0) - m(1, 1)).real()};
}

inline Vector2c to_vector(const Spinor& s) { return Vector2c{s.z1, s.z2}; }
inline Spinor to_spinor(const Vector2c& v) { return {v(0), v(1)}; }

}  // namespace qmem
