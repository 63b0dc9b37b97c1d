#include "qmem/quaternion.hpp"

#include <cmath>

#include "qmem/error.hpp"

namespace qmem {

Quaternion& Quaternion::operator+=(const Quaternion& o) {
  c0 += o.c0;
  c1 += o.c1;
  c2 += o.c2;
  c3 += o.c3;
  return *this;
}

Quaternion& Quaternion::operator-=(const Quaternion& o) {
  c0 -= o.c0;
  c1 -= o.c1;
  c2 -= o.c2;
  c3 -= o.c3;
  return *this;
}

Quaternion& Quaternion::operator*=(complex s) {
  c0 *= s;
  c1 *= s;
  c2 *= s;
  c3 *= s;
  return *this;
}

double ImaginaryQuaternion::norm() const { return std::sqrt(a1 * a1 + a2 * a2 + a3 * a3); }

bool ImaginaryQuaternion::is_unit(double tol) const {
  return std::abs(a1 * a1 + a2 * a2 + a3 * a3 - 1.0) <= tol;
}

ImaginaryQuaternion ImaginaryQuaternion::normalized() const {
  const double n = norm();
  if (n == 0.0) throw InvalidArgument("cannot normalize the zero imaginary quaternion");
  return {a1 / n, a2 / n, a3 / n};
}

ImaginaryQuaternion& ImaginaryQuaternion::operator+=(const ImaginaryQuaternion& o) {
  a1 += o.a1;
  a2 += o.a2;
  a3 += o.a3;
  return *this;
}

ImaginaryQuaternion& ImaginaryQuaternion::operator*=(double s) {
  a1 *= s;
  a2 *= s;
  a3 *= s;
  return *this;
}

HyperbolicQuaternion& HyperbolicQuaternion::operator+=(const HyperbolicQuaternion& o) {
  r0 += o.r0;
  r1 += o.r1;
  r2 += o.r2;
  r3 += o.r3;
  return *this;
}

HyperbolicQuaternion& HyperbolicQuaternion::operator*=(double s) {
  r0 *= s;
  r1 *= s;
  r2 *= s;
  r3 *= s;
  return *this;
}

bool Spinor::is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

Spinor Spinor::normalized() const {
  const double n = std::sqrt(norm2());
  if (n == 0.0) throw InvalidArgument("cannot normalize the zero spinor");
  return {z1 / n, z2 / n};
}

Spinor& Spinor::operator+=(const Spinor& o) {
  z1 += o.z1;
  z2 += o.z2;
  return *this;
}

Spinor& Spinor::operator*=(complex s) {
  z1 *= s;
  z2 *= s;
  return *this;
}

Rotor::Rotor(double theta_, const ImaginaryQuaternion& axis_) : theta(theta_), axis(axis_) {
  if (!axis.is_unit()) throw InvalidArgument("rotor axis must be a unit imaginary quaternion");
}

Quaternion Rotor::quaternion() const {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c, s * axis.a1, s * axis.a2, s * axis.a3};
}

Quaternion mul(const Quaternion& a, const Quaternion& b) {
  // (a0 + a.s)(b0 + b.s) = a0 b0 - a.b + a0 b + b0 a - a x b
  return {
      a.c0 * b.c0 - a.c1 * b.c1 - a.c2 * b.c2 - a.c3 * b.c3,
      a.c0 * b.c1 + a.c1 * b.c0 - (a.c2 * b.c3 - a.c3 * b.c2),
      a.c0 * b.c2 + a.c2 * b.c0 - (a.c3 * b.c1 - a.c1 * b.c3),
      a.c0 * b.c3 + a.c3 * b.c0 - (a.c1 * b.c2 - a.c2 * b.c1),
  };
}

Quaternion commutator(const Quaternion& a, const Quaternion& b) { return mul(a, b) - mul(b, a); }

ImaginaryQuaternion commutator(const HyperbolicQuaternion& r, const ImaginaryQuaternion& q) {
  return {
      -2.0 * (r.r2 * q.a3 - r.r3 * q.a2),
      -2.0 * (r.r3 * q.a1 - r.r1 * q.a3),
      -2.0 * (r.r1 * q.a2 - r.r2 * q.a1),
  };
}

HyperbolicQuaternion dual(const HyperbolicQuaternion& r) { return {r.r0, -r.r1, -r.r2, -r.r3}; }

double minkowski(const HyperbolicQuaternion& r, const HyperbolicQuaternion& s) {
  return r.r1 * s.r1 + r.r2 * s.r2 + r.r3 * s.r3 - r.r0 * s.r0;
}

bool is_null(const HyperbolicQuaternion& r, double rel_tol) {
  return std::abs(minkowski(r, r)) <= rel_tol * r.r0 * r.r0;
}

bool is_physical(const HyperbolicQuaternion& r, double rel_tol) {
  return minkowski(r, r) <= rel_tol * r.r0 * r.r0;
}

Quaternion rotor_conjugate(const Quaternion& t, const Rotor& rotor, Conjugation orientation) {
  const Quaternion fwd = rotor.quaternion();
  const Quaternion inv = rotor.inverse().quaternion();
  return orientation == Conjugation::LeftInverse ? mul(mul(inv, t), fwd) : mul(mul(fwd, t), inv);
}

ImaginaryQuaternion rotor_conjugate(const ImaginaryQuaternion& t, const Rotor& rotor,
                                    Conjugation orientation) {
  const Quaternion r = rotor_conjugate(t.quaternion(), rotor, orientation);
  return {r.c1.real(), r.c2.real(), r.c3.real()};
}

namespace {

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

void require_unit(const ImaginaryQuaternion& u) {
  if (!u.is_unit()) throw InvalidArgument("axis must be a unit imaginary quaternion");
}

}  // namespace

std::array<ImaginaryQuaternion, 2> orthonormal_complement(const ImaginaryQuaternion& u) {
  require_unit(u);
  const auto uv = u.vec();
  std::array<double, 3> v{};
  for (int k = 0; k < 3; ++k) {
    std::array<double, 3> e{};
    e[k] = 1.0;
    const auto c = cross(uv, e);
    // "Not parallel" with a margin so the cross product is well conditioned.
    if (std::sqrt(dot(c, c)) > 1e-6) {
      v = c;
      break;
    }
  }
  const double vn = std::sqrt(dot(v, v));
  for (auto& x : v) x /= vn;
  const auto w = cross(uv, v);
  return {ImaginaryQuaternion{v[0], v[1], v[2]}, ImaginaryQuaternion{w[0], w[1], w[2]}};
}

ImaginaryQuaternion project_orthogonal(const Quaternion& t, const ImaginaryQuaternion& u) {
  require_unit(u);
  const std::array<double, 3> tv{t.c1.real(), t.c2.real(), t.c3.real()};
  const auto uv = u.vec();
  const double along = dot(tv, uv);
  return {tv[0] - along * uv[0], tv[1] - along * uv[1], tv[2] - along * uv[2]};
}

ImaginaryQuaternion project_orthogonal(const HyperbolicQuaternion& t, const ImaginaryQuaternion& u) {
  return project_orthogonal(t.quaternion(), u);
}

HyperbolicQuaternion spinor_to_null(const Spinor& s) {
  const complex cross12 = s.z1 * std::conj(s.z2);
  return {
      0.5 * (std::norm(s.z1) + std::norm(s.z2)),
      cross12.real(),
      -cross12.imag(),
      0.5 * (std::norm(s.z1) - std::norm(s.z2)),
  };
}

Spinor null_to_spinor(const HyperbolicQuaternion& r, double rel_tol) {
  if (r.r0 <= 0.0) throw InvalidArgument("null_to_spinor requires r0 > 0");
  if (!is_null(r, rel_tol)) throw InvalidArgument("null_to_spinor requires a null quaternion");
  // h = r / r0 is null with h0 = 1 and |h| = 1.
  const double h1 = r.r1 / r.r0;
  const double h2 = r.r2 / r.r0;
  const double h3 = r.r3 / r.r0;
  if (h3 <= 0.0) {
    // z = z1/z2 = (h1 - i h2) / (1 - h3)
    const complex z = complex{h1, -h2} / (1.0 - h3);
    const double z2 = 1.0 / std::sqrt(1.0 + std::norm(z));
    return {z * z2, z2};
  }
  // Same projection from the opposite pole: 1/z = (h1 + i h2) / (1 + h3).
  const complex zinv = complex{h1, h2} / (1.0 + h3);
  const double z1 = 1.0 / std::sqrt(1.0 + std::norm(zinv));
  return {z1, zinv * z1};
}

Spinor apply(const Quaternion& q, const Spinor& s) {
  // s0 -> I, s1 -> [[0,i],[i,0]], s2 -> [[0,1],[-1,0]], s3 -> [[i,0],[0,-i]]
  const complex i{0.0, 1.0};
  const complex m11 = q.c0 + i * q.c3;
  const complex m12 = i * q.c1 + q.c2;
  const complex m21 = i * q.c1 - q.c2;
  const complex m22 = q.c0 - i * q.c3;
  return {m11 * s.z1 + m12 * s.z2, m21 * s.z1 + m22 * s.z2};
}

Spinor apply(const ImaginaryQuaternion& q, const Spinor& s) { return apply(q.quaternion(), s); }

}  // namespace qmem
