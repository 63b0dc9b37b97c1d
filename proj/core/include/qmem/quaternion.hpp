#pragma once

// Pauli-basis quaternion algebra.
//
// Every element is stored as coefficients over {s0, s1, s2, s3} where s0 is
// the 2x2 identity and sa = i*sigma_a ("breve" sigma). The structure constants
//   sa*sa = -s0,   sa*sb = -eps_abc sc  (a != b)
// define the product; no matrices are involved.

#include <array>
#include <complex>

namespace qmem {

using complex = std::complex<double>;

struct ImaginaryQuaternion;
struct HyperbolicQuaternion;

/// General element c0*s0 + sum_a ca*sa with complex coefficients.
struct Quaternion {
  complex c0{};
  complex c1{};
  complex c2{};
  complex c3{};

  static Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }

  Quaternion& operator+=(const Quaternion& o);
  Quaternion& operator-=(const Quaternion& o);
  Quaternion& operator*=(complex s);

  friend Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
  friend Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
  friend Quaternion operator*(complex s, Quaternion a) { return a *= s; }
  friend Quaternion operator*(Quaternion a, complex s) { return a *= s; }
  friend Quaternion operator-(Quaternion a) { return a *= -1.0; }
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Real combination a1*s1 + a2*s2 + a3*s3. Models interaction strengths q
/// and unit axes u. Its 2x2 realization is skew-adjoint.
struct ImaginaryQuaternion {
  double a1{};
  double a2{};
  double a3{};

  std::array<double, 3> vec() const { return {a1, a2, a3}; }
  double norm() const;
  bool is_unit(double tol = 1e-12) const;
  ImaginaryQuaternion normalized() const;
  Quaternion quaternion() const { return {0.0, a1, a2, a3}; }

  ImaginaryQuaternion& operator+=(const ImaginaryQuaternion& o);
  ImaginaryQuaternion& operator*=(double s);
  friend ImaginaryQuaternion operator+(ImaginaryQuaternion a, const ImaginaryQuaternion& b) {
    return a += b;
  }
  friend ImaginaryQuaternion operator-(ImaginaryQuaternion a, const ImaginaryQuaternion& b) {
    return a += (b * -1.0);
  }
  friend ImaginaryQuaternion operator*(double s, ImaginaryQuaternion a) { return a *= s; }
  friend ImaginaryQuaternion operator*(ImaginaryQuaternion a, double s) { return a *= s; }
  friend bool operator==(const ImaginaryQuaternion&, const ImaginaryQuaternion&) = default;
};

/// i*r0*s0 + sum_a ra*sa, identified with the four-vector (r0, r1, r2, r3).
/// Densities r, m, m_in, m_out and Delta m all live here.
struct HyperbolicQuaternion {
  double r0{};
  double r1{};
  double r2{};
  double r3{};

  std::array<double, 3> spatial() const { return {r1, r2, r3}; }
  Quaternion quaternion() const { return {complex{0.0, r0}, r1, r2, r3}; }

  HyperbolicQuaternion& operator+=(const HyperbolicQuaternion& o);
  HyperbolicQuaternion& operator*=(double s);
  friend HyperbolicQuaternion operator+(HyperbolicQuaternion a, const HyperbolicQuaternion& b) {
    return a += b;
  }
  friend HyperbolicQuaternion operator-(HyperbolicQuaternion a, const HyperbolicQuaternion& b) {
    return a += (b * -1.0);
  }
  friend HyperbolicQuaternion operator*(double s, HyperbolicQuaternion a) { return a *= s; }
  friend HyperbolicQuaternion operator*(HyperbolicQuaternion a, double s) { return a *= s; }
  friend bool operator==(const HyperbolicQuaternion&, const HyperbolicQuaternion&) = default;

  /// Embeds an imaginary quaternion (r0 = 0).
  static HyperbolicQuaternion from_imaginary(const ImaginaryQuaternion& q) {
    return {0.0, q.a1, q.a2, q.a3};
  }
};

/// Two complex channel amplitudes.
struct Spinor {
  complex z1{};
  complex z2{};

  double norm2() const { return std::norm(z1) + std::norm(z2); }
  bool is_normalized(double tol = 1e-12) const;
  Spinor normalized() const;

  Spinor& operator+=(const Spinor& o);
  Spinor& operator*=(complex s);
  friend Spinor operator+(Spinor a, const Spinor& b) { return a += b; }
  friend Spinor operator-(Spinor a, const Spinor& b) { return a += (b * complex{-1.0}); }
  friend Spinor operator*(complex s, Spinor a) { return a *= s; }
  friend Spinor operator*(Spinor a, complex s) { return a *= s; }
  friend bool operator==(const Spinor&, const Spinor&) = default;
};

/// e^{theta u} = cos(theta) s0 + sin(theta) u for a unit axis u.
struct Rotor {
  double theta{};
  ImaginaryQuaternion axis{0.0, 0.0, 1.0};

  /// Throws InvalidArgument when the axis is not unit length.
  Rotor(double theta, const ImaginaryQuaternion& axis);
  Quaternion quaternion() const;
  Rotor inverse() const { return Rotor{-theta, axis}; }
};

enum class Conjugation {
  LeftInverse,   ///< e^{-theta u} t e^{theta u}
  RightInverse,  ///< e^{theta u} t e^{-theta u}
};

// Basis elements.
inline const Quaternion kS0{1.0, 0.0, 0.0, 0.0};
inline const Quaternion kS1{0.0, 1.0, 0.0, 0.0};
inline const Quaternion kS2{0.0, 0.0, 1.0, 0.0};
inline const Quaternion kS3{0.0, 0.0, 0.0, 1.0};

Quaternion mul(const Quaternion& a, const Quaternion& b);
inline Quaternion operator*(const Quaternion& a, const Quaternion& b) { return mul(a, b); }

Quaternion commutator(const Quaternion& a, const Quaternion& b);

/// [r, q] for a density r and an interaction q. The sigma_0 parts cancel, so
/// the result is imaginary: -2 (r_vec x q_vec).
ImaginaryQuaternion commutator(const HyperbolicQuaternion& r, const ImaginaryQuaternion& q);

HyperbolicQuaternion dual(const HyperbolicQuaternion& r);

/// Polarized Minkowski form, signature (-,+,+,+): r_vec.s_vec - r0*s0.
/// minkowski(r, r) is the s0 coefficient of r * dual(r).
double minkowski(const HyperbolicQuaternion& r, const HyperbolicQuaternion& s);

/// |minkowski(r,r)| <= tol * r0^2.
bool is_null(const HyperbolicQuaternion& r, double rel_tol = 1e-10);

/// Time-like or null: minkowski(r,r) <= tol * r0^2.
bool is_physical(const HyperbolicQuaternion& r, double rel_tol = 1e-8);

/// Conjugation by a rotor. LeftInverse turns the component orthogonal to the
/// axis by +2 theta (right-handed about the axis); RightInverse by -2 theta.
Quaternion rotor_conjugate(const Quaternion& t, const Rotor& rotor, Conjugation orientation);
ImaginaryQuaternion rotor_conjugate(const ImaginaryQuaternion& t, const Rotor& rotor,
                                    Conjugation orientation);

/// Orthonormal pair {v, w} completing the unit axis u: v = normalize(u x e_k)
/// with e_k the first standard basis vector not parallel to u, w = u x v.
std::array<ImaginaryQuaternion, 2> orthonormal_complement(const ImaginaryQuaternion& u);

/// Component of t in span{v, w}: sigma_0 part and u component dropped.
/// Only the real part of the imaginary coefficients is kept, so t should be
/// a hyperbolic or imaginary quaternion.
ImaginaryQuaternion project_orthogonal(const Quaternion& t, const ImaginaryQuaternion& u);
ImaginaryQuaternion project_orthogonal(const HyperbolicQuaternion& t, const ImaginaryQuaternion& u);

/// Coefficients of i psi psi^dagger; r0 = (|psi1|^2 + |psi2|^2) / 2.
HyperbolicQuaternion spinor_to_null(const Spinor& s);

/// Stereographic factorization of a null quaternion with r0 > 0 into a
/// normalized spinor with spinor_to_null(result) * 2 r0 == r.
Spinor null_to_spinor(const HyperbolicQuaternion& r, double rel_tol = 1e-10);

/// Action of a quaternion's 2x2 realization on a spinor.
Spinor apply(const Quaternion& q, const Spinor& s);
Spinor apply(const ImaginaryQuaternion& q, const Spinor& s);

}  // namespace qmem
