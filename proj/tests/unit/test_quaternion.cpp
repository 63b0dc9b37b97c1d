#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qmem/error.hpp"
#include "qmem/matrix_view.hpp"
#include "qmem/quaternion.hpp"
#include "qmem_checks/pauli_oracle.hpp"

namespace {

using namespace qmem;
namespace oracle = qmem::oracle;

oracle::Mat mat(const Quaternion& q) { return oracle::from_components(q.c0, q.c1, q.c2, q.c3); }

Quaternion random_quaternion(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {{n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}, {n(rng), n(rng)}};
}

HyperbolicQuaternion random_hyperbolic(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return {n(rng), n(rng), n(rng), n(rng)};
}

void expect_near(const Quaternion& a, const Quaternion& b, double tol) {
  EXPECT_NEAR(std::abs(a.c0 - b.c0), 0.0, tol);
  EXPECT_NEAR(std::abs(a.c1 - b.c1), 0.0, tol);
  EXPECT_NEAR(std::abs(a.c2 - b.c2), 0.0, tol);
  EXPECT_NEAR(std::abs(a.c3 - b.c3), 0.0, tol);
}

void expect_near(const HyperbolicQuaternion& a, const HyperbolicQuaternion& b, double tol) {
  EXPECT_NEAR(a.r0, b.r0, tol);
  EXPECT_NEAR(a.r1, b.r1, tol);
  EXPECT_NEAR(a.r2, b.r2, tol);
  EXPECT_NEAR(a.r3, b.r3, tol);
}

TEST(QuaternionProduct, StructureConstants) {
  EXPECT_EQ(kS1 * kS2, -kS3);
  EXPECT_EQ(kS2 * kS3, -kS1);
  EXPECT_EQ(kS3 * kS1, -kS2);
  EXPECT_EQ(kS2 * kS1, kS3);
  EXPECT_EQ(kS2 * kS2, -kS0);
  EXPECT_EQ(kS0 * kS3, kS3);
}

TEST(QuaternionProduct, AllBasisProductsMatchPauliMatrices) {
  const Quaternion basis[4] = {kS0, kS1, kS2, kS3};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      EXPECT_EQ((mat(basis[a] * basis[b]) - oracle::basis(a) * oracle::basis(b)).norm(), 0.0)
          << a << "," << b;
    }
  }
}

TEST(QuaternionProduct, RealizationAgreesWithComponentOracle) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Quaternion q = random_quaternion(rng);
    EXPECT_LT((realization(q) - mat(q)).norm(), 1e-15);
  }
}

TEST(QuaternionProduct, RandomProductsAndAssociativity) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const Quaternion a = random_quaternion(rng), b = random_quaternion(rng), c = random_quaternion(rng);
    EXPECT_LT((mat(a * b) - mat(a) * mat(b)).norm(), 1e-13);
    expect_near((a * b) * c, a * (b * c), 1e-13);
  }
}

TEST(Commutator, Examples) {
  EXPECT_EQ(commutator(kS1, kS1), Quaternion{});
  expect_near(commutator(kS1, kS2), -2.0 * kS3, 0.0);
  const ImaginaryQuaternion u{0.0, 0.6, 0.8};
  expect_near(commutator((3.0 * u).quaternion(), u.quaternion()), Quaternion{}, 1e-15);
}

TEST(Commutator, HyperbolicWithImaginaryIsMinusTwiceCross) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const HyperbolicQuaternion r = random_hyperbolic(rng);
    const ImaginaryQuaternion q{n(rng), n(rng), n(rng)};
    const ImaginaryQuaternion c = commutator(r, q);
    const Quaternion full = commutator(r.quaternion(), q.quaternion());
    EXPECT_NEAR(std::abs(full.c0), 0.0, 1e-13);
    EXPECT_NEAR(full.c1.real(), c.a1, 1e-13);
    EXPECT_NEAR(full.c2.real(), c.a2, 1e-13);
    EXPECT_NEAR(full.c3.real(), c.a3, 1e-13);
    EXPECT_NEAR(c.a1, -2.0 * (r.r2 * q.a3 - r.r3 * q.a2), 1e-13);
  }
}

TEST(Dual, Examples) {
  EXPECT_EQ(dual({1, 0, 0, 0}), (HyperbolicQuaternion{1, 0, 0, 0}));
  EXPECT_EQ(dual({0, 1, 2, 3}), (HyperbolicQuaternion{0, -1, -2, -3}));
}

TEST(Dual, ProductWithDualIsMinkowskiScalar) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const HyperbolicQuaternion r = random_hyperbolic(rng);
    const oracle::Mat p = mat(r.quaternion()) * mat(dual(r).quaternion());
    EXPECT_LT((p - minkowski(r, r) * oracle::Mat::Identity()).norm(), 1e-13);
  }
}

TEST(Minkowski, Examples) {
  EXPECT_EQ(minkowski({0.5, 0, 0, 0.5}, {0.5, 0, 0, 0.5}), 0.0);
  EXPECT_EQ(minkowski({1, 0, 0, 0}, {1, 0, 0, 0}), -1.0);
  EXPECT_TRUE(is_null({0.5, 0, 0, 0.5}));
  EXPECT_TRUE(is_physical({1, 0.2, 0, 0}));
  EXPECT_FALSE(is_physical({1, 2, 0, 0}));
}

TEST(Minkowski, SumOfFutureNullVectorsIsTimeLikeOrNull) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int i = 0; i < 1000; ++i) {
    const Spinor a{{n(rng), n(rng)}, {n(rng), n(rng)}};
    const Spinor b{{n(rng), n(rng)}, {n(rng), n(rng)}};
    const HyperbolicQuaternion s = spinor_to_null(a) + spinor_to_null(b);
    EXPECT_LE(minkowski(s, s), 1e-12 * s.r0 * s.r0);
    // Matrix oracle: the Hermitian view has nonnegative determinant.
    EXPECT_GE(hermitian_matrix(s).determinant().real(), -1e-12 * s.r0 * s.r0);
  }
}

TEST(Rotor, Construction) {
  EXPECT_THROW(Rotor(0.3, ImaginaryQuaternion{1.0, 1.0, 0.0}), InvalidArgument);
  const Rotor r(0.3, {0.0, 0.0, 1.0});
  expect_near(r.quaternion(), Quaternion{std::cos(0.3), 0.0, 0.0, std::sin(0.3)}, 1e-16);
}

TEST(Rotor, MatchesMatrixExponential) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    const ImaginaryQuaternion u = ImaginaryQuaternion{n(rng), n(rng), n(rng)}.normalized();
    const double theta = 2.0 * n(rng);
    const oracle::Mat e = oracle::exp(theta * oracle::Mat(realization(u)));
    EXPECT_LT((mat(Rotor(theta, u).quaternion()) - e).norm(), 1e-13);
  }
}

TEST(RotorConjugate, ZeroAngleAndAxisAreFixed) {
  std::mt19937_64 rng(7);
  const ImaginaryQuaternion u = ImaginaryQuaternion{1.0, 2.0, -0.5}.normalized();
  const Quaternion t = random_quaternion(rng);
  expect_near(rotor_conjugate(t, Rotor(0.0, u), Conjugation::LeftInverse), t, 1e-15);
  const ImaginaryQuaternion fixed = rotor_conjugate(u, Rotor(1.1, u), Conjugation::RightInverse);
  EXPECT_NEAR(fixed.a1, u.a1, 1e-15);
  EXPECT_NEAR(fixed.a2, u.a2, 1e-15);
  EXPECT_NEAR(fixed.a3, u.a3, 1e-15);
}

TEST(RotorConjugate, QuarterTurnSignConvention) {
  // e^{-pi/4 s3} s1 e^{pi/4 s3}: a +pi/2 turn about s3 carries s1 to s2.
  const Rotor r(std::numbers::pi / 4, {0.0, 0.0, 1.0});
  const Quaternion left = rotor_conjugate(kS1, r, Conjugation::LeftInverse);
  expect_near(left, kS2, 1e-15);
  const oracle::Mat e = oracle::exp(std::numbers::pi / 4 * oracle::basis(3));
  const oracle::Mat einv = oracle::exp(-std::numbers::pi / 4 * oracle::basis(3));
  EXPECT_LT((mat(left) - einv * oracle::basis(1) * e).norm(), 1e-15);
  expect_near(rotor_conjugate(kS1, r, Conjugation::RightInverse), -kS2, 1e-15);
}

TEST(RotorConjugate, AgreesWithMatrixConjugation) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const ImaginaryQuaternion u = ImaginaryQuaternion{n(rng), n(rng), n(rng)}.normalized();
    const double theta = n(rng);
    const Quaternion t = random_quaternion(rng);
    const oracle::Mat e = oracle::exp(theta * oracle::Mat(realization(u)));
    const oracle::Mat einv = oracle::exp(-theta * oracle::Mat(realization(u)));
    EXPECT_LT((mat(rotor_conjugate(t, Rotor(theta, u), Conjugation::LeftInverse)) - einv * mat(t) * e)
                  .norm(),
              1e-13);
    EXPECT_LT((mat(rotor_conjugate(t, Rotor(theta, u), Conjugation::RightInverse)) - e * mat(t) * einv)
                  .norm(),
              1e-13);
  }
}

TEST(RotorConjugate, CentralDifferenceConvergesAtSecondOrder) {
  // d/dtheta e^{-theta u} t e^{theta u} = e^{-theta u} [t, u] e^{theta u}
  const ImaginaryQuaternion u = ImaginaryQuaternion{0.3, -0.4, 0.5}.normalized();
  const Quaternion t{{0.2, 0.1}, {1.0, -0.3}, {0.5, 0.2}, {-0.7, 0.4}};
  const double theta = 0.7;
  const Quaternion exact =
      rotor_conjugate(commutator(t, u.quaternion()), Rotor(theta, u), Conjugation::LeftInverse);
  auto error = [&](double h) {
    const Quaternion fd = (rotor_conjugate(t, Rotor(theta + h, u), Conjugation::LeftInverse) -
                           rotor_conjugate(t, Rotor(theta - h, u), Conjugation::LeftInverse)) *
                          complex{1.0 / (2.0 * h)};
    const Quaternion d = fd - exact;
    return std::sqrt(std::norm(d.c0) + std::norm(d.c1) + std::norm(d.c2) + std::norm(d.c3));
  };
  const double e1 = error(1e-2), e2 = error(5e-3);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.05);
  EXPECT_LT(error(1e-4), 1e-7);
}

TEST(ProjectOrthogonal, Examples) {
  const ImaginaryQuaternion u{0.0, 0.0, 1.0};
  const ImaginaryQuaternion zero{};
  EXPECT_EQ(project_orthogonal(kS0, u), zero);
  EXPECT_EQ(project_orthogonal(u.quaternion(), u), zero);
  const ImaginaryQuaternion p = project_orthogonal(HyperbolicQuaternion{0.5, 0.3, 0.4, 0.2}, u);
  EXPECT_EQ(p, (ImaginaryQuaternion{0.3, 0.4, 0.0}));
}

TEST(ProjectOrthogonal, IncomingQuaternionIsAtMostOneHalf) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (int i = 0; i < 1000; ++i) {
    const Spinor s = Spinor{{n(rng), n(rng)}, {n(rng), n(rng)}}.normalized();
    const ImaginaryQuaternion u = ImaginaryQuaternion{n(rng), n(rng), n(rng)}.normalized();
    EXPECT_LE(project_orthogonal(spinor_to_null(s), u).norm(), 0.5 + 1e-15);
  }
}

TEST(OrthonormalComplement, IsRightHandedAndOrthonormal) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const ImaginaryQuaternion u = ImaginaryQuaternion{n(rng), n(rng), n(rng)}.normalized();
    const auto [v, w] = orthonormal_complement(u);
    EXPECT_NEAR(v.norm(), 1.0, 1e-14);
    EXPECT_NEAR(w.norm(), 1.0, 1e-14);
    EXPECT_NEAR(v.a1 * u.a1 + v.a2 * u.a2 + v.a3 * u.a3, 0.0, 1e-14);
    EXPECT_NEAR(w.a1 * v.a1 + w.a2 * v.a2 + w.a3 * v.a3, 0.0, 1e-14);
    // u x v = w
    EXPECT_NEAR(u.a2 * v.a3 - u.a3 * v.a2, w.a1, 1e-14);
  }
}

TEST(Spinors, ToNullExamples) {
  expect_near(spinor_to_null({1.0, 0.0}), {0.5, 0, 0, 0.5}, 0.0);
  expect_near(spinor_to_null({0.0, 1.0}), {0.5, 0, 0, -0.5}, 0.0);
  const Spinor s{complex{0.5, 0.5}, complex{0.5, -0.5}};
  const HyperbolicQuaternion r = spinor_to_null(s);
  // Hermitian view s s^dagger = r0 + r.sigma
  const Matrix2c ss = to_vector(s) * to_vector(s).adjoint();
  EXPECT_NEAR(r.r0, 0.5, 1e-15);
  EXPECT_NEAR(r.r3, 0.0, 1e-15);
  EXPECT_NEAR(r.r1, ss(1, 0).real(), 1e-15);
  EXPECT_NEAR(r.r2, ss(1, 0).imag(), 1e-15);
  EXPECT_NEAR(r.r2, -0.5, 1e-15);
}

TEST(Spinors, NullToSpinorExamples) {
  const Spinor north = null_to_spinor({0.5, 0, 0, 0.5});
  EXPECT_NEAR(std::abs(north.z1), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(north.z2), 0.0, 1e-15);
  const Spinor diag = null_to_spinor({0.5, 0.5, 0, 0});
  EXPECT_NEAR(std::abs(diag.z1), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(std::abs(diag.z2), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(std::arg(diag.z2 / diag.z1), 0.0, 1e-15);
  EXPECT_THROW(null_to_spinor({1.0, 0.0, 0.0, 0.0}), InvalidArgument);
}

TEST(Spinors, RoundTripIsProportional) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (int i = 0; i < 1000; ++i) {
    const Spinor psi{{n(rng), n(rng)}, {n(rng), n(rng)}};
    const HyperbolicQuaternion r = spinor_to_null(psi);
    const HyperbolicQuaternion back = 2.0 * r.r0 * spinor_to_null(null_to_spinor(r));
    expect_near(back, r, 1e-12 * r.r0);
  }
}

TEST(Spinors, ApplyMatchesRealization) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    const Quaternion q = random_quaternion(rng);
    const Spinor s{{n(rng), n(rng)}, {n(rng), n(rng)}};
    EXPECT_LT((to_vector(apply(q, s)) - realization(q) * to_vector(s)).norm(), 1e-14);
  }
}

}  // namespace
