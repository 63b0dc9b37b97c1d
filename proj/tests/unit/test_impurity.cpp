#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qmem/error.hpp"
#include "qmem/impurity.hpp"
#include "qmem/point_interaction.hpp"

namespace {

using namespace qmem;

TEST(Impurity, NullStateIsPure) {
  const ImpurityReport r = impurity(HyperbolicQuaternion{1.0, 0.6, 0.0, 0.8}, 2.0);
  EXPECT_NEAR(r.imp, 0.0, 1e-7);
  EXPECT_TRUE(r.physical);
}

TEST(Impurity, MaximallyMixed) {
  // M = I/2 means m = (1/2, 0, 0, 0) at unit trace.
  const ImpurityReport r = impurity(HyperbolicQuaternion{0.5, 0, 0, 0}, 1.0);
  EXPECT_NEAR(r.imp, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(r.imp_trace, r.imp, 1e-15);
  EXPECT_NEAR(r.min_eigenvalue, 0.5, 1e-15);
}

TEST(Impurity, UnitTraceNormalization) {
  const ImpurityReport r = impurity(HyperbolicQuaternion{3.0, 1.0, -0.5, 0.2}, 6.0);
  EXPECT_NEAR(r.M.trace().real(), 1.0, 1e-15);
  EXPECT_NEAR(r.m_normalized.r0, 0.5, 1e-15);
  EXPECT_NEAR(r.imp * r.imp, 2.0 * std::abs(r.minkowski_norm), 1e-12);
  EXPECT_LT((r.M - r.M.adjoint()).norm(), 1e-15);
  const ImpurityReport raw = impurity(HyperbolicQuaternion{3.0, 1.0, -0.5, 0.2}, 6.0, Normalization::Raw);
  EXPECT_EQ(raw.m_normalized, (HyperbolicQuaternion{3.0, 1.0, -0.5, 0.2}));
  EXPECT_THROW(impurity(HyperbolicQuaternion{1, 0, 0, 0}, 0.0), InvalidArgument);
}

TEST(Impurity, SpaceLikeStateIsFlagged) {
  const ImpurityReport r = impurity(HyperbolicQuaternion{0.5, 1.0, 0, 0}, 1.0);
  EXPECT_FALSE(r.physical);
  EXPECT_LT(r.min_eigenvalue, 0.0);
}

TEST(MOut, TracePreservationAndBilinearity) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const Spinor s = Spinor{{n(rng), n(rng)}, {n(rng), n(rng)}};
    const HyperbolicQuaternion min = spinor_to_null(s);
    const HyperbolicQuaternion dm{0.0, n(rng), n(rng), n(rng)};
    const HyperbolicQuaternion out = m_out(min, dm);
    EXPECT_EQ(out.r0, min.r0);
    EXPECT_NEAR(minkowski(out, out), 2.0 * minkowski(min, dm) + minkowski(dm, dm), 1e-12);
  }
  const HyperbolicQuaternion min{0.5, 0.5, 0, 0};
  EXPECT_EQ(m_out(min, {}), min);
}

const Spinor kDiag{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};

TEST(DeltaM, ZeroAndCollinearPotentials) {
  const IncomingState st(Spectrum::rectangular(1.0, 1.3), Spinor{1.0, 0.0}, Parity::Even);
  const DiscretePotential zero({Site{0.0, {}}});
  EXPECT_EQ(delta_m(zero, st).delta_m, HyperbolicQuaternion{});
  // s_in = (1, 0) has t_in along s3, so q along s3 commutes with everything.
  const DiscretePotential collinear({Site{0.0, {0.0, 0.0, 2.0}}});
  const auto dm = delta_m(collinear, st).delta_m;
  EXPECT_LT(std::abs(dm.r1) + std::abs(dm.r2) + std::abs(dm.r3), 1e-14);
}

TEST(DeltaM, SingleSiteMatchesClosedForm) {
  PipelineOptions opt;
  opt.quadrature.abs_tol = 1e-10;
  const PointInteraction pi(1.4, ImaginaryQuaternion{0.0, 0.6, 0.8}, Parity::Even);
  for (const Spectrum& s : {Spectrum::rectangular(0.5, 1.6), Spectrum::gaussian({1.5, 0.1, 1.0, 10.0})}) {
    const IncomingState st(s, kDiag, Parity::Even);
    const auto numeric = delta_m(pi.as_potential(), st, opt).delta_m;
    const auto closed = delta_m_closed(pi, s, t_in(kDiag), opt.quadrature).delta_m;
    EXPECT_NEAR(numeric.r0, 0.0, 1e-15);
    EXPECT_NEAR(numeric.r1, closed.r1, 1e-6);
    EXPECT_NEAR(numeric.r2, closed.r2, 1e-6);
    EXPECT_NEAR(numeric.r3, closed.r3, 1e-6);
  }
}

TEST(Pipeline, ReportInvariantsForRandomChains) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Site> sites;
    for (int j = 0; j < 4; ++j) sites.push_back({1.3 * j, {c(rng), c(rng), c(rng)}});
    const Spinor s = Spinor{complex{c(rng), c(rng)}, complex{c(rng), c(rng)}}.normalized();
    for (Parity p : {Parity::Even, Parity::Odd, Parity::None}) {
      const IncomingState st(Spectrum::rectangular(0.8, 1.5), s, p);
      const ImpurityReport r = impurity_pipeline(DiscretePotential(sites), st);
      EXPECT_TRUE(r.physical);
      EXPECT_GE(r.min_eigenvalue, -1e-10);
      EXPECT_NEAR(r.imp * r.imp, 2.0 * std::abs(r.minkowski_norm), 1e-12);
      EXPECT_NEAR(r.imp, r.imp_trace, 1e-10);
      EXPECT_EQ(r.delta_m.r0, 0.0);
      EXPECT_TRUE(r.quadrature.converged);
    }
  }
}

TEST(Pipeline, TabulatedRulesConverge) {
  const DiscretePotential pot({Site{0.0, {0.5, 0.0, 1.0}}, Site{1.0, {0.0, -0.7, 0.2}}});
  auto run = [&](std::size_t n, QuadratureRule rule) {
    std::vector<double> w(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 1.0 + static_cast<double>(i) / static_cast<double>(n - 1);
      d[i] = std::pow(w[i], -1.5);
    }
    return impurity_pipeline(pot, IncomingState(Spectrum::tabulated(w, d, rule), kDiag, Parity::Even)).imp;
  };
  const double reference = impurity_pipeline(
      pot, IncomingState(Spectrum::rectangular(1.0, 2.0), kDiag, Parity::Even)).imp;
  for (QuadratureRule rule : {QuadratureRule::Trapezoid, QuadratureRule::Midpoint}) {
    const double e1 = std::abs(run(101, rule) - reference);
    const double e2 = std::abs(run(201, rule) - reference);
    EXPECT_LT(e2, 1e-4);
    EXPECT_NEAR(e1 / e2, 4.0, 0.5);
  }
}

TEST(Pipeline, ThreadCountDoesNotChangeResults) {
  const DiscretePotential pot({Site{-0.5, {0.5, 0.0, 1.0}}, Site{0.7, {0.0, -0.7, 0.2}}});
  const IncomingState st(Spectrum::gaussian({1.0, 0.1, 1.0, 9.0}), kDiag, Parity::None);
  PipelineOptions one, four;
  four.quadrature.threads = 4;
  const ImpurityReport a = impurity_pipeline(pot, st, one);
  const ImpurityReport b = impurity_pipeline(pot, st, four);
  EXPECT_EQ(a.imp, b.imp);
  EXPECT_EQ(a.m_out, b.m_out);
}

TEST(Quadrature, StrictModeRaisesToleranceError) {
  const DiscretePotential pot({Site{0.0, {0.5, 0.0, 1.0}}});
  const IncomingState st(Spectrum::gaussian({1.0, 0.05, 1.0, 10.0}), kDiag, Parity::Even);
  PipelineOptions opt;
  opt.quadrature.abs_tol = 1e-30;
  opt.quadrature.max_level = 5;
  opt.quadrature.strict = true;
  EXPECT_THROW(impurity_pipeline(pot, st, opt), ToleranceError);
  opt.quadrature.strict = false;
  EXPECT_FALSE(impurity_pipeline(pot, st, opt).quadrature.converged);
}

}  // namespace
