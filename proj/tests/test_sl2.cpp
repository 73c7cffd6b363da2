#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "vibronic_qes/sl2.hpp"

using namespace vibronic_qes;
using cd = std::complex<double>;

namespace {

RealPolynomial random_poly(std::mt19937& rng, int degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) x = u(rng);
  return RealPolynomial(c);
}

// Second-order channel operator written out with derivatives, independent
// of DiffOperator: ½y'' − z y' + (a z + c) y.
RealPolynomial channel(const RealPolynomial& y, double a, double c) {
  return 0.5 * y.derivative(2) - RealPolynomial{0.0, 1.0} * y.derivative() + RealPolynomial{c, a} * y;
}

// Ĥ₄ y with the coupling entering as a complex v².
ComplexPolynomial h4_residual(const LevelParams& lp, const ModelParams& mp, cd v2, const ComplexPolynomial& y) {
  const auto op = build_h4(lp, ModelParams{mp.F, mp.b, 0.0});
  return vibronic_qes::apply(op, y) - v2 * y;
}

}  // namespace

TEST(Sl2, Generators) {
  const auto g0 = make_generators(0);
  EXPECT_EQ(g0.jzero, RealOperator({RealPolynomial{}, RealPolynomial{0.0, 1.0}}));
  for (int n : {0, 3, 7}) EXPECT_EQ(make_generators(n).jminus, RealOperator::derivative(1));
  for (int n = 0; n <= 10; ++n)
    EXPECT_TRUE(vibronic_qes::apply(make_generators(n).jplus, RealPolynomial::monomial(n)).is_zero()) << n;
  EXPECT_THROW(make_generators(-1), std::invalid_argument);
}

TEST(Sl2, GeneralQesExamples) {
  EXPECT_TRUE(build_general_qes(QesCoefficients{}, 3).is_zero());

  QesCoefficients mm;
  mm.c_mm = 1.0;
  EXPECT_EQ(build_general_qes(mm, 4), RealOperator::derivative(2));

  QesCoefficients pp;
  pp.c_pp = 1.0;
  const auto h = build_general_qes(pp, 2);
  EXPECT_EQ(h.coeff(2), RealPolynomial::monomial(4));
  EXPECT_EQ(h.coeff(1), RealPolynomial::monomial(3, -2.0));
  EXPECT_EQ(h.coeff(0), RealPolynomial::monomial(2, 2.0));
}

// Random coefficient sets: the built operator acts on polynomials exactly
// like the generator combination applied step by step.
TEST(Sl2, GeneralQesMatchesGeneratorAction) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = trial % 11;
    QesCoefficients k{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    RealOperator h;
    ASSERT_NO_THROW(h = build_general_qes(k, n));
    const auto g = make_generators(n);
    const auto y = random_poly(rng, 8);
    const auto ref = k.c_pp * vibronic_qes::apply(g.jplus, vibronic_qes::apply(g.jplus, y)) + k.c_p0 * vibronic_qes::apply(g.jplus, vibronic_qes::apply(g.jzero, y)) +
                     k.c_pm * vibronic_qes::apply(g.jplus, vibronic_qes::apply(g.jminus, y)) + k.c_0m * vibronic_qes::apply(g.jzero, vibronic_qes::apply(g.jminus, y)) +
                     k.c_mm * vibronic_qes::apply(g.jminus, vibronic_qes::apply(g.jminus, y)) + k.c_p * vibronic_qes::apply(g.jplus, y) +
                     k.c_0 * vibronic_qes::apply(g.jzero, y) + k.c_m * vibronic_qes::apply(g.jminus, y) + k.c * y;
    EXPECT_LE(relative_distance(vibronic_qes::apply(h, y), ref), 1e-12);
    // The invariant subspace of degree ≤ n is preserved.
    EXPECT_TRUE(project_invariant_subspace(h, n).invariant_flag);
  }
}

TEST(Sl2, BuildH4Examples) {
  const auto a = build_h4(LevelParams{0, 0, 0}, ModelParams{0, 0, 0});
  EXPECT_EQ(a.coeff(1), (RealPolynomial{0.0, 1.0}));
  EXPECT_TRUE(a.coeff(0).is_zero());
  EXPECT_EQ(a.coeff(2), (RealPolynomial{-1.0, 0.0, 1.0}));
  EXPECT_EQ(a.coeff(3), (RealPolynomial{0.0, -1.0}));
  EXPECT_EQ(a.coeff(4), (RealPolynomial{0.25}));

  const auto b = build_h4(LevelParams{1, 1, 1}, ModelParams{1, 0, 0});
  EXPECT_EQ(b.coeff(1), (RealPolynomial{0.0, -1.0, -1.0}));
  EXPECT_EQ(b.coeff(0), (RealPolynomial{1.0, 1.0}));
}

// Ĥ₄ is the operator left after eliminating the channel-1 factor: with
// M = ½d² − z d + E2 and L₁ = ½d² − z d + (F z + E1), Ĥ₄ y = L₁(M y) − v² y.
// Taking L₁ innermost instead differs by exactly F(y' − z y).
TEST(Sl2, DecouplingIdentity) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ModelParams mp{u(rng), u(rng), u(rng)};
    const LevelParams lp{0, u(rng) * 3.0, u(rng) * 3.0};
    const auto y = random_poly(rng, trial % 7);
    const auto h4y = vibronic_qes::apply(build_h4(lp, mp), y);

    const auto l1_after_m = channel(channel(y, 0.0, lp.E2), mp.F, lp.E1) - (mp.v * mp.v) * y;
    EXPECT_LE(relative_distance(h4y, l1_after_m), 1e-10);

    const auto m_after_l1 = channel(channel(y, mp.F, lp.E1), 0.0, lp.E2) - (mp.v * mp.v) * y;
    const auto gap = mp.F * (y.derivative() - RealPolynomial{0.0, 1.0} * y);
    EXPECT_LE(relative_distance(m_after_l1 - h4y, gap), 1e-10);
  }
}

TEST(Sl2, ConditionCheck) {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 0; n <= 10; ++n) {
    const ModelParams mp{u(rng), u(rng), u(rng)};
    const auto rep = qes_condition_check(build_h4(level_params(n, mp), mp), n);
    EXPECT_TRUE(rep.holds) << n;
    EXPECT_EQ(rep.degenerate, n == 0) << n;  // at n = 0 every condition reads 0 = 0
    EXPECT_TRUE(rep.conditions[0].holds && rep.conditions[1].holds && rep.conditions[2].holds);
    // The first two conditions are vacuous for the vibronic operator.
    EXPECT_TRUE(rep.conditions[0].degenerate);
    EXPECT_TRUE(rep.conditions[1].degenerate);
    EXPECT_NEAR(rep.c1, mp.F * n, 1e-12 * std::max(1.0, std::abs(mp.F * n)));
  }

  const ModelParams mp{0.8, 0.3, 0.5};
  const LevelParams off{2, 2.5 - 0.24, 2.5};
  EXPECT_FALSE(qes_condition_check(build_h4(off, mp), 2).holds);

  const ModelParams flat{0.0, 0.3, 0.5};
  for (double e2 : {0.0, 1.3, 4.0}) {
    const auto rep = qes_condition_check(build_h4(LevelParams{2, e2, e2}, flat), 2);
    EXPECT_TRUE(rep.holds);
    EXPECT_TRUE(rep.degenerate);
  }

  const RealOperator too_high({RealPolynomial::monomial(3)});
  EXPECT_THROW(qes_condition_check(too_high, 2), std::invalid_argument);
}

TEST(Sl2, SolveExceptionalE2) {
  for (int n = 0; n <= 10; ++n) {
    const auto e2 = solve_exceptional_e2(n, ModelParams{0.7, -0.4, 0.2});
    ASSERT_TRUE(e2.has_value());
    EXPECT_NEAR(*e2, n, 1e-12);
  }
  EXPECT_FALSE(solve_exceptional_e2(3, ModelParams{0.0, 1.0, 0.2}).has_value());
}

TEST(Sl2, Projection) {
  const auto s = project_invariant_subspace(RealOperator::derivative(1), 1);
  Eigen::Matrix2d expected;
  expected << 0, 1, 0, 0;
  EXPECT_EQ(s.matrix, expected);
  EXPECT_TRUE(s.invariant_flag);

  const ModelParams mp{0.9, 0.4, 0.3};
  for (int n = 0; n <= 6; ++n) {
    EXPECT_TRUE(project_invariant_subspace(build_h4(level_params(n, mp), mp), n).invariant_flag);
    LevelParams off = level_params(n, mp);
    off.E2 += 0.5;
    const auto bad = project_invariant_subspace(build_h4(off, mp), n);
    EXPECT_FALSE(bad.invariant_flag);
    // The only spill term is F(E2 − n) z^{n+1}.
    EXPECT_NEAR(bad.spill * std::max(1.0, bad.matrix.cwiseAbs().maxCoeff()), std::abs(mp.F * 0.5), 1e-12);
  }
}

TEST(Sl2, AllowedCouplingsLowLevels) {
  const auto c0 = allowed_couplings(0, ModelParams{0.6, 0.2, 9.0});
  ASSERT_EQ(c0.size(), 1u);
  EXPECT_EQ(c0[0].v_squared, cd(0.0));
  EXPECT_TRUE(c0[0].physical);

  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    double F = u(rng);
    if (std::abs(F) < 0.1) F = 0.5;
    const double b = u(rng);
    const double e1 = 1.0 - F * b;
    const auto c1 = allowed_couplings(1, ModelParams{F, b, 0.0});
    ASSERT_EQ(c1.size(), 2u);
    // Sorted by v²: {0, E1} in order.
    const auto& lo = e1 >= 0 ? c1[0] : c1[1];
    const auto& hi = e1 >= 0 ? c1[1] : c1[0];
    EXPECT_NEAR(std::abs(lo.v_squared), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(hi.v_squared - e1), 0.0, 1e-12);
    ASSERT_EQ(lo.roots().size(), 1u);
    EXPECT_NEAR(std::abs(lo.roots()[0]), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(hi.roots()[0] - cd(-e1 / F)), 0.0, 1e-10);
    EXPECT_EQ(hi.physical, e1 >= 0);
  }
}

TEST(Sl2, KernelsSolveH4) {
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int n = 0; n <= 10; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const ModelParams mp{u(rng), u(rng), 0.0};
      const auto lp = level_params(n, mp);
      const auto list = allowed_couplings(n, mp);
      ASSERT_EQ(static_cast<int>(list.size()), n + 1);
      for (const auto& a : list) {
        const auto r = h4_residual(lp, mp, a.v_squared, a.kernel_poly);
        const double scale = std::max(1.0, a.kernel_poly.max_abs_coeff());
        EXPECT_LE(r.max_abs_coeff() / scale, 1e-9) << "n=" << n;
        EXPECT_FALSE(a.degree_deficient);
        EXPECT_EQ(a.kernel_poly.degree(), n);
        EXPECT_EQ(a.kernel_poly.leading(), cd(1.0));
      }
    }
  }
}

// With F = 0 the projection is upper triangular and all but one eigenvector
// have degree below n. Those states are flagged, not dropped.
TEST(Sl2, FlatSlopeFlagsDegreeDeficientKernels) {
  const ModelParams mp{0.0, 0.5, 0.0};
  const auto list = allowed_couplings(3, mp);
  ASSERT_EQ(list.size(), 4u);
  int deficient = 0;
  for (const auto& a : list) {
    deficient += a.degree_deficient;
    EXPECT_TRUE(a.real);
    const auto r = h4_residual(level_params(3, mp), mp, a.v_squared, a.kernel_poly);
    EXPECT_LE(r.max_abs_coeff(), 1e-9);
  }
  EXPECT_EQ(deficient, 3);
}

// Kernel roots obey the restriction v² − E1E2 = −FΣz + n(n−1) + n(1 − E1 − E2)
// even when the roots are large, which needs the sub-leading coefficient
// to componentwise accuracy.
TEST(Sl2, KernelRootsSatisfyRestriction) {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int n = 1; n <= 8; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      double F = u(rng);
      if (std::abs(F) < 0.2) F = std::copysign(0.2, F);
      const ModelParams mp{F, u(rng), 0.0};
      const auto lp = level_params(n, mp);
      for (const auto& a : allowed_couplings(n, mp)) {
        cd sum = 0.0;
        for (const auto& z : a.roots()) sum += z;
        const cd implied = lp.E1 * lp.E2 - F * sum + double(n * (n - 1)) + double(n) * (1.0 - lp.E1 - lp.E2);
        EXPECT_LT(std::abs(implied - a.v_squared), 1e-9 * std::max(1.0, std::abs(a.v_squared))) << n;
      }
    }
  }
}
