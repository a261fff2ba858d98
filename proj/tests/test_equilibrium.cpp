#include <gtest/gtest.h>

#include <cmath>

#include "deterrence/equilibrium.hpp"
#include "deterrence/errors.hpp"
#include "deterrence/verification.hpp"
#include "support/generators.hpp"

using namespace deterrence;
using deterrence::proptest::Gen;

namespace {

GameParams base(int n, double L) {
  GameParams p;
  p.n = n;
  p.b = 1.0;
  p.c = 10.0;
  p.delta = 0.95;
  p.alpha = 0.5;
  p.pi_star = 0.95;
  p.L = L;
  return p;
}

GameParams small_costs(int n, double L) {
  GameParams p;
  p.n = n;
  p.b = 0.1;
  p.c = 0.02;
  p.delta = 0.999;
  p.alpha = 0.5;
  p.pi_star = 0.95;
  p.L = L;
  return p;
}

}  // namespace

// Oracle: mpmath root of c*delta*L*(Phi(w) - Phi(w - b)) = b + c - w at 40 digits.
TEST(SingleAgent, MatchesHighPrecisionOracle) {
  auto eq = solve_single_agent(base(1, 1000.0));
  EXPECT_EQ(eq.regime, Regime::SingleAgent);
  EXPECT_NEAR(eq.omega_star(), -2.9663816737838328035, 1e-11);
  EXPECT_NEAR(eq.omega_star2(), -3.9663816737838328035, 1e-11);
  EXPECT_NEAR(eq.q, 0.71600506370027882479, 1e-11);
  EXPECT_NEAR(eq.informativeness_max, 1.0557881781962095329, 1e-11);
  EXPECT_NEAR(eq.pi, 0.94735743273635004586, 1e-11);
  EXPECT_LT(eq.residual, 1e-12);
}

TEST(SingleAgent, CutoffGapIsB) {
  Gen g(3);
  for (int j = 0; j < 30; ++j) {
    auto p = proptest::single_agent_params(g);
    try {
      auto eq = solve_single_agent(p);
      EXPECT_NEAR(eq.omega_star() - eq.omega_star2(), p.b, 1e-10);
    } catch (const NoEquilibrium&) {
    }
  }
}

TEST(SingleAgent, RequiresOneAgent) {
  EXPECT_THROW(solve_single_agent(base(2, 10.0)), DomainError);
}

TEST(SingleAgent, ProbabilitiesStayInterior) {
  for (double L : {10.0, 100.0, 1000.0}) {
    auto eq = solve_single_agent(base(1, L));
    EXPECT_LT(eq.omega_star(), 0.0);
    EXPECT_GT(eq.pi, 0.0);
    EXPECT_LT(eq.pi, 1.0);
    EXPECT_GT(eq.q, 0.0);
    EXPECT_LE(eq.q, 1.0);
  }
}

// Oracle: mpmath solve of the three-equation cutoff/indifference system.
TEST(AppOneType, TwoAgentsMatchOracle) {
  auto eq = solve_app_one_type(small_costs(2, 1000.0));
  EXPECT_EQ(eq.regime, Regime::AppOneType);
  EXPECT_NEAR(eq.omega_star(), -0.37855508381828770698, 1e-10);
  EXPECT_NEAR(eq.omega_star2(), -0.44667066144064919838, 1e-10);
  EXPECT_NEAR(eq.q, 0.12240583926160083885, 1e-10);
  EXPECT_NEAR(eq.informativeness_max, 1.0760621229857936815, 1e-10);
  EXPECT_NEAR(eq.pi, 0.94640073753538687784, 1e-10);
  ASSERT_TRUE(eq.beta.has_value());
}

TEST(AppOneType, RatioIdentityHolds) {
  for (int n : {2, 3}) {
    auto p = small_costs(n, 1000.0);
    auto eq = solve_app_one_type(p);
    double l = p.l_star(), I = eq.informativeness_max;
    double lhs = std::abs(eq.omega_star() - p.b - p.c) / std::abs(eq.omega_star2() - p.c);
    double rhs = (n - 1) * l / ((n - 1) * l + n * I) * I + n * I / ((n - 1) * l + n * I);
    EXPECT_NEAR(lhs, rhs, 1e-8) << "n=" << n;
  }
}

TEST(AppOneType, ConvictsOnlyOnUnanimousAccusation) {
  auto eq = solve_app_one_type(small_costs(2, 1000.0));
  const auto& rule = eq.profile.rule();
  EXPECT_EQ(rule(0b00), 0.0);
  EXPECT_EQ(rule(0b01), 0.0);
  EXPECT_EQ(rule(0b10), 0.0);
  EXPECT_GT(rule(0b11), 0.0);
  EXPECT_NEAR(posterior_aggregate(eq.profile, 0b11), 0.95, 1e-10);
  for (Profile a : {0b00u, 0b01u, 0b10u}) EXPECT_LT(posterior_aggregate(eq.profile, a), 0.95);
  EXPECT_GT(substitutes_index(rule).index, 0.0);
  EXPECT_LT(offense_correlation(eq.profile, 0, 1), 0.0);
}

TEST(AppOneType, GapStrictlyInsideZeroB) {
  Gen g(5);
  int solved = 0;
  for (int j = 0; j < 60; ++j) {
    auto p = proptest::app_params(g);
    try {
      auto eq = solve_app_one_type(p);
      ++solved;
      double d = eq.omega_star() - eq.omega_star2();
      EXPECT_GT(d, 0.0);
      EXPECT_LT(d, p.b);
    } catch (const NoEquilibrium&) {
    }
  }
  EXPECT_GT(solved, 10);
}

TEST(AppOneType, NoEquilibriumWhenRetaliationDominates) {
  // q * Psi** = c / (b + c - omega*) cannot hold with q <= 1 here.
  EXPECT_THROW(solve_app_one_type(base(2, 1000.0)), NoEquilibrium);
}

TEST(AppOneType, RejectsTwoTypeParameters) {
  auto p = small_costs(2, 1000.0);
  p.pi_o = 0.5;
  EXPECT_THROW(solve_app_one_type(p), DomainError);
}

TEST(AppOneType, GeneralSolverReducesToSingleAgentAtOneAgent) {
  auto p = base(1, 300.0);
  auto a = solve_single_agent(p);
  auto b = detail::solve_one_offense_general(p, {});
  EXPECT_DOUBLE_EQ(a.q, b.q);
  EXPECT_DOUBLE_EQ(a.omega_star(), b.omega_star());
}

TEST(Dispatch, FallsBackToComplementsForTwoAgents) {
  auto eq = solve_app(base(2, 5.0));
  EXPECT_EQ(eq.regime, Regime::AppComplements);
  EXPECT_LT(eq.residual, 1e-8);
  EXPECT_EQ(solve_app(base(1, 5.0)).regime, Regime::SingleAgent);
}

TEST(Complements, ConstructedRuleAndCorrelation) {
  auto p = base(2, 5.0);
  auto eq = solve_app_complements(p, 0.8);
  EXPECT_EQ(eq.regime, Regime::AppComplements);
  ASSERT_TRUE(eq.L_value.has_value());
  EXPECT_NEAR(substitutes_index(eq.profile.rule()).index, 1.0 - 2.0 * 0.8, 1e-15);
  EXPECT_GT(offense_correlation(eq.profile, 0, 1), 0.0);
  EXPECT_GT(eq.omega_star() - eq.omega_star2(), p.b);
  EXPECT_NEAR(posterior_aggregate(eq.profile, 0b01), p.pi_star, 1e-10);
  EXPECT_THROW(solve_app_complements(p, 0.5), DomainError);
  EXPECT_THROW(solve_app_complements(base(3, 5.0), 0.8), DomainError);
}

TEST(Complements, SolveAtLRecoversTarget) {
  auto p = base(2, 5.0);
  auto direct = solve_app_complements(p, 0.7);
  p.L = *direct.L_value;
  auto found = solve_app_complements_at_L(p);
  EXPECT_NEAR(found.q, 0.7, 1e-8);
}

TEST(Complements, IntervalBracketsSolvablePunishments) {
  auto p = base(2, 5.0);
  auto iv = complements_L_interval(p);
  EXPECT_LT(iv.L_low, iv.L_high);
  EXPECT_GT(iv.L_low, 4.0);
  EXPECT_LT(iv.L_low, 5.0);
  for (double L : {iv.L_low * 1.01, std::sqrt(iv.L_low * iv.L_high), 0.5 * (iv.L_low + iv.L_high)}) {
    p.L = L;
    EXPECT_NO_THROW(solve_app_complements_at_L(p)) << "L=" << L;
  }
  p.L = iv.L_low * 0.9;
  EXPECT_THROW(solve_app_complements_at_L(p), NoEquilibrium);
}

TEST(TwoType, GuiltEqualsOpportunisticShare) {
  GameParams p;
  p.n = 2;
  p.b = 1.0;
  p.c = 0.001;
  p.delta = 0.999;
  p.alpha = 0.05;
  p.pi_star = 0.95;
  p.pi_o = 0.5;
  p.L = 1e5;
  auto eq = solve_app_two_type(p);
  EXPECT_EQ(eq.regime, Regime::AppTwoType);
  EXPECT_NEAR(prior_guilt(eq.profile), 0.5, 1e-9);
  ASSERT_TRUE(eq.kr.has_value());
  EXPECT_EQ(eq.kr->k, 2);
  EXPECT_NEAR(eq.informativeness_max, p.l_star() / 1.0, 1e-8);
  EXPECT_LT(offense_correlation(eq.profile, 0, 1), 0.0);
  EXPECT_LT(best_response_residuals(eq.profile).max_gap(), 1e-8);
}

TEST(TwoType, RequiresLowOpportunisticShare) {
  EXPECT_THROW(solve_app_two_type(base(2, 100.0)), DomainError);
}

// Oracle: mpmath solve of the DPP cutoff equation with
// omega = b*theta + c*(1 + E[a_j]) - c/q and q = 1/(delta*L*(Phi* - Phi**)).
TEST(Dpp, MatchesIndependentOracle) {
  GameParams p;
  p.n = 2;
  p.b = 3.0;
  p.c = 0.001;
  p.delta = 0.999;
  p.alpha = 0.01;
  p.pi_star = 0.95;
  p.L = 1000.0;
  auto eq = solve_dpp(p);
  EXPECT_EQ(eq.regime, Regime::DppLinear);
  EXPECT_NEAR(eq.omega_star(), 2.238336441349421409, 1e-10);
  EXPECT_NEAR(eq.omega_star2(), -0.76166355865057859098, 1e-10);
  EXPECT_NEAR(eq.q, 0.0013097478254612263437, 1e-14);
  EXPECT_NEAR(eq.informativeness_max, 4.4250630427048598766, 1e-9);
  double r = 0.81109707006389751339;
  EXPECT_NEAR(eq.pi, 1.0 - (1.0 - r) * (1.0 - r), 1e-10);
}

TEST(Dpp, LinearRuleAndIndependentOffenses) {
  GameParams p = base(3, 100.0);
  p.c = 0.1;
  auto eq = solve_dpp(p);
  const auto& rule = eq.profile.rule();
  for (Profile a = 0; a < 8; ++a) EXPECT_NEAR(rule(a), popcount(a) * eq.q, 1e-15);
  EXPECT_NEAR(offense_correlation(eq.profile, 0, 2), 0.0, 1e-12);
  for (Profile a = 1; a < 8; ++a) {
    for (int i = 0; i < 3; ++i) {
      if (has_bit(a, i)) EXPECT_NEAR(posterior_specific(eq.profile, i, a), p.pi_star, 1e-9);
    }
  }
  EXPECT_NEAR(eq.omega_star() - eq.omega_star2(), p.b, 1e-10);
  p.pi_o = 0.5;
  EXPECT_THROW(solve_dpp(p), DomainError);
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  c.tol = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = SolverConfig{};
  c.multistart_grid = 0;
  EXPECT_THROW(c.validate(), DomainError);
  c = SolverConfig{};
  c.damping = 1.5;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(Regime, StringRoundTrip) {
  for (auto r : {Regime::SingleAgent, Regime::AppOneType, Regime::AppTwoType,
                 Regime::AppComplements, Regime::DppLinear}) {
    EXPECT_EQ(regime_from_string(to_string(r)), r);
  }
  EXPECT_THROW(regime_from_string("nope"), DomainError);
}
