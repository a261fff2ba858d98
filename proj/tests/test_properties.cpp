#include <gtest/gtest.h>

#include <cmath>

#include "deterrence/equilibrium.hpp"
#include "deterrence/errors.hpp"
#include "deterrence/verification.hpp"
#include "support/generators.hpp"

using namespace deterrence;
using deterrence::proptest::Gen;

// Every solved equilibrium must survive independent verification, and the
// judge must be exactly indifferent where she mixes.

TEST(Property, SingleAgentEquilibriaVerify) {
  Gen g(1001);
  int solved = 0;
  for (int j = 0; j < 80; ++j) {
    auto p = proptest::single_agent_params(g);
    try {
      auto eq = solve_single_agent(p);
      ++solved;
      EXPECT_LT(best_response_residuals(eq.profile).max_gap(), 1e-7) << "draw " << j;
      EXPECT_NEAR(posterior_aggregate(eq.profile, 1), p.pi_star, 1e-9);
      EXPECT_LT(posterior_aggregate(eq.profile, 0), p.pi_star);
      EXPECT_GT(eq.informativeness_max, 1.0);
    } catch (const NoEquilibrium&) {
    }
  }
  EXPECT_GT(solved, 40);
}

TEST(Property, AppOneTypeEquilibriaVerify) {
  Gen g(1002);
  int solved = 0;
  for (int j = 0; j < 80; ++j) {
    auto p = proptest::app_params(g);
    try {
      auto eq = solve_app_one_type(p);
      ++solved;
      auto d = best_response_residuals(eq.profile);
      EXPECT_LT(d.max_gap(), 1e-7) << "draw " << j << " n=" << p.n;
      Profile all = full_profile(p.n);
      EXPECT_NEAR(posterior_aggregate(eq.profile, all), p.pi_star, 1e-9);
      EXPECT_NEAR(eq.q, eq.profile.rule()(all), 0.0);
      if (p.n == 2) {
        ASSERT_TRUE(d.substitutes.has_value());
        EXPECT_EQ(d.substitutes->kind, Interaction::Substitutes);
      }
      EXPECT_LT(eq.pi, p.pi_o + 1e-12);
    } catch (const NoEquilibrium&) {
    }
  }
  EXPECT_GT(solved, 20);
}

TEST(Property, DppEquilibriaVerify) {
  Gen g(1003);
  int solved = 0;
  for (int j = 0; j < 60; ++j) {
    auto p = proptest::dpp_params(g);
    try {
      auto eq = solve_dpp(p);
      ++solved;
      EXPECT_LT(best_response_residuals(eq.profile).max_gap(), 1e-7) << "draw " << j;
      EXPECT_NEAR(eq.omega_star() - eq.omega_star2(), p.b, 1e-9);
      if (p.n == 2) EXPECT_NEAR(substitutes_index(eq.profile.rule()).index, 0.0, 1e-15);
      EXPECT_NEAR(offense_correlation(eq.profile, 0, 1), 0.0, 1e-12);
    } catch (const NoEquilibrium&) {
    }
  }
  EXPECT_GT(solved, 20);
}

TEST(Property, ComplementsProfilesVerify) {
  Gen g(1004);
  int solved = 0;
  for (int j = 0; j < 40; ++j) {
    GameParams p;
    p.n = 2;
    p.b = g.uniform(0.5, 2.0);
    p.c = g.uniform(2.0, 12.0);
    p.delta = g.uniform(0.8, 0.99);
    p.alpha = g.uniform(0.2, 0.8);
    p.pi_star = g.uniform(0.8, 0.97);
    double q = g.uniform(0.55, 1.0);
    try {
      auto eq = solve_app_complements(p, q);
      ++solved;
      EXPECT_LT(best_response_residuals(eq.profile).max_gap(), 1e-7) << "draw " << j;
      EXPECT_EQ(substitutes_index(eq.profile.rule()).kind, Interaction::Complements);
      EXPECT_GT(offense_correlation(eq.profile, 0, 1), 0.0);
      EXPECT_GT(*eq.L_value, 0.0);
    } catch (const NoEquilibrium&) {
    }
  }
  EXPECT_GT(solved, 20);
}

TEST(Property, PosteriorsAreProbabilities) {
  Gen g(1005);
  for (int j = 0; j < 100; ++j) {
    auto adj = g.coin() ? Adjudication::Aggregate : Adjudication::Distinct;
    auto prof = proptest::random_profile(g, g.integer(1, 4), adj);
    auto rp = report_probabilities(prof);
    double total = 0.0;
    for (double x : rp) total += x;
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (double post : posterior_aggregate_all(prof)) {
      if (std::isnan(post)) continue;
      EXPECT_GE(post, 0.0);
      EXPECT_LE(post, 1.0);
    }
  }
}

TEST(Property, ConvictionIncreasesMatchDifferences) {
  Gen g(1006);
  for (int j = 0; j < 100; ++j) {
    auto prof = proptest::random_profile(g, g.integer(1, 4));
    auto direct = conviction_given_theta(prof);
    auto inc = conviction_increase_over_innocence(prof);
    for (Profile t = 0; t <= full_profile(prof.n()); ++t) {
      EXPECT_NEAR(inc[t], direct[t] - direct[0], 1e-12);
      EXPECT_GE(inc[t], -1e-15);  // monotone rule, Psi* >= Psi**
    }
  }
}

TEST(Property, RandomRulesSatisfyRefinements) {
  Gen g(1007);
  for (int j = 0; j < 200; ++j) {
    auto rule = proptest::random_rule(g, g.integer(1, 4));
    EXPECT_TRUE(proptest::satisfies_refinements(rule));
    if (rule.n() == 2) {
      double idx = rule(0b11) + rule(0b00) - rule(0b01) - rule(0b10);
      EXPECT_NEAR(substitutes_index(rule).index, idx, 1e-15);
    }
  }
}

TEST(Property, SubstitutesMeanSmallerGainFromSecondOffense) {
  Gen g(1008);
  for (int j = 0; j < 300; ++j) {
    auto prof = proptest::random_profile(g, 2);
    double idx = substitutes_index(prof.rule()).index;
    double combo = principal_payoff(prof, 0b11) + principal_payoff(prof, 0b00) -
                   principal_payoff(prof, 0b01) - principal_payoff(prof, 0b10);
    double L = prof.params().L;
    // u11 + u00 - u10 - u01 = -L * (P11 + P00 - P10 - P01)
    auto cg = conviction_given_theta(prof);
    EXPECT_NEAR(combo, -L * (cg[3] + cg[0] - cg[1] - cg[2]), 1e-9 * std::max(1.0, L));
    if (std::abs(idx) > 1e-9 && std::abs(combo) > 1e-9 * L) {
      EXPECT_EQ(idx > 0.0, combo < 0.0) << "draw " << j;
    }
  }
}
