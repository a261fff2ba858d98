#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <string>

#include "deterrence/errors.hpp"
#include "deterrence/game_model.hpp"
#include "support/generators.hpp"

using namespace deterrence;
using deterrence::proptest::Gen;

namespace {

GameParams two_agents() {
  GameParams p;
  p.n = 2;
  p.b = 1.0;
  p.c = 2.0;
  p.L = 50.0;
  p.delta = 0.9;
  p.alpha = 0.4;
  p.pi_star = 0.9;
  return p;
}

StrategyProfile sample_profile() {
  OffenseDistribution d(2, {{0b00, 0.3}, {0b01, 0.3}, {0b10, 0.3}, {0b11, 0.1}});
  return StrategyProfile(two_agents(), PrincipalStrategy::from(d), {{0.5, -0.5}, {0.2, -1.0}},
                         ConvictionRule::table(2, {0.0, 0.1, 0.2, 0.9}), Adjudication::Aggregate);
}

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(GameParams, ValidateNamesOffendingField) {
  GameParams p;
  p.delta = 1.5;
  EXPECT_NE(error_of([&] { p.validate(); }).find("delta"), std::string::npos);
  p = GameParams{};
  p.c = 0.0;
  EXPECT_NE(error_of([&] { p.validate(); }).find("c"), std::string::npos);
  p = GameParams{};
  p.n = 17;
  EXPECT_NE(error_of([&] { p.validate(); }).find("n"), std::string::npos);
  p = GameParams{};
  p.pi_o = 0.0;
  EXPECT_NE(error_of([&] { p.validate(); }).find("pi_o"), std::string::npos);
  p = GameParams{};
  p.gamma = 0.1;
  EXPECT_THROW(p.validate(), DomainError);
  EXPECT_NO_THROW(GameParams{}.validate());
}

TEST(GameParams, OddsThresholds) {
  GameParams p;
  p.pi_star = 0.95;
  p.pi_o = 0.5;
  EXPECT_NEAR(p.l_star(), 19.0, 1e-12);
  EXPECT_NEAR(p.l_star_two_type(), 19.0, 1e-12);
  p.pi_o = 0.8;
  EXPECT_NEAR(p.l_star_two_type(), 19.0 * 0.2 / 0.8, 1e-12);
}

TEST(OffenseDistribution, IndependentProductAndMarginals) {
  std::array<double, 2> m{0.8, 0.3};
  auto d = OffenseDistribution::independent(m);
  EXPECT_NEAR(d.prob(0b00), 0.2 * 0.7, 1e-15);
  EXPECT_NEAR(d.prob(0b11), 0.8 * 0.3, 1e-15);
  EXPECT_NEAR(d.marginal(0), 0.8, 1e-15);
  EXPECT_NEAR(d.marginal(1), 0.3, 1e-15);
  EXPECT_NEAR(offense_correlation(d, 0, 1), 0.0, 1e-15);
}

TEST(OffenseDistribution, RejectsBadMass) {
  EXPECT_THROW(OffenseDistribution(2, {{0b00, 0.5}, {0b01, 0.4}}), DomainError);
  EXPECT_THROW(OffenseDistribution(2, {{0b00, 1.2}, {0b01, -0.2}}), DomainError);
  EXPECT_THROW(OffenseDistribution(1, {{0b10, 1.0}}), DomainError);
}

TEST(OffenseDistribution, SymmetricKr) {
  auto d = OffenseDistribution::symmetric_kr(3, 2, 0.25);
  double k1 = d.prob(0b001) + d.prob(0b010) + d.prob(0b100);
  double k2 = d.prob(0b011) + d.prob(0b101) + d.prob(0b110);
  EXPECT_NEAR(k1, 0.25, 1e-15);
  EXPECT_NEAR(k2, 0.75, 1e-15);
  EXPECT_NEAR(d.prob(0b011), 0.25, 1e-15);
  EXPECT_THROW(OffenseDistribution::symmetric_kr(3, 4, 0.1), DomainError);
}

TEST(AggregateGuilt, IntroductionExamples) {
  std::array<double, 2> m{0.8, 0.8};
  EXPECT_NEAR(aggregate_guilt_prior(OffenseDistribution::independent(m)), 0.96, 1e-15);
  OffenseDistribution neg(2, {{0b00, 0.01}, {0b01, 0.495}, {0b10, 0.495}});
  EXPECT_NEAR(aggregate_guilt_prior(neg), 0.99, 1e-15);
  EXPECT_LT(offense_correlation(neg, 0, 1), 0.0);
}

TEST(Judge, ClassifiesWithRelativeTolerance) {
  EXPECT_EQ(judge_app(0.96, 0.9), JudgeDecision::Convict);
  EXPECT_EQ(judge_app(0.5, 0.9), JudgeDecision::Acquit);
  EXPECT_EQ(judge_app(0.9 * (1 + 1e-12), 0.9), JudgeDecision::Indifferent);
  std::array<double, 2> s{0.8, 0.8};
  EXPECT_EQ(judge_dpp(s, 0.9), JudgeDecision::Acquit);
  std::array<double, 2> s2{0.495, 0.495};
  EXPECT_EQ(judge_dpp(s2, 0.5), JudgeDecision::Acquit);
  std::array<double, 1> s3{0.51};
  EXPECT_EQ(judge_dpp(s3, 0.5), JudgeDecision::Convict);
}

TEST(ConvictionRule, RefinementsEnforced) {
  EXPECT_THROW(ConvictionRule::table(2, {0.1, 0.2, 0.2, 1.0}), DomainError);
  EXPECT_THROW(ConvictionRule::table(2, {0.0, 0.5, 0.2, 0.4}), DomainError);
  EXPECT_THROW(ConvictionRule::table(2, {0.0, 0.5, 0.2}), DomainError);
  EXPECT_THROW(ConvictionRule::table(1, {0.0, 1.5}), DomainError);
  auto never = ConvictionRule::never(2);
  EXPECT_FALSE(never.every_agent_pivotal());
  auto lin = ConvictionRule::linear(3, 0.2);
  EXPECT_NEAR(lin(0b111), 0.6, 1e-15);
  EXPECT_TRUE(lin.every_agent_pivotal());
  EXPECT_THROW(ConvictionRule::linear(3, 0.4), DomainError);
}

TEST(SubstitutesIndex, SignsAndClassification) {
  auto all_only = ConvictionRule::table(2, {0.0, 0.0, 0.0, 0.3});
  auto r = substitutes_index(all_only);
  EXPECT_NEAR(r.index, 0.3, 1e-15);
  EXPECT_EQ(r.kind, Interaction::Substitutes);
  auto comp = ConvictionRule::symmetric({0.0, 0.7, 1.0});
  EXPECT_NEAR(substitutes_index(comp).index, 1.0 - 1.4, 1e-15);
  EXPECT_EQ(substitutes_index(comp).kind, Interaction::Complements);
  EXPECT_EQ(substitutes_index(ConvictionRule::linear(2, 0.3)).index, 0.0);
  EXPECT_EQ(substitutes_index(ConvictionRule::linear(2, 0.3)).kind, Interaction::Neutral);
  EXPECT_THROW(substitutes_index(ConvictionRule::linear(3, 0.1)), DomainError);
}

TEST(StrategyProfile, ConstructionChecks) {
  auto p = two_agents();
  auto d = OffenseDistribution::all_zero(2);
  EXPECT_THROW(StrategyProfile(p, PrincipalStrategy::from(d), {{0.0, -1.0}},
                               ConvictionRule::never(2), Adjudication::Aggregate),
               DomainError);
  EXPECT_THROW(StrategyProfile(p, PrincipalStrategy::from(d), {{0.0, -1.0}, {0.0, -1.0}},
                               ConvictionRule::never(1), Adjudication::Aggregate),
               DomainError);
}

TEST(StrategyProfile, VirtuousMassEntersPrior) {
  auto p = two_agents();
  p.pi_o = 0.6;
  auto prof = StrategyProfile::symmetric(p, PrincipalStrategy::symmetric(2, 1, 0.0), {0.0, -1.0},
                                         ConvictionRule::never(2), Adjudication::Aggregate);
  EXPECT_NEAR(prof.prior_prob(0), 0.4, 1e-15);
  EXPECT_NEAR(prof.prior_prob(0b01), 0.3, 1e-15);
  EXPECT_NEAR(prior_guilt(prof), 0.6, 1e-15);
}

TEST(Posteriors, LikelihoodByHand) {
  auto prof = sample_profile();
  const auto& p = prof.params();
  double s0 = p.psi(0.5), s0n = p.psi(-0.5), s1 = p.psi(0.2), s1n = p.psi(-1.0);
  // theta = (1,0), a = (1,1): agent 0 witnessed and accuses, agent 1 did not and accuses.
  EXPECT_NEAR(report_profile_likelihood(prof, 0b01, 0b11), s0 * s1n, 1e-15);
  EXPECT_NEAR(report_profile_likelihood(prof, 0b10, 0b01), s0n * (1 - s1), 1e-15);
  auto probs = report_probabilities(prof);
  double total = 0.0;
  for (double x : probs) total += x;
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Posteriors, AggregateMatchesBayes) {
  auto prof = sample_profile();
  for (Profile a = 0; a < 4; ++a) {
    double num = 0.0, den = 0.0;
    for (Profile t = 0; t < 4; ++t) {
      double w = prof.prior_prob(t) * report_profile_likelihood(prof, t, a);
      den += w;
      if (t != 0) num += w;
    }
    EXPECT_NEAR(posterior_aggregate(prof, a), num / den, 1e-14);
    // Specific posterior for agent 1.
    double num1 = 0.0;
    for (Profile t = 0; t < 4; ++t) {
      if (has_bit(t, 1)) num1 += prof.prior_prob(t) * report_profile_likelihood(prof, t, a);
    }
    EXPECT_NEAR(posterior_specific(prof, 1, a), num1 / den, 1e-14);
  }
}

TEST(Informativeness, TimesPriorOddsGivesPosteriorOdds) {
  Gen g(31);
  for (int j = 0; j < 100; ++j) {
    auto prof = proptest::random_profile(g, g.integer(1, 4));
    double guilt = prior_guilt(prof);
    if (!(guilt > 0.0 && guilt < 1.0)) continue;
    double prior_odds = guilt / (1.0 - guilt);
    for (Profile a = 0; a <= full_profile(prof.n()); ++a) {
      double post = posterior_aggregate(prof, a);
      double odds = informativeness(prof, a) * prior_odds;
      EXPECT_NEAR(odds / (1.0 + odds), post, 1e-12);
    }
  }
}

TEST(Correlation, FullPriorIncludesVirtuousType) {
  auto p = two_agents();
  p.pi_o = 0.5;
  auto prof = StrategyProfile::symmetric(p, PrincipalStrategy::symmetric(2, 2, 0.0), {0.0, -1.0},
                                         ConvictionRule::never(2), Adjudication::Aggregate);
  // Opportunistic always commits both: perfectly positive under the full prior.
  EXPECT_NEAR(offense_correlation(prof, 0, 1), 1.0, 1e-15);
  EXPECT_THROW(offense_correlation(prof.principal(), 0, 1), DomainError);
}

TEST(Conviction, IncrementsAccurateForHugePunishment) {
  auto prof = sample_profile();
  auto direct = conviction_given_theta(prof);
  auto inc = conviction_increase_over_innocence(prof);
  for (Profile t = 0; t < 4; ++t) {
    EXPECT_NEAR(inc[t], direct[t] - direct[0], 1e-15);
    EXPECT_NEAR(conviction_probability(prof, t), direct[t], 1e-15);
  }
  EXPECT_NEAR(marginal_conviction_increase(prof, 0, 0b00), direct[0b01] - direct[0], 1e-15);
  EXPECT_NEAR(marginal_conviction_increase(prof, 1, 0b01), direct[0b11] - direct[0b01], 1e-15);
}

TEST(Kernels, ForwardMatchesBruteForce) {
  Gen g(41);
  for (int j = 0; j < 20; ++j) {
    int n = g.integer(1, 5);
    auto prof = proptest::random_profile(g, n);
    std::size_t size = std::size_t{1} << n;
    std::vector<double> f(size);
    for (auto& x : f) x = g.uniform(-1.0, 1.0);
    auto out = f;
    detail::kernel_forward(prof, out);
    for (Profile t = 0; t < size; ++t) {
      double expect = 0.0;
      for (Profile a = 0; a < size; ++a) expect += f[a] * report_profile_likelihood(prof, t, a);
      EXPECT_NEAR(out[t], expect, 1e-13);
    }
    std::vector<double> mu(size);
    for (auto& x : mu) x = g.uniform(0.0, 1.0);
    auto back = mu;
    detail::kernel_backward(prof, back);
    for (Profile a = 0; a < size; ++a) {
      double expect = 0.0;
      for (Profile t = 0; t < size; ++t) expect += mu[t] * report_profile_likelihood(prof, t, a);
      EXPECT_NEAR(back[a], expect, 1e-13);
    }
  }
}
