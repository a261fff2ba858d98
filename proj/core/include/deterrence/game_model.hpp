#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "deterrence/distributions.hpp"

namespace deterrence {

// Offense or report vector; bit i belongs to agent i.
using Profile = std::uint32_t;

inline constexpr int kMaxAgents = 16;

inline int popcount(Profile p) { return __builtin_popcount(p); }
inline bool has_bit(Profile p, int i) { return (p >> i) & 1u; }
inline Profile full_profile(int n) { return (Profile{1} << n) - 1u; }

struct GameParams {
  int n = 1;
  double b = 1.0;
  double c = 1.0;
  double L = 10.0;
  double delta = 0.95;
  double alpha = 0.5;
  double pi_star = 0.95;
  double pi_o = 1.0;
  double gamma = 0.0;
  ShockDistribution shock{};

  // Throws DomainError naming the first offending field.
  void validate() const;

  double l_star() const { return pi_star / (1.0 - pi_star); }
  // Posterior-odds threshold net of the virtuous type's prior mass.
  double l_star_two_type() const {
    return pi_star * (1.0 - pi_o) / ((1.0 - pi_star) * pi_o);
  }
  double psi(double cutoff) const {
    return mixed_report_prob(cutoff, delta, alpha, shock);
  }

  bool operator==(const GameParams&) const = default;
};

// Sparse probability vector over {0,1}^n.
class OffenseDistribution {
 public:
  using Entry = std::pair<Profile, double>;

  OffenseDistribution() = default;
  OffenseDistribution(int n, std::vector<Entry> masses);

  static OffenseDistribution independent(std::span<const double> marginals);
  static OffenseDistribution point_mass(int n, Profile theta);
  static OffenseDistribution all_zero(int n) { return point_mass(n, 0); }
  // k offenses w.p. 1-r and k-1 offenses w.p. r, uniform over target sets.
  static OffenseDistribution symmetric_kr(int n, int k, double r);

  int n() const { return n_; }
  const std::vector<Entry>& support() const { return support_; }
  double prob(Profile theta) const;
  double marginal(int i) const;

  bool operator==(const OffenseDistribution&) const = default;

 private:
  int n_ = 0;
  std::vector<Entry> support_;
};

struct KrTag {
  int k = 1;
  double r = 0.0;
  bool operator==(const KrTag&) const = default;
};

// Opportunistic type's strategy. The virtuous type always plays all-zero.
struct PrincipalStrategy {
  OffenseDistribution opportunistic;
  std::optional<KrTag> kr;

  static PrincipalStrategy from(OffenseDistribution d) { return {std::move(d), std::nullopt}; }
  static PrincipalStrategy symmetric(int n, int k, double r);

  bool operator==(const PrincipalStrategy&) const = default;
};

class ConvictionRule {
 public:
  ConvictionRule() = default;

  // q indexed by report profile; size must be 2^n.
  static ConvictionRule table(int n, std::vector<double> q);
  // q_by_count[m] is the conviction probability with m accusations.
  static ConvictionRule symmetric(std::vector<double> q_by_count);
  static ConvictionRule linear(int n, double q_step);
  static ConvictionRule never(int n);

  int n() const { return n_; }
  double operator()(Profile a) const { return q_[a]; }
  const std::vector<double>& values() const { return q_; }
  const std::optional<std::vector<double>>& by_count() const { return by_count_; }

  // Strict half of monotonicity: every agent is pivotal somewhere.
  bool every_agent_pivotal() const;

  bool operator==(const ConvictionRule&) const = default;

 private:
  void validate() const;

  int n_ = 0;
  std::vector<double> q_;
  std::optional<std::vector<double>> by_count_;
};

struct AgentCutoffs {
  double omega_star = 0.0;
  double omega_star2 = 0.0;
  bool operator==(const AgentCutoffs&) const = default;
};

enum class Adjudication { Aggregate, Distinct };

class StrategyProfile {
 public:
  StrategyProfile(GameParams params, PrincipalStrategy principal,
                  std::vector<AgentCutoffs> cutoffs, ConvictionRule rule,
                  Adjudication adjudication);
  static StrategyProfile symmetric(GameParams params, PrincipalStrategy principal,
                                   AgentCutoffs cutoffs, ConvictionRule rule,
                                   Adjudication adjudication);

  const GameParams& params() const { return params_; }
  int n() const { return params_.n; }
  const PrincipalStrategy& principal() const { return principal_; }
  const std::vector<AgentCutoffs>& cutoffs() const { return cutoffs_; }
  const ConvictionRule& rule() const { return rule_; }
  Adjudication adjudication() const { return adjudication_; }

  // Accusation probability of agent i given whether the offense happened.
  double accusation_prob(int i, bool witnessed) const {
    return witnessed ? psi_star_[i] : psi_star2_[i];
  }
  // Psi* - Psi** without cancellation.
  double accusation_gap(int i) const { return psi_gap_[i]; }

  // Prior over theta mixing in the virtuous type (sparse, all-zero first).
  const std::vector<OffenseDistribution::Entry>& prior() const { return prior_; }
  double prior_prob(Profile theta) const;

  bool operator==(const StrategyProfile& o) const {
    return params_ == o.params_ && principal_ == o.principal_ &&
           cutoffs_ == o.cutoffs_ && rule_ == o.rule_ && adjudication_ == o.adjudication_;
  }

 private:
  GameParams params_;
  PrincipalStrategy principal_;
  std::vector<AgentCutoffs> cutoffs_;
  ConvictionRule rule_;
  Adjudication adjudication_;
  std::vector<double> psi_star_, psi_star2_, psi_gap_;
  std::vector<OffenseDistribution::Entry> prior_;
};

double aggregate_guilt_prior(const OffenseDistribution& d);
double aggregate_guilt_prior(const PrincipalStrategy& s);
// Pr(theta_bar = 1) under the full prior, virtuous type included.
double prior_guilt(const StrategyProfile& profile);

double report_profile_likelihood(const StrategyProfile& profile, Profile theta, Profile a);
// Pr(a) for every report profile.
std::vector<double> report_probabilities(const StrategyProfile& profile);

double posterior_aggregate(const StrategyProfile& profile, Profile a);
std::vector<double> posterior_aggregate_all(const StrategyProfile& profile);
double posterior_specific(const StrategyProfile& profile, int i, Profile a);
// Indexed [a][i].
std::vector<std::vector<double>> posterior_specific_all(const StrategyProfile& profile);

enum class JudgeDecision { Acquit, Indifferent, Convict };

inline constexpr double kJudgeTolerance = 1e-9;

JudgeDecision classify_posterior(double posterior, double pi_star);
JudgeDecision judge_app(double posterior_aggregate, double pi_star);
std::vector<JudgeDecision> judge_app(std::span<const double> posteriors, double pi_star);
JudgeDecision judge_dpp(std::span<const double> specific_posteriors, double pi_star);
std::vector<JudgeDecision> judge_dpp(const std::vector<std::vector<double>>& per_profile,
                                     double pi_star);

enum class Interaction { Substitutes, Complements, Neutral };

struct SubstitutesResult {
  double index = 0.0;
  Interaction kind = Interaction::Neutral;
};

inline constexpr double kInteractionTolerance = 1e-12;

SubstitutesResult substitutes_index(const ConvictionRule& rule);

// Pr(s=1 | theta) for every theta.
std::vector<double> conviction_given_theta(const StrategyProfile& profile);
double conviction_probability(const StrategyProfile& profile, Profile theta);
// Pr(s=1 | theta) - Pr(s=1 | 0) for every theta, accumulated from
// per-offense increments so that it stays accurate when L is huge.
std::vector<double> conviction_increase_over_innocence(const StrategyProfile& profile);
double marginal_conviction_increase(const StrategyProfile& profile, int i,
                                    Profile theta_minus_i);

// Pr(a | theta_bar=1) / Pr(a | theta_bar=0).
double informativeness(const StrategyProfile& profile, Profile a);
std::vector<double> informativeness_all(const StrategyProfile& profile);

// Pr(theta_i=1 | theta_j=1) - Pr(theta_i=1 | theta_j=0).
double offense_correlation(const OffenseDistribution& d, int i, int j);
double offense_correlation(const PrincipalStrategy& s, int i, int j);
// Same statistic under the full prior.
double offense_correlation(const StrategyProfile& profile, int i, int j);

std::string to_string(JudgeDecision d);
std::string to_string(Interaction k);
std::string to_string(Adjudication a);

namespace detail {

// Sum of f(a) * Pr(a | theta) over all a, for every theta.
void kernel_forward(const StrategyProfile& profile, std::vector<double>& f,
                    int skip_agent = -1);
// Sum of mu(theta) * Pr(a | theta) over all theta, for every a.
void kernel_backward(const StrategyProfile& profile, std::vector<double>& mu,
                     int skip_agent = -1);
std::vector<double> dense_prior(const StrategyProfile& profile);

}  // namespace detail

}  // namespace deterrence
