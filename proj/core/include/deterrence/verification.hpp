#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "deterrence/game_model.hpp"

namespace deterrence {

struct OutcomeEntry {
  Profile theta = 0;
  Profile a = 0;
  bool convicted = false;
  double p = 0.0;
};

// Exact joint distribution of (theta, a, s), sorted by (theta, a, s).
struct OutcomeTable {
  int n = 0;
  std::vector<OutcomeEntry> entries;

  double total() const;
  double theta_marginal(Profile theta) const;
  double report_marginal(Profile a) const;
  double report_and_outcome(Profile a, bool convicted) const;
  double conviction_probability() const;
};

OutcomeTable enumerate_outcomes(const StrategyProfile& profile);

// Opportunistic payoff: offenses in theta minus L * Pr(s=1 | theta).
double principal_payoff(const StrategyProfile& profile, Profile theta);

struct Diagnostics {
  double principal_gap = 0.0;
  double agent_gap = 0.0;
  double judge_gap = 0.0;
  // Under the full prior between agents 0 and 1, when defined.
  std::optional<double> correlation;
  std::optional<SubstitutesResult> substitutes;
  std::vector<double> per_profile_informativeness;
  // Closed-form best-response cutoffs per agent; NaN when the agent never
  // sees that offense state.
  std::vector<AgentCutoffs> best_response;

  double max_gap() const;
};

Diagnostics best_response_residuals(const StrategyProfile& profile);

struct EventEstimate {
  std::uint64_t count = 0;
  double freq = 0.0;
  double analytic = 0.0;
  double std_err = 0.0;  // binomial, from the analytic probability
};

struct MonteCarloReport {
  std::uint64_t draws = 0;
  std::uint64_t seed = 0;
  int n = 0;
  // Index a * 2 + s.
  std::vector<EventEstimate> report_outcome;
  // Index a.
  std::vector<EventEstimate> report;
  // Index theta.
  std::vector<EventEstimate> theta;
  // Empirical Pr(theta_bar = 1 | a); NaN where a never occurred.
  std::vector<double> empirical_posteriors;
  std::vector<double> analytic_posteriors;

  // Largest |freq - analytic| / std_err over report and outcome events.
  // Events with zero analytic probability count as infinite if observed.
  double max_abs_z() const;
};

MonteCarloReport monte_carlo(const StrategyProfile& profile, std::uint64_t draws,
                             std::uint64_t seed);

// Worker count from DETERRENCE_LAB_THREADS (0 or unset = hardware).
unsigned worker_count();

}  // namespace deterrence
