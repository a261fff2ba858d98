#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deterrence/game_model.hpp"

namespace deterrence {

enum class Regime { SingleAgent, AppOneType, AppTwoType, AppComplements, DppLinear };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 10'000;
  // Kept for config compatibility; the bracketing solvers do not iterate maps.
  double damping = 0.5;
  // Coarse scan segments; each is subdivided kScanRefinement times.
  int multistart_grid = 16;

  void validate() const;
};

inline constexpr int kScanRefinement = 48;

// A distinct fixed point that was found but not selected.
struct AlternativeSolution {
  double q = 0.0;
  double omega_star = 0.0;
  double omega_star2 = 0.0;
  double pi = 0.0;
  int k = 0;
  double r = 0.0;
  double residual = 0.0;
};

struct EquilibriumProfile {
  EquilibriumProfile(Regime r, StrategyProfile p) : regime(r), profile(std::move(p)) {}

  Regime regime = Regime::SingleAgent;
  StrategyProfile profile;
  // Headline conviction probability: q, q_n, q(1,0) for complements, q* for DPP.
  double q = 0.0;
  double pi = 0.0;
  // max_a I(a); per-agent Psi*/Psi** under DPP.
  double informativeness_max = 0.0;
  std::optional<double> beta;
  double l_star = 0.0;
  double residual = 0.0;
  std::optional<KrTag> kr;
  // Punishment implied by the complements construction.
  std::optional<double> L_value;
  std::vector<AlternativeSolution> alternatives;

  double omega_star() const { return profile.cutoffs().front().omega_star; }
  double omega_star2() const { return profile.cutoffs().front().omega_star2; }
};

EquilibriumProfile solve_single_agent(const GameParams& params, const SolverConfig& cfg = {});

// Symmetric APP equilibrium with one offense at most; n = 1 delegates to
// solve_single_agent. Requires pi_o >= pi_star.
EquilibriumProfile solve_app_one_type(const GameParams& params, const SolverConfig& cfg = {});

// Requires pi_o < pi_star and n >= 2.
EquilibriumProfile solve_app_two_type(const GameParams& params, const SolverConfig& cfg = {});

// n = 2 rule q(1,1)=1, q(1,0)=q(0,1)=q_target, q(0,0)=0. params.L is
// ignored; the implied punishment is returned in L_value.
EquilibriumProfile solve_app_complements(const GameParams& params, double q_target,
                                         const SolverConfig& cfg = {});

struct LInterval {
  double L_low = 0.0;
  double L_high = 0.0;
  double q_at_low = 0.0;
  double q_at_high = 0.0;
};

// min/max of the complements punishment over a q-grid on [1/2, 1].
LInterval complements_L_interval(const GameParams& params, const SolverConfig& cfg = {});

// Complements equilibrium at params.L, locating q in (1/2, 1].
EquilibriumProfile solve_app_complements_at_L(const GameParams& params,
                                              const SolverConfig& cfg = {});

// Linear-rule equilibrium under distinct adjudication. Requires pi_o = 1.
EquilibriumProfile solve_dpp(const GameParams& params, const SolverConfig& cfg = {});

// APP dispatcher: single agent, one type, two type; for n = 2 falls back to
// the complements regime when no one-offense equilibrium exists.
EquilibriumProfile solve_app(const GameParams& params, const SolverConfig& cfg = {});

namespace detail {

// Unrestricted symmetric one-offense solver (no n = 1 delegation, no pi_o
// check beyond pi <= pi_o).
EquilibriumProfile solve_one_offense_general(const GameParams& params,
                                             const SolverConfig& cfg);

}  // namespace detail

}  // namespace deterrence
