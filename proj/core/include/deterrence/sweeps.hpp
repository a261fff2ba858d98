#pragma once

#include <optional>
#include <string>
#include <vector>

#include "deterrence/equilibrium.hpp"

namespace deterrence {

enum class SolveStatus { Solved, NoEquilibrium, NonConvergence };

std::string to_string(SolveStatus s);

// Which solver a sweep drives. App dispatches like solve_app.
enum class SweepRegime { Single, App, AppOneType, AppTwoType, AppComplements, Dpp };

std::string to_string(SweepRegime r);
SweepRegime sweep_regime_from_string(const std::string& s);

struct SweepRow {
  GameParams params;
  std::optional<Regime> regime;
  SolveStatus status = SolveStatus::NoEquilibrium;
  double q = 0.0;
  double omega_star = 0.0;
  double omega_star2 = 0.0;
  double informativeness = 0.0;
  double pi = 0.0;
  double residual = 0.0;
  // Diagnostics attached to solved rows.
  std::optional<double> correlation;
  std::optional<double> substitutes_index;
  // max_i Pr(theta_i = 1 | a_i = 1).
  std::optional<double> accusation_posterior;
  std::string message;
};

// Solve one point and verify it; failures become status rows.
SweepRow solve_row(const GameParams& params, SweepRegime regime, const SolverConfig& cfg);

// One row per L, in grid order. Rows are solved in parallel.
std::vector<SweepRow> sweep_L(const GameParams& params, const std::vector<double>& L_grid,
                              SweepRegime regime, const SolverConfig& cfg = {});

// Generic sweep over an arbitrary list of parameter points.
std::vector<SweepRow> sweep_points(const std::vector<GameParams>& points, SweepRegime regime,
                                   const SolverConfig& cfg = {});

struct LimitCheck {
  bool passed = false;
  std::string witness;
};

struct TrendOptions {
  // Tolerate one non-monotone adjacent pair when both residuals are small.
  bool strict = false;
  double tol = 1e-10;
};

LimitCheck assert_app_limits(const std::vector<SweepRow>& rows, double eps,
                             const TrendOptions& opt = {});

struct DppThresholds {
  double informativeness_floor = 100.0;
  double pi_ceiling = 0.01;
  double posterior_tol = 1e-9;
};

LimitCheck assert_dpp_limits(const std::vector<SweepRow>& rows, const DppThresholds& th,
                             const TrendOptions& opt = {});

enum class ComparisonStatus { Ordered, Violated, Incomparable };

std::string to_string(ComparisonStatus s);

struct ComparisonRecord {
  ComparisonStatus status = ComparisonStatus::Incomparable;
  SweepRow small;
  SweepRow large;
  bool omega_star_higher = false;
  bool omega_star2_higher = false;
  bool informativeness_lower = false;
  bool pi_higher = false;
  std::string message;
};

// APP one-offense equilibria at n_small and n_large agents, same L.
ComparisonRecord compare_n(const GameParams& params, int n_small, int n_large, double L,
                           const SolverConfig& cfg = {});

}  // namespace deterrence
