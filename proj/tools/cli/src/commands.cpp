#include "deterrence_cli/commands.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "deterrence/equilibrium.hpp"
#include "deterrence/errors.hpp"
#include "deterrence/sweeps.hpp"
#include "deterrence/verification.hpp"
#include "deterrence_cli/serialize.hpp"

namespace deterrence::cli {

namespace {

void emit(const RunConfig& cfg, const std::string& key, const std::string& text, std::ostream& out) {
  if (auto path = cfg.get(key)) {
    atomic_write(*path, text);
  } else {
    out << text;
  }
}

Json failure_record(const std::string& status, const std::string& regime, const std::string& msg) {
  return {{"schema_version", kSchemaVersion},
          {"status", status},
          {"regime", regime},
          {"message", msg}};
}

EquilibriumProfile solve_regime(const RunConfig& cfg, const GameParams& p, const SolverConfig& s,
                                const std::string& regime) {
  if (regime == "single") return solve_single_agent(p, s);
  if (regime == "app") return solve_app(p, s);
  if (regime == "app-one-type") return solve_app_one_type(p, s);
  if (regime == "app-two-type") return solve_app_two_type(p, s);
  if (regime == "app-complements") {
    if (auto q = cfg.number("q_target")) return solve_app_complements(p, *q, s);
    return solve_app_complements_at_L(p, s);
  }
  if (regime == "dpp") return solve_dpp(p, s);
  throw ConfigError("regime: unknown value '" + regime + "'");
}

StrategyProfile profile_from_config(const RunConfig& cfg) {
  auto path = cfg.get("profile");
  if (!path) throw ConfigError("profile: path to a profile JSON is required");
  Json j;
  try {
    j = Json::parse(read_file(*path));
  } catch (const Json::exception& e) {
    throw ConfigError("profile: " + std::string(e.what()));
  }
  try {
    return load_profile(j);
  } catch (const Json::exception& e) {
    throw ConfigError("profile: " + std::string(e.what()));
  } catch (const DomainError& e) {
    throw ConfigError("profile: " + std::string(e.what()));
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  GameParams p = cfg.game_params();
  SolverConfig s = cfg.solver_config();
  std::string regime = cfg.get_or("regime", "app");
  try {
    auto eq = solve_regime(cfg, p, s, regime);
    Json j = to_json(eq);
    j["diagnostics"] = to_json(best_response_residuals(eq.profile));
    emit(cfg, "out", dump(j), out);
    return kExitOk;
  } catch (const NoEquilibrium& e) {
    emit(cfg, "out", dump(failure_record("NoEquilibrium", regime, e.what())), out);
    err << "no equilibrium: " << e.what() << '\n';
    return kExitNoEquilibrium;
  } catch (const NonConvergence& e) {
    emit(cfg, "out", dump(failure_record("NonConvergence", regime, e.what())), out);
    err << "non-convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  }
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  StrategyProfile profile = profile_from_config(cfg);
  double tol = cfg.solver_config().tol;
  auto d = best_response_residuals(profile);
  Json j = to_json(d);
  j["schema_version"] = kSchemaVersion;
  j["tol"] = tol;
  bool ok = d.max_gap() <= tol;
  j["passed"] = ok;
  emit(cfg, "out", dump(j), out);
  if (!ok) {
    err << "verification failed: principal_gap=" << format_number(d.principal_gap)
        << " agent_gap=" << format_number(d.agent_gap)
        << " judge_gap=" << format_number(d.judge_gap) << '\n';
    return kExitVerification;
  }
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  StrategyProfile profile = profile_from_config(cfg);
  auto seed = cfg.integer("seed");
  if (!seed) throw ConfigError("seed: simulate requires an explicit seed");
  if (*seed < 0) throw ConfigError("seed must be non-negative");
  long long draws = cfg.integer("draws", 1'000'000);
  if (draws < 1) throw ConfigError("draws must be >= 1");
  auto report = monte_carlo(profile, static_cast<std::uint64_t>(draws),
                            static_cast<std::uint64_t>(*seed));
  emit(cfg, "out", dump(to_json(report)), out);
  if (auto csv = cfg.get("csv")) atomic_write(*csv, monte_carlo_csv(report));
  (void)err;
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  GameParams p = cfg.game_params();
  SolverConfig s = cfg.solver_config();
  SweepRegime regime;
  try {
    regime = sweep_regime_from_string(cfg.get_or("regime", "app"));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("regime: ") + e.what());
  }
  std::vector<double> grid = L_grid(cfg);
  std::vector<SweepRow> rows;
  try {
    rows = sweep_L(p, grid, regime, s);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("L_grid: ") + e.what());
  }
  emit(cfg, "out", sweep_csv(rows, regime), out);

  std::string check = cfg.get_or("check", "none");
  TrendOptions opt{cfg.integer("strict", 0) != 0, s.tol};
  LimitCheck result{true, {}};
  if (check == "app") {
    result = assert_app_limits(rows, cfg.number("eps", 0.05), opt);
  } else if (check == "dpp") {
    result = assert_dpp_limits(rows, DppThresholds{}, opt);
  } else if (check != "none") {
    throw ConfigError("check: expected none, app or dpp");
  }
  if (!result.passed) {
    err << "limit check failed: " << result.witness << '\n';
    return kExitVerification;
  }
  return kExitOk;
}

int cmd_compare_n(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  GameParams p = cfg.game_params();
  SolverConfig s = cfg.solver_config();
  int small = static_cast<int>(cfg.integer("n_small", 1));
  int large = static_cast<int>(cfg.integer("n_large", 2));
  if (small < 1 || large > kMaxAgents || small >= large) {
    throw ConfigError("n_small/n_large must satisfy 1 <= n_small < n_large <= 16");
  }
  auto rec = compare_n(p, small, large, p.L, s);
  std::string csv = sweep_csv({rec.small}, small == 1 ? SweepRegime::Single : SweepRegime::AppOneType);
  std::string second = sweep_csv({rec.large}, SweepRegime::AppOneType);
  csv += second.substr(second.find('\n') + 1);
  emit(cfg, "out", csv, out);
  err << "comparison " << small << " vs " << large << ": " << to_string(rec.status);
  if (rec.status != ComparisonStatus::Incomparable) {
    err << " (omega* higher=" << rec.omega_star_higher
        << ", omega** higher=" << rec.omega_star2_higher
        << ", informativeness lower=" << rec.informativeness_lower
        << ", pi higher=" << rec.pi_higher << ")";
  } else {
    err << " (" << rec.message << ")";
  }
  err << '\n';
  switch (rec.status) {
    case ComparisonStatus::Ordered: return kExitOk;
    case ComparisonStatus::Violated: return kExitVerification;
    case ComparisonStatus::Incomparable: return kExitNoEquilibrium;
  }
  return kExitOk;
}

int cmd_demo_intro(std::ostream& out) {
  out << std::setprecision(17);
  std::array<double, 2> marginals{0.8, 0.8};
  auto indep = OffenseDistribution::independent(marginals);
  double agg = aggregate_guilt_prior(indep);
  out << "Two independent offenses, each with probability 0.8\n"
      << "  Pr(at least one offense) = " << agg << '\n'
      << "  APP at pi*=0.9: " << to_string(judge_app(agg, 0.9)) << '\n'
      << "  DPP at pi*=0.9: " << to_string(judge_dpp(marginals, 0.9)) << "\n\n";

  // Offenses against plaintiffs 1 and 2 never occur together.
  OffenseDistribution d1(2, {{0b00, 0.01}, {0b01, 0.495}, {0b10, 0.495}});
  OffenseDistribution d2(1, {{0b0, 0.49}, {0b1, 0.51}});
  double agg1 = aggregate_guilt_prior(d1);
  double agg2 = aggregate_guilt_prior(d2);
  std::array<double, 2> spec1{d1.marginal(0), d1.marginal(1)};
  std::array<double, 1> spec2{d2.marginal(0)};
  out << "Preponderance of evidence (pi*=0.5)\n"
      << "  Defendant 1: offenses " << spec1[0] << " / " << spec1[1] << ", aggregate " << agg1
      << '\n'
      << "    APP: " << to_string(judge_app(agg1, 0.5))
      << "  DPP: " << to_string(judge_dpp(spec1, 0.5)) << '\n'
      << "  Defendant 2: single offense " << spec2[0] << ", aggregate " << agg2 << '\n'
      << "    APP: " << to_string(judge_app(agg2, 0.5))
      << "  DPP: " << to_string(judge_dpp(spec2, 0.5)) << '\n';
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterrence equilibrium lab"};
  app.require_subcommand(1);
  std::map<std::string, std::string> flags;
  std::string config_path;

  auto add_keys = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value config file");
    for (const auto& key : RunConfig::known_keys()) {
      sub->add_option_function<std::string>(
          "--" + key, [&flags, key](const std::string& v) { flags[key] = v; }, key);
    }
  };
  std::map<std::string, CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"solve", "Solve one equilibrium and write it as JSON"},
      {"verify", "Check best-response residuals of a profile JSON"},
      {"simulate", "Monte Carlo the game under a profile JSON"},
      {"sweep", "Solve over an L grid and write CSV"},
      {"compare-n", "Compare equilibria at two agent counts"},
  };
  for (const auto& [name, help] : commands) {
    subs[name] = app.add_subcommand(name, help);
    add_keys(subs[name]);
  }
  subs["demo-intro"] = app.add_subcommand("demo-intro", "Print the introductory worked example");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (subs["demo-intro"]->parsed()) return cmd_demo_intro(out);
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::load(config_path);
    RunConfig over;
    for (const auto& [k, v] : flags) over.set(k, v);
    cfg.merge(over);
    if (subs["solve"]->parsed()) return cmd_solve(cfg, out, err);
    if (subs["verify"]->parsed()) return cmd_verify(cfg, out, err);
    if (subs["simulate"]->parsed()) return cmd_simulate(cfg, out, err);
    if (subs["sweep"]->parsed()) return cmd_sweep(cfg, out, err);
    if (subs["compare-n"]->parsed()) return cmd_compare_n(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NoEquilibrium& e) {
    err << "no equilibrium: " << e.what() << '\n';
    return kExitNoEquilibrium;
  } catch (const NonConvergence& e) {
    err << "non-convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  }
  return kExitConfig;
}

}  // namespace deterrence::cli
