#include "deterrence_cli/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

#include "deterrence/errors.hpp"
#include "deterrence_cli/config.hpp"

namespace deterrence::cli {

namespace {

// nlohmann writes NaN as null; read it back the same way.
double num(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

Json num_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json kr_json(const std::optional<KrTag>& kr) {
  if (!kr) return nullptr;
  return {{"k", kr->k}, {"r", kr->r}};
}

std::optional<KrTag> kr_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return KrTag{j.at("k").get<int>(), j.at("r").get<double>()};
}

std::optional<double> opt_num(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

Adjudication adjudication_from(const std::string& s) {
  if (s == "aggregate") return Adjudication::Aggregate;
  if (s == "distinct") return Adjudication::Distinct;
  throw DomainError("unknown adjudication '" + s + "'");
}

std::string adjudication_name(Adjudication a) {
  return a == Adjudication::Aggregate ? "aggregate" : "distinct";
}

Json event_json(const EventEstimate& e) {
  return {{"count", e.count}, {"freq", e.freq}, {"analytic", e.analytic}, {"std_err", e.std_err}};
}

}  // namespace

Json to_json(const GameParams& p) {
  return {{"n", p.n},         {"b", p.b},
          {"c", p.c},         {"L", p.L},
          {"delta", p.delta}, {"alpha", p.alpha},
          {"pi_star", p.pi_star}, {"pi_o", p.pi_o},
          {"mu", p.shock.mean()}, {"sigma", p.shock.std_dev()}};
}

GameParams game_params_from_json(const Json& j) {
  GameParams p;
  p.n = j.at("n").get<int>();
  p.b = j.at("b").get<double>();
  p.c = j.at("c").get<double>();
  p.L = j.at("L").get<double>();
  p.delta = j.at("delta").get<double>();
  p.alpha = j.at("alpha").get<double>();
  p.pi_star = j.at("pi_star").get<double>();
  p.pi_o = j.at("pi_o").get<double>();
  p.shock = ShockDistribution(j.value("mu", 0.0), j.value("sigma", 1.0));
  p.validate();
  return p;
}

Json to_json(const StrategyProfile& profile) {
  Json support = Json::array();
  for (const auto& [theta, p] : profile.principal().opportunistic.support()) {
    support.push_back({theta, p});
  }
  Json cutoffs = Json::array();
  for (const auto& c : profile.cutoffs()) cutoffs.push_back({c.omega_star, c.omega_star2});
  const auto& rule = profile.rule();
  Json rule_json = {{"q", rule.values()}};
  rule_json["q_by_count"] = rule.by_count() ? Json(*rule.by_count()) : Json(nullptr);
  return {{"params", to_json(profile.params())},
          {"principal", {{"support", support}, {"kr", kr_json(profile.principal().kr)}}},
          {"cutoffs", cutoffs},
          {"rule", rule_json},
          {"adjudication", adjudication_name(profile.adjudication())}};
}

StrategyProfile strategy_profile_from_json(const Json& j) {
  GameParams params = game_params_from_json(j.at("params"));
  std::vector<OffenseDistribution::Entry> masses;
  for (const auto& e : j.at("principal").at("support")) {
    masses.emplace_back(e.at(0).get<Profile>(), e.at(1).get<double>());
  }
  PrincipalStrategy principal{OffenseDistribution(params.n, std::move(masses)),
                              kr_from(j.at("principal").value("kr", Json(nullptr)))};
  std::vector<AgentCutoffs> cutoffs;
  for (const auto& c : j.at("cutoffs")) cutoffs.push_back({num(c.at(0)), num(c.at(1))});
  const auto& rj = j.at("rule");
  ConvictionRule rule = rj.contains("q_by_count") && !rj.at("q_by_count").is_null()
                            ? ConvictionRule::symmetric(rj.at("q_by_count").get<std::vector<double>>())
                            : ConvictionRule::table(params.n, rj.at("q").get<std::vector<double>>());
  if (rule.n() != params.n) throw DomainError("rule size does not match n");
  return StrategyProfile(params, std::move(principal), std::move(cutoffs), std::move(rule),
                         adjudication_from(j.at("adjudication").get<std::string>()));
}

Json to_json(const EquilibriumProfile& eq) {
  Json alts = Json::array();
  for (const auto& a : eq.alternatives) {
    alts.push_back({{"q", a.q},
                    {"omega_star", a.omega_star},
                    {"omega_star2", a.omega_star2},
                    {"pi", a.pi},
                    {"k", a.k},
                    {"r", a.r},
                    {"residual", a.residual}});
  }
  return {{"schema_version", kSchemaVersion},
          {"status", "Solved"},
          {"regime", to_string(eq.regime)},
          {"q", eq.q},
          {"omega_star", eq.omega_star()},
          {"omega_star2", eq.omega_star2()},
          {"pi", eq.pi},
          {"informativeness", eq.informativeness_max},
          {"beta", optional_json(eq.beta)},
          {"l_star", eq.l_star},
          {"residual", eq.residual},
          {"kr", kr_json(eq.kr)},
          {"L_value", optional_json(eq.L_value)},
          {"alternatives", alts},
          {"profile", to_json(eq.profile)}};
}

EquilibriumProfile equilibrium_from_json(const Json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion) {
    throw DomainError("unsupported schema_version");
  }
  EquilibriumProfile eq(regime_from_string(j.at("regime").get<std::string>()),
                        strategy_profile_from_json(j.at("profile")));
  eq.q = j.at("q").get<double>();
  eq.pi = j.at("pi").get<double>();
  eq.informativeness_max = j.at("informativeness").get<double>();
  eq.beta = opt_num(j, "beta");
  eq.l_star = j.at("l_star").get<double>();
  eq.residual = j.at("residual").get<double>();
  eq.kr = kr_from(j.value("kr", Json(nullptr)));
  eq.L_value = opt_num(j, "L_value");
  for (const auto& a : j.value("alternatives", Json::array())) {
    eq.alternatives.push_back({a.at("q").get<double>(), a.at("omega_star").get<double>(),
                               a.at("omega_star2").get<double>(), a.at("pi").get<double>(),
                               a.at("k").get<int>(), a.at("r").get<double>(),
                               a.at("residual").get<double>()});
  }
  return eq;
}

StrategyProfile load_profile(const Json& j) {
  if (j.contains("profile")) return strategy_profile_from_json(j.at("profile"));
  return strategy_profile_from_json(j);
}

Json to_json(const Diagnostics& d) {
  Json br = Json::array();
  for (const auto& c : d.best_response) br.push_back({num_or_null(c.omega_star), num_or_null(c.omega_star2)});
  Json out = {{"principal_gap", d.principal_gap},
              {"agent_gap", d.agent_gap},
              {"judge_gap", d.judge_gap},
              {"max_gap", d.max_gap()},
              {"correlation", optional_json(d.correlation)},
              {"per_profile_informativeness", d.per_profile_informativeness},
              {"best_response", br}};
  if (d.substitutes) {
    out["substitutes"] = {{"index", d.substitutes->index}, {"kind", to_string(d.substitutes->kind)}};
  } else {
    out["substitutes"] = nullptr;
  }
  return out;
}

Json to_json(const MonteCarloReport& r) {
  auto events = [](const std::vector<EventEstimate>& v) {
    Json a = Json::array();
    for (const auto& e : v) a.push_back(event_json(e));
    return a;
  };
  Json emp = Json::array(), ana = Json::array();
  for (double x : r.empirical_posteriors) emp.push_back(num_or_null(x));
  for (double x : r.analytic_posteriors) ana.push_back(num_or_null(x));
  return {{"schema_version", kSchemaVersion},
          {"draws", r.draws},
          {"seed", r.seed},
          {"n", r.n},
          {"max_abs_z", num_or_null(r.max_abs_z())},
          {"report_outcome", events(r.report_outcome)},
          {"report", events(r.report)},
          {"theta", events(r.theta)},
          {"empirical_posteriors", emp},
          {"analytic_posteriors", ana}};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, SweepRegime requested) {
  std::ostringstream os;
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    const auto& p = r.params;
    bool solved = r.status == SolveStatus::Solved;
    auto val = [&](double x) { return solved ? format_number(x) : std::string("nan"); };
    os << (r.regime ? to_string(*r.regime) : to_string(requested)) << ',' << p.n << ','
       << format_number(p.b) << ',' << format_number(p.c) << ',' << format_number(p.L) << ','
       << format_number(p.delta) << ',' << format_number(p.alpha) << ','
       << format_number(p.pi_star) << ',' << format_number(p.pi_o) << ',' << val(r.q) << ','
       << val(r.omega_star) << ',' << val(r.omega_star2) << ',' << val(r.informativeness) << ','
       << val(r.pi) << ',' << val(r.residual) << ',' << to_string(r.status) << '\n';
  }
  return os.str();
}

std::string monte_carlo_csv(const MonteCarloReport& r) {
  std::ostringstream os;
  os << "event,index,count,freq,analytic,std_err\n";
  auto dump = [&](const char* name, const std::vector<EventEstimate>& v) {
    for (std::size_t j = 0; j < v.size(); ++j) {
      os << name << ',' << j << ',' << v[j].count << ',' << format_number(v[j].freq) << ','
         << format_number(v[j].analytic) << ',' << format_number(v[j].std_err) << '\n';
    }
  };
  dump("report_outcome", r.report_outcome);
  dump("report", r.report);
  dump("theta", r.theta);
  return os.str();
}

void atomic_write(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write '" + tmp.string() + "'");
    f << contents;
    f.flush();
    if (!f) throw ConfigError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ConfigError("cannot rename onto '" + path + "': " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace deterrence::cli
