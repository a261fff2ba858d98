#include "deterrence_cli/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "deterrence/errors.hpp"

namespace deterrence::cli {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = {
      // model
      "n", "b", "c", "L", "delta", "alpha", "pi_star", "pi_o", "mu", "sigma",
      // solver
      "tol", "max_iter", "damping", "multistart",
      // commands
      "regime", "q_target", "profile", "out", "csv", "draws", "seed", "L_grid", "L_min",
      "L_max", "L_points", "n_small", "n_large", "check", "eps", "strict"};
  return keys;
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("unknown key '" + key + "'");
  }
  values_[key] = value;
}

void RunConfig::merge(const RunConfig& over) {
  for (const auto& [k, v] : over.values_) values_[k] = v;
}

std::optional<std::string> RunConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string RunConfig::get_or(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

std::optional<double> RunConfig::number(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  return parse_double(key, *v);
}

double RunConfig::number(const std::string& key, double fallback) const {
  return number(key).value_or(fallback);
}

std::optional<long long> RunConfig::integer(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  return parse_int(key, *v);
}

long long RunConfig::integer(const std::string& key, long long fallback) const {
  return integer(key).value_or(fallback);
}

std::vector<double> RunConfig::number_list(const std::string& key) const {
  std::vector<double> out;
  auto v = get(key);
  if (!v) return out;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

GameParams RunConfig::game_params() const {
  GameParams p;
  long long n = integer("n", p.n);
  if (n < 1 || n > kMaxAgents) throw ConfigError("n must lie in [1, 16]");
  p.n = static_cast<int>(n);
  p.b = number("b", p.b);
  p.c = number("c", p.c);
  p.L = number("L", p.L);
  p.delta = number("delta", p.delta);
  p.alpha = number("alpha", p.alpha);
  p.pi_star = number("pi_star", p.pi_star);
  p.pi_o = number("pi_o", p.pi_o);
  try {
    p.shock = ShockDistribution(number("mu", 0.0), number("sigma", 1.0));
    p.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return p;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.tol = number("tol", s.tol);
  long long it = integer("max_iter", s.max_iter);
  long long ms = integer("multistart", s.multistart_grid);
  if (it < 1 || it > 100'000'000) throw ConfigError("max_iter must lie in [1, 1e8]");
  if (ms < 1 || ms > 100'000) throw ConfigError("multistart must lie in [1, 1e5]");
  s.max_iter = static_cast<int>(it);
  s.multistart_grid = static_cast<int>(ms);
  s.damping = number("damping", s.damping);
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return s;
}

std::vector<double> L_grid(const RunConfig& cfg) {
  if (cfg.has("L_grid")) return cfg.number_list("L_grid");
  if (!cfg.has("L_min") && !cfg.has("L_max") && !cfg.has("L_points")) return {};
  double lo = cfg.number("L_min", 10.0);
  double hi = cfg.number("L_max", 1e5);
  long long pts = cfg.integer("L_points", 4);
  if (!(lo > 0.0) || !(hi >= lo)) throw ConfigError("L_min/L_max must satisfy 0 < L_min <= L_max");
  if (pts < 0 || pts > 1'000'000) throw ConfigError("L_points must lie in [0, 1e6]");
  std::vector<double> out;
  for (long long j = 0; j < pts; ++j) {
    double t = pts == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(pts - 1);
    out.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
  }
  if (!out.empty()) {
    out.front() = lo;
    if (pts > 1) out.back() = hi;
  }
  return out;
}

}  // namespace deterrence::cli
