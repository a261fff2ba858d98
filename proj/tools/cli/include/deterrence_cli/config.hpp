#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deterrence/equilibrium.hpp"
#include "deterrence/game_model.hpp"

namespace deterrence::cli {

// Thrown for malformed or unknown config entries; exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat key=value settings. Later layers override earlier ones.
class RunConfig {
 public:
  static const std::vector<std::string>& known_keys();

  // Parses `key = value` lines; '#' starts a comment.
  static RunConfig parse(const std::string& text, const std::string& origin = "config");
  static RunConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  void merge(const RunConfig& over);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  long long integer(const std::string& key, long long fallback) const;
  std::optional<double> number(const std::string& key) const;
  std::optional<long long> integer(const std::string& key) const;
  // Comma separated doubles.
  std::vector<double> number_list(const std::string& key) const;

  const std::map<std::string, std::string>& values() const { return values_; }

  // Validated model parameters. Throws ConfigError naming the key.
  GameParams game_params() const;
  SolverConfig solver_config() const;

 private:
  std::map<std::string, std::string> values_;
};

// L values from L_grid, or a log-spaced grid from L_min, L_max, L_points.
std::vector<double> L_grid(const RunConfig& cfg);

}  // namespace deterrence::cli
