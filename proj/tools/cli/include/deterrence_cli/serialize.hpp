#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "deterrence/equilibrium.hpp"
#include "deterrence/sweeps.hpp"
#include "deterrence/verification.hpp"

namespace deterrence::cli {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const GameParams& p);
Json to_json(const StrategyProfile& profile);
Json to_json(const EquilibriumProfile& eq);
Json to_json(const Diagnostics& d);
Json to_json(const MonteCarloReport& r);

GameParams game_params_from_json(const Json& j);
StrategyProfile strategy_profile_from_json(const Json& j);
EquilibriumProfile equilibrium_from_json(const Json& j);
// Accepts an equilibrium record or a bare strategy profile.
StrategyProfile load_profile(const Json& j);

// CSV with 17 significant digits.
inline constexpr const char* kSweepHeader =
    "regime,n,b,c,L,delta,alpha,pi_star,pi_o,q,omega_star,omega_star2,informativeness,pi,"
    "residual,status";

std::string format_number(double x);
std::string sweep_csv(const std::vector<SweepRow>& rows, SweepRegime requested);
std::string monte_carlo_csv(const MonteCarloReport& r);

// Write via a sibling temp file and rename.
void atomic_write(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace deterrence::cli
