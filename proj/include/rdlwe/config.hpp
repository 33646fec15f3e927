#pragma once

#include <string>

#include "json.hpp"

#include "rdlwe/sim.hpp"

namespace rdlwe {

/// Scenario files are JSON; see README for the schema.  A missing
/// "sim.threshold" is replaced by the calibrated default (5x the peak
/// attack-free reference residue).  Throws ConfigError on any malformed
/// or inconsistent content.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

/// Integerized controller and its Z_q image, as a reproducible document.
nlohmann::json realization_to_json(const IntegerRealization& ir, const ScaledParams& params);
ScaledParams scaled_params_from_json(const nlohmann::json& j);

/// Secret key files (JSON: q, N, sigma, sk).
void save_key(const SecretKey& sk, const std::string& path);
SecretKey load_key(const std::string& path);

} // namespace rdlwe
