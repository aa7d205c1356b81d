#pragma once

#include <string>

#include <json.hpp>

#include "jtrx/model.hpp"

namespace jtrx {

// JSON layout:
//   { "M": 8, "K": 4, "N": [2,2,2,2] | 2, "L": 2,
//     "gamma": <linear> | "gamma_db": <dB>,   scalar, flat K*L list or K x L
//     "w": [..K*L..] | scalar, "sigma2": 1.0,
//     "epsilon": 1e-4, "max_iters": 500 }
// Missing epsilon / max_iters take their defaults. Unknown keys are rejected.
// Shape problems throw InvalidConfig; value invariants are left to
// validate_config.
SystemConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const SystemConfig& config);

SystemConfig load_config(const std::string& path);

/// FNV-1a 64 of the compact JSON dump, as 16 hex digits.
std::string config_hash(const SystemConfig& config);

}  // namespace jtrx
