#pragma once

// JSON schema for parameters and sweep configuration files.
//
// params: {"gamma", "b_z", "j", "gamma_phi", "omega_x", "omega_y", "omega",
//          "alpha"}; "c" may replace the (b_z, gamma_phi) pair, optionally
//          together with "b_z".
// config: {"preset", "params", "t_range": {"lo", "hi", "points"},
//          "secondary_range": {...}, "n_shots", "seed", "output_path",
//          "alphas", "compare_c": [c0, c1], "draws", "paper_verbatim"}

#include <string>

#include <json.hpp>

#include "qmag/model.hpp"
#include "qmag/sweeps.hpp"

namespace qmag {

void to_json(nlohmann::json& out, const SystemParams& p);
void from_json(const nlohmann::json& in, SystemParams& p);

void to_json(nlohmann::json& out, const Range& r);
void from_json(const nlohmann::json& in, Range& r);

/// Overlay the keys present in a config object onto spec. Params keys are
/// merged over spec.params, so a config may override a single field. Throws
/// ContractError on unknown keys or malformed values.
void apply_config(const nlohmann::json& config, SweepSpec& spec);

/// Reads and parses a JSON file; IoError if unreadable, ContractError if
/// not valid JSON.
nlohmann::json load_json_file(const std::string& path);

nlohmann::json spec_to_json(const SweepSpec& spec);

}  // namespace qmag
