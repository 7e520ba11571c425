#pragma once

#include <string>

#include "json.hpp"

#include "fpsa/learning.hpp"

namespace fpsa {

/// Settings a run file may override. Every section is optional:
///   {"learning": {...LearningConfig keys...},
///    "window": {"window_len_ns": 15, "guard_ns": 1},
///    "pulse": {"kind": "rectangular" | "gaussian", "width_ns": 0.2, "amplitude_unit": ...},
///    "dt_ps": 0.2}
/// Unknown keys are rejected.
struct RunConfig {
  SimContext sim;
  LearningConfig learning;
};

RunConfig apply_run_config(const nlohmann::json& j, RunConfig base);
RunConfig load_run_config(const std::string& path, RunConfig base);
nlohmann::json to_json(const RunConfig& rc);

}  // namespace fpsa
