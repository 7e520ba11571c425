#include "fpsa/config.hpp"

#include "fpsa/errors.hpp"
#include "fpsa/io.hpp"

namespace fpsa {

namespace {

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

}  // namespace

RunConfig apply_run_config(const nlohmann::json& j, RunConfig rc) {
  reject_unknown(j, {"learning", "window", "pulse", "dt_ps"}, "run config");
  try {
    if (j.contains("learning")) rc.learning = learning_config_from_json(j["learning"], rc.learning);
    if (j.contains("window")) {
      const auto& w = j["window"];
      reject_unknown(w, {"window_len_ns", "guard_ns"}, "window");
      if (w.contains("window_len_ns")) rc.sim.window.window_len_ns = w["window_len_ns"].get<double>();
      if (w.contains("guard_ns")) rc.sim.window.guard_ns = w["guard_ns"].get<double>();
      validate(rc.sim.window);
    }
    if (j.contains("pulse")) {
      const auto& p = j["pulse"];
      reject_unknown(p, {"kind", "width_ns", "amplitude_unit"}, "pulse");
      if (p.contains("kind")) {
        const auto k = p["kind"].get<std::string>();
        if (k == "rectangular") rc.sim.shape.kind = PulseKind::rectangular;
        else if (k == "gaussian") rc.sim.shape.kind = PulseKind::gaussian;
        else throw ConfigError("pulse kind must be rectangular or gaussian");
      }
      if (p.contains("width_ns")) rc.sim.shape.width_ns = p["width_ns"].get<double>();
      if (p.contains("amplitude_unit")) rc.sim.shape.amplitude_unit = p["amplitude_unit"].get<double>();
      validate(rc.sim.shape);
    }
    if (j.contains("dt_ps")) {
      rc.sim.dt_ps = j["dt_ps"].get<double>();
      if (!(rc.sim.dt_ps > 0.0) || rc.sim.dt_ps > max_step_ps(rc.sim.params)) {
        throw PreconditionError("dt_ps must lie in (0, tau_ph/5 = " + format_number(max_step_ps(rc.sim.params)) + "] ps");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
  return rc;
}

RunConfig load_run_config(const std::string& path, RunConfig base) { return apply_run_config(read_json_file(path), std::move(base)); }

nlohmann::json to_json(const RunConfig& rc) {
  return {{"learning", to_json(rc.learning)},
          {"window", {{"n_windows", rc.sim.window.n_windows}, {"window_len_ns", rc.sim.window.window_len_ns}, {"guard_ns", rc.sim.window.guard_ns}}},
          {"pulse", {{"kind", rc.sim.shape.kind == PulseKind::rectangular ? "rectangular" : "gaussian"},
                     {"width_ns", rc.sim.shape.width_ns},
                     {"amplitude_unit", rc.sim.shape.amplitude_unit}}},
          {"dt_ps", rc.sim.dt_ps},
          {"params", to_json(rc.sim.params)}};
}

}  // namespace fpsa
