#include "fpsa/laser_params.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "fpsa/errors.hpp"

namespace fpsa {

namespace {

struct Field {
  const char* key;
  double LaserParams::*member;
};

constexpr Field kFields[] = {
    {"gamma_a", &LaserParams::gamma_a}, {"gamma_s", &LaserParams::gamma_s},
    {"g_a", &LaserParams::g_a},         {"g_s", &LaserParams::g_s},
    {"n0_a", &LaserParams::n0_a},       {"n0_s", &LaserParams::n0_s},
    {"tau_ph", &LaserParams::tau_ph},   {"tau_a", &LaserParams::tau_a},
    {"tau_s", &LaserParams::tau_s},     {"beta", &LaserParams::beta},
    {"B_r", &LaserParams::B_r},         {"I_a", &LaserParams::I_a},
    {"I_s", &LaserParams::I_s},         {"e_charge", &LaserParams::e_charge},
    {"V_a", &LaserParams::V_a},         {"V_s", &LaserParams::V_s},
    {"k_inj", &LaserParams::k_inj},
};

}  // namespace

std::string_view to_string(PhiSign s) noexcept {
  return s == PhiSign::as_printed ? "as_printed" : "additive";
}

PhiSign phi_sign_from_string(std::string_view s) {
  if (s == "as_printed") return PhiSign::as_printed;
  if (s == "additive") return PhiSign::additive;
  throw ConfigError("phi_sign must be \"as_printed\" or \"additive\", got \"" + std::string(s) + "\"");
}

void validate(const LaserParams& p) {
  for (const auto& f : kFields) {
    if (!std::isfinite(p.*f.member)) throw ConfigError(std::string(f.key) + " must be finite");
  }
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be > 0");
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0)) throw ConfigError(std::string(name) + " must be >= 0");
  };
  positive(p.tau_ph, "tau_ph");
  positive(p.tau_a, "tau_a");
  positive(p.tau_s, "tau_s");
  positive(p.V_a, "V_a");
  positive(p.V_s, "V_s");
  positive(p.e_charge, "e_charge");
  non_negative(p.beta, "beta");
  non_negative(p.B_r, "B_r");
  non_negative(p.k_inj, "k_inj");
}

nlohmann::json to_json(const LaserParams& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : kFields) j[f.key] = p.*f.member;
  j["phi_sign"] = std::string(to_string(p.phi_sign));
  return j;
}

LaserParams laser_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("laser params: expected a JSON object");
  std::set<std::string> known;
  LaserParams p;
  for (const auto& f : kFields) {
    known.insert(f.key);
    auto it = j.find(f.key);
    if (it == j.end()) throw ConfigError(std::string("laser params: missing key \"") + f.key + "\"");
    if (!it->is_number()) throw ConfigError(std::string("laser params: \"") + f.key + "\" must be a number");
    p.*f.member = it->get<double>();
  }
  known.insert("phi_sign");
  if (auto it = j.find("phi_sign"); it != j.end()) {
    if (!it->is_string()) throw ConfigError("laser params: \"phi_sign\" must be a string");
    p.phi_sign = phi_sign_from_string(it->get<std::string>());
  }
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("laser params: unknown key \"" + key + "\"");
  }
  validate(p);
  return p;
}

LaserParams load_laser_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open params file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("params file " + path + " is not valid JSON: " + e.what());
  }
  return laser_params_from_json(j);
}

RateCoefficients::RateCoefficients(const LaserParams& p)
    : gain_a(p.gamma_a * p.g_a * 1e-9),
      gain_s(p.gamma_s * p.g_s * 1e-9),
      n0_a(p.n0_a),
      n0_s(p.n0_s),
      inv_tau_ph(1e3 / p.tau_ph),
      inv_tau_a(1.0 / p.tau_a),
      inv_tau_s(1.0 / p.tau_s),
      spont(p.beta * p.B_r * 1e-9),
      pump_a(p.I_a / (p.e_charge * p.V_a) * 1e-9),
      pump_s(p.I_s / (p.e_charge * p.V_s) * 1e-9),
      phi_factor(p.phi_sign == PhiSign::additive ? 1.0 : -1.0) {}

}  // namespace fpsa
