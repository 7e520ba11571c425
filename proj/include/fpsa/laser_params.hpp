#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace fpsa {

/// How the injected photon densities enter the gain-carrier equation.
///   as_printed: -G_a (n_a - n0_a) (S - phi_pre - phi_post)   (excitatory above transparency)
///   additive:   -G_a (n_a - n0_a) (S + phi_pre + phi_post)   (stimulated depletion, inhibitory)
enum class PhiSign { as_printed, additive };

std::string_view to_string(PhiSign s) noexcept;
PhiSign phi_sign_from_string(std::string_view s);

/// Coefficients of the two-section (gain + saturable absorber) rate equations.
///
/// Units, also used verbatim as the JSON config keys:
///   gamma_a, gamma_s   confinement factors              [-]
///   g_a, g_s           differential gain / absorption   [m^3 s^-1]
///   n0_a, n0_s         transparency carrier densities   [m^-3]
///   tau_ph             photon lifetime                  [ps]
///   tau_a, tau_s       carrier lifetimes                [ns]
///   beta               spontaneous emission factor      [-]
///   B_r                bimolecular recombination        [m^3 s^-1]
///   I_a, I_s           section bias currents            [A]   (I_s <= 0 is reverse bias)
///   e_charge           elementary charge                [C]
///   V_a, V_s           section active volumes           [m^3]
///   k_inj              injection coupling               [m^-3 per mW of stimulus power]
struct LaserParams {
  double gamma_a = 0.06;
  double gamma_s = 0.05;
  double g_a = 2.9e-12;
  double g_s = 14.5e-12;
  double n0_a = 1.1e24;
  double n0_s = 0.89e24;
  double tau_ph = 4.8;
  double tau_a = 0.8;
  double tau_s = 0.4;
  double beta = 1e-4;
  double B_r = 10e-16;
  double I_a = 2.5e-3;
  double I_s = 0.0;
  double e_charge = 1.602176634e-19;
  double V_a = 2.4e-18;
  double V_s = 2.4e-18;
  double k_inj = 1.0e22;
  PhiSign phi_sign = PhiSign::as_printed;

  bool operator==(const LaserParams&) const = default;
};

/// Throws ConfigError naming the first violated invariant.
void validate(const LaserParams& p);

nlohmann::json to_json(const LaserParams& p);
/// Strict parse: every field required except phi_sign, unknown keys rejected.
LaserParams laser_params_from_json(const nlohmann::json& j);
LaserParams load_laser_params(const std::string& path);

/// Instantaneous state of one neuron. Densities in m^-3.
struct NeuronState {
  double S = 0.0;
  double n_a = 0.0;
  double n_s = 0.0;

  bool operator==(const NeuronState&) const = default;
};

/// The rate equations pre-scaled to per-nanosecond units; built once per run.
struct RateCoefficients {
  double gain_a;       // gamma_a g_a            [m^3 ns^-1]
  double gain_s;       // gamma_s g_s            [m^3 ns^-1]
  double n0_a;
  double n0_s;
  double inv_tau_ph;   // [ns^-1]
  double inv_tau_a;
  double inv_tau_s;
  double spont;        // beta B_r               [m^3 ns^-1]
  double pump_a;       // I_a / (e V_a)          [m^-3 ns^-1]
  double pump_s;       // I_s / (e V_s)
  double phi_factor;   // +1 additive, -1 as printed

  explicit RateCoefficients(const LaserParams& p);
};

}  // namespace fpsa
