#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "fpsa/laser_params.hpp"
#include "fpsa/waveform.hpp"

namespace fpsa {

struct Derivatives {
  double dS = 0.0;
  double dn_a = 0.0;
  double dn_s = 0.0;
};

/// Right-hand side of the three rate equations, per nanosecond. phi_pre and
/// phi_post are photon densities (m^-3). Throws NumericalError on non-finite input.
Derivatives derivatives(const NeuronState& s, const LaserParams& p, double phi_pre, double phi_post);

/// Unchecked hot-path form used by the integrator.
inline Derivatives rate_equations(const RateCoefficients& c, double S, double n_a, double n_s, double phi) noexcept {
  const double ga = c.gain_a * (n_a - c.n0_a);
  const double gs = c.gain_s * (n_s - c.n0_s);
  return {ga * S + gs * S - S * c.inv_tau_ph + c.spont * n_a * n_a,
          -ga * (S + c.phi_factor * phi) - n_a * c.inv_tau_a + c.pump_a,
          -gs * S - n_s * c.inv_tau_s + c.pump_s};
}

/// Stimuli feeding one neuron, in mW; converted to photon density with k_inj.
/// `post` carries the upstream neuron's output in a cascade.
struct Drive {
  StimulusWaveform pre;
  StimulusWaveform post;
};

/// Optional intrinsic spontaneous-emission noise: after every step S receives
/// strength * sqrt(beta B_r n_a^2 dt) * xi, xi ~ N(0,1). Off by default.
struct NoiseConfig {
  double spontaneous_strength = 0.0;
  std::uint64_t seed = 0;
};

struct IntegrateOptions {
  std::optional<NoiseConfig> noise;
  /// Steps with a negative component are clamped to 0 and counted. Above this
  /// fraction of steps the run is rejected with NumericalError.
  double max_clamp_fraction = 1e-3;
  /// When false, clamping is only counted. Used where the state sits on a
  /// physical boundary (e.g. an unpumped gain section) rather than under-resolved.
  bool escalate_clamps = true;
};

struct Trajectory {
  double dt_ps = 0.0;
  double t0_ns = 0.0;
  std::vector<NeuronState> samples;
  std::vector<double> phi_pre;   // photon density co-sampled with `samples`
  std::vector<double> phi_post;
  std::size_t clamped_steps = 0;

  [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
  [[nodiscard]] double time_ns(std::size_t k) const noexcept { return t0_ns + static_cast<double>(k) * dt_ps * 1e-3; }
  [[nodiscard]] double duration_ns() const noexcept { return static_cast<double>(samples.size() - 1) * dt_ps * 1e-3; }
  [[nodiscard]] std::vector<double> photon_density() const;
};

/// Classical fixed-step RK4 over [0, duration]. The stimulus is held constant
/// over each step at its value at the step start. Deterministic given the inputs
/// (including the noise seed).
///
/// Throws PreconditionError when dt > tau_ph / 5 or duration < dt, and
/// NumericalError on non-finite state or excessive clamping.
Trajectory integrate(const LaserParams& p, const Drive& drive, double duration_ns, double dt_ps,
                     const NeuronState& initial, const IntegrateOptions& opts = {});

/// Largest admissible step for `p`, in ps.
double max_step_ps(const LaserParams& p) noexcept;

/// Lowest-intensity equilibrium under constant injection (photon densities).
/// Solved by reducing to a scalar equation in S and bracketing the first sign change.
NeuronState steady_state(const LaserParams& p, double phi_pre = 0.0, double phi_post = 0.0);

/// Photon density at which stimulated emission starts to saturate the gain
/// section, 1 / (gamma_a g_a tau_a). Used as the floor for calling an excursion a pulse.
double saturation_photon_density(const LaserParams& p) noexcept;

/// Header `t_ns,S,n_a,n_s,phi_pre,phi_post`; every `stride`-th sample plus the last.
void write_trajectory_csv(std::ostream& os, const Trajectory& t, std::size_t stride = 1);

}  // namespace fpsa
