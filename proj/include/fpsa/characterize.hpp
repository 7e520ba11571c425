#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "fpsa/parallel.hpp"
#include "fpsa/spikes.hpp"
#include "fpsa/yamada.hpp"

namespace fpsa {

enum class Regime { quiescent, excitable, self_pulsing };

std::string_view to_string(Regime r) noexcept;

struct RegimeReport {
  Regime regime = Regime::quiescent;
  std::optional<double> pulsation_frequency_ghz;   // present iff self_pulsing
  std::optional<double> lasing_threshold_current;  // A; filled in by callers that locate a knee
};

/// Simulation settings shared by the bias-space characterization routines.
struct ProbeConfig {
  double dt_ps = 0.2;
  double settle_ns = 30.0;    // discarded transient of the free-running run
  double observe_ns = 70.0;   // window in which autonomous pulses are counted
  double probe_horizon_ns = 50.0;
  /// An excursion counts as a pulse when S exceeds both this multiple of the
  /// resting photon density and the gain-saturation density.
  double excursion_ratio = 100.0;
  double max_isi_cv = 0.1;
  std::size_t min_periodic_spikes = 3;
  Execution execution = Execution::parallel;  // pump grids only
};

/// A single rectangular pulse of `amplitude_mw` centred at `center_ns`.
StimulusWaveform single_pulse(double amplitude_mw, double center_ns = 5.0, double width_ns = 0.2,
                              double dt_ps = 0.2, double duration_ns = 10.0);

/// Free-running run from a cold (unpumped) state. Returns the pulsation
/// frequency in GHz when the tail shows at least min_periodic_spikes regular pulses.
std::optional<double> self_pulsation_frequency(const LaserParams& p, const ProbeConfig& cfg = {});

/// True when a run from rest driven by `drive` reaches a pulse-sized excursion.
bool elicits_pulse(const LaserParams& p, const Drive& drive, double horizon_ns, const ProbeConfig& cfg = {});

/// self_pulsing if the free-running laser pulses periodically; otherwise
/// excitable if `probe` (a single short pulse, applied from rest) elicits a
/// pulse; otherwise quiescent.
RegimeReport classify_regime(const LaserParams& p, const StimulusWaveform& probe, const ProbeConfig& cfg = {});

/// Bisection on I_a for the self-pulsation onset within [lo, hi] (A).
/// Throws CalibrationError unless lo does not pulse and hi does.
double find_pulsation_onset(const LaserParams& p, std::pair<double, double> range, double rel_tol = 1e-5,
                            const ProbeConfig& cfg = {});

/// `p` with I_a set to `fraction` of the self-pulsation onset found in `range`.
LaserParams calibrate_excitable_bias(const LaserParams& p, std::pair<double, double> range, double fraction = 0.98,
                                     const ProbeConfig& cfg = {});

/// Smallest amplitude (mW) of a single pulse of `shape` that elicits a pulse from rest.
double find_excitation_threshold(const LaserParams& p, PulseKind kind = PulseKind::rectangular,
                                 double width_ns = 0.2, const ProbeConfig& cfg = {});

struct PiPoint {
  double I_a = 0.0;
  double mean_S = 0.0;           // time-averaged photon density, m^-3
  double spontaneous_floor = 0.0;  // beta B_r <n_a>^2 tau_ph
  bool self_pulsing = false;
};

struct PiCurve {
  std::vector<PiPoint> points;
  std::optional<double> knee_current;  // first pump whose mean S exceeds 10x its spontaneous floor
};

/// Time-averaged output vs. gain current. Each point is run from a cold start;
/// self-pulsing points report the average over the pulse train.
PiCurve pi_curve(const LaserParams& p, const std::vector<double>& pump_grid, const ProbeConfig& cfg = {});

}  // namespace fpsa
