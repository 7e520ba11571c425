#pragma once

#include <utility>

#include "json.hpp"

#include "fpsa/characterize.hpp"
#include "fpsa/glyphs.hpp"
#include "fpsa/network.hpp"

namespace fpsa {

/// Quantities derived from a parameter set by calibration.
struct NeuronCalibration {
  double onset_current = 0.0;   // A, self-pulsation onset
  double bias_fraction = 0.98;  // I_a / onset
  double threshold_mw = 0.0;    // A*: smallest 0.2 ns rectangular pulse that fires from rest
  double spike_peak = 0.0;      // peak S of the response to a 1.5 A* pulse, m^-3

  [[nodiscard]] double detect_threshold() const noexcept { return 0.5 * spike_peak; }
};

struct CalibratedNeuron {
  LaserParams params;  // I_a already set to the excitable bias
  NeuronCalibration cal;
};

nlohmann::json to_json(const NeuronCalibration& c);

/// Onset search over `range`, bias at `fraction` of it, then A* and the spike peak.
CalibratedNeuron calibrate_neuron(const LaserParams& base, std::pair<double, double> range = {0.3e-3, 5e-3},
                                  double fraction = 0.98, const ProbeConfig& cfg = {});

/// Peak photon density after a single rectangular 0.2 ns pulse at 2 ns, from rest.
double single_pulse_peak(const LaserParams& p, double amplitude_mw, double dt_ps = 0.2);

/// Smallest attenuation * output_gain for which one stage-1 spike (1.5 A* pulse)
/// fires stage 2, found by geometric bisection.
double cascade_threshold_coupling(const CalibratedNeuron& n1, const CalibratedNeuron& n2, double dt_ps = 0.2);

// Shipped calibrated defaults. The numbers are reproduced by `fpsa_snn calibrate`.
constexpr double kBiasFraction = 0.98;
constexpr double kCascadeAttenuation = 0.5;
constexpr double kCascadeMargin = 1.5;          // stage-1 spike delivers this multiple of the stage-2 threshold
constexpr double kWeightUnitPerThreshold = 0.25e-8;  // amplitude_unit / A*

/// Uncalibrated base sets (I_a left at its placeholder).
LaserParams neuron1_base();
LaserParams neuron2_base();  // longer absorber: larger gamma_s

CalibratedNeuron neuron1();
CalibratedNeuron neuron2();
double default_output_gain();

SpikeDetectConfig detect_config(const CalibratedNeuron& n);
PulseShape default_shape();
PulseJitter default_jitter();
SimContext default_sim(Task t);
CascadeConfig default_cascade();
LearningConfig default_learning();

}  // namespace fpsa
