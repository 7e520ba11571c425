#include "fpsa/presets.hpp"

#include <algorithm>
#include <cmath>

#include "fpsa/errors.hpp"

namespace fpsa {

nlohmann::json to_json(const NeuronCalibration& c) {
  return {{"onset_current", c.onset_current},
          {"bias_fraction", c.bias_fraction},
          {"threshold_mw", c.threshold_mw},
          {"spike_peak", c.spike_peak},
          {"detect_threshold", c.detect_threshold()}};
}

double single_pulse_peak(const LaserParams& p, double amplitude_mw, double dt_ps) {
  Drive d;
  d.pre = single_pulse(amplitude_mw, 2.0, 0.2, dt_ps, 12.0);
  const auto traj = integrate(p, d, 12.0, dt_ps, steady_state(p));
  double peak = 0.0;
  for (const auto& s : traj.samples) peak = std::max(peak, s.S);
  return peak;
}

CalibratedNeuron calibrate_neuron(const LaserParams& base, std::pair<double, double> range, double fraction,
                                  const ProbeConfig& cfg) {
  CalibratedNeuron n;
  n.cal.bias_fraction = fraction;
  n.cal.onset_current = find_pulsation_onset(base, range, 1e-5, cfg);
  n.params = base;
  n.params.I_a = fraction * n.cal.onset_current;
  n.cal.threshold_mw = find_excitation_threshold(n.params, PulseKind::rectangular, 0.2, cfg);
  n.cal.spike_peak = single_pulse_peak(n.params, 1.5 * n.cal.threshold_mw, cfg.dt_ps);
  return n;
}

double cascade_threshold_coupling(const CalibratedNeuron& n1, const CalibratedNeuron& n2, double dt_ps) {
  constexpr double horizon = 12.0;
  Drive d1;
  d1.pre = single_pulse(1.5 * n1.cal.threshold_mw, 2.0, 0.2, dt_ps, horizon);
  const auto rest1 = steady_state(n1.params);
  const auto stage1 = integrate(n1.params, d1, horizon, dt_ps, rest1);
  const double level = std::max(100.0 * steady_state(n2.params).S, saturation_photon_density(n2.params));

  auto fires = [&](double coupling) {
    CascadeConfig cc;
    cc.attenuation = 1.0;
    cc.output_gain = coupling;
    cc.params2 = n2.params;
    Drive d2;
    d2.post = cascade_drive(stage1, cc);
    const auto traj = integrate(n2.params, d2, horizon, dt_ps, cascade_rest(rest1, cc));
    return std::any_of(traj.samples.begin(), traj.samples.end(), [&](const NeuronState& s) { return s.S >= level; });
  };
  double lo = 1e-30, hi = 1e-24;
  while (!fires(hi)) {
    lo = hi;
    hi *= 4.0;
    if (hi > 1e-10) throw CalibrationError("stage-1 spike cannot fire stage 2 at any coupling");
  }
  if (fires(lo)) throw CalibrationError("stage 2 fires without stage-1 input");
  while (hi / lo > 1.0 + 1e-6) {
    const double mid = std::sqrt(lo * hi);
    (fires(mid) ? hi : lo) = mid;
  }
  return hi;
}

LaserParams neuron1_base() { return LaserParams{}; }

LaserParams neuron2_base() {
  LaserParams p;
  p.gamma_s = 0.06;
  return p;
}

// Regenerate with `fpsa_snn calibrate`.
CalibratedNeuron neuron1() {
  CalibratedNeuron n;
  n.params = neuron1_base();
  n.cal.onset_current = 2.80483551e-3;
  n.cal.bias_fraction = kBiasFraction;
  n.params.I_a = kBiasFraction * n.cal.onset_current;
  n.cal.threshold_mw = 0.128130542;
  n.cal.spike_peak = 1.05308934e24;
  return n;
}

CalibratedNeuron neuron2() {
  CalibratedNeuron n;
  n.params = neuron2_base();
  n.cal.onset_current = 3.11776962e-3;
  n.cal.bias_fraction = kBiasFraction;
  n.params.I_a = kBiasFraction * n.cal.onset_current;
  n.cal.threshold_mw = 0.13462899;
  n.cal.spike_peak = 1.58439209e24;
  return n;
}

double default_output_gain() { return kCascadeMargin * 1.46161521e-24 / kCascadeAttenuation; }

SpikeDetectConfig detect_config(const CalibratedNeuron& n) { return {n.cal.detect_threshold(), 0.3, 0.5}; }

PulseShape default_shape() {
  return {PulseKind::rectangular, 0.2, kWeightUnitPerThreshold * neuron1().cal.threshold_mw};
}

PulseJitter default_jitter() { return {0.02, 0.005}; }

SimContext default_sim(Task t) {
  const auto n = neuron1();
  SimContext sim;
  sim.params = n.params;
  sim.rest = steady_state(n.params);
  sim.window = task_windows(t);
  sim.shape = default_shape();
  sim.detect = detect_config(n);
  return sim;
}

CascadeConfig default_cascade() {
  const auto n = neuron2();
  CascadeConfig cc;
  cc.attenuation = kCascadeAttenuation;
  cc.output_gain = default_output_gain();
  cc.params2 = n.params;
  cc.detect2 = detect_config(n);
  return cc;
}

LearningConfig default_learning() { return LearningConfig{}; }

}  // namespace fpsa
