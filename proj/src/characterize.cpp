#include "fpsa/characterize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpsa/errors.hpp"
#include "fpsa/parallel.hpp"

namespace fpsa {

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::quiescent: return "quiescent";
    case Regime::excitable: return "excitable";
    case Regime::self_pulsing: return "self_pulsing";
  }
  return "unknown";
}

StimulusWaveform single_pulse(double amplitude_mw, double center_ns, double width_ns, double dt_ps,
                              double duration_ns) {
  auto w = zero_waveform(dt_ps, duration_ns);
  add_pulse(w.values, dt_ps, PulseKind::rectangular, width_ns, center_ns, amplitude_mw);
  return w;
}

namespace {

IntegrateOptions lenient() {
  IntegrateOptions o;
  o.escalate_clamps = false;
  return o;
}

Trajectory free_run(const LaserParams& p, const ProbeConfig& cfg) {
  return integrate(p, Drive{}, cfg.settle_ns + cfg.observe_ns, cfg.dt_ps, NeuronState{}, lenient());
}

std::optional<double> pulsation_in_tail(const Trajectory& traj, const LaserParams& p, const ProbeConfig& cfg) {
  const auto skip = static_cast<std::size_t>(std::llround(cfg.settle_ns * 1e3 / cfg.dt_ps));
  std::vector<double> tail;
  tail.reserve(traj.size() - skip);
  for (std::size_t k = skip; k < traj.size(); ++k) tail.push_back(traj.samples[k].S);

  const auto [mn, mx] = std::minmax_element(tail.begin(), tail.end());
  if (*mx < saturation_photon_density(p) || *mx < cfg.excursion_ratio * *mn) return std::nullopt;

  SpikeDetectConfig det{0.5 * *mx, 0.05, 0.5};
  const auto spikes = detect_peaks(tail, cfg.dt_ps, 0.0, det);
  if (spikes.size() < cfg.min_periodic_spikes) return std::nullopt;

  std::vector<double> isi(spikes.size() - 1);
  for (std::size_t k = 1; k < spikes.size(); ++k) isi[k - 1] = spikes.times[k] - spikes.times[k - 1];
  const double mean = std::accumulate(isi.begin(), isi.end(), 0.0) / static_cast<double>(isi.size());
  double var = 0.0;
  for (double v : isi) var += (v - mean) * (v - mean);
  const double cv = std::sqrt(var / static_cast<double>(isi.size())) / mean;
  if (cv >= cfg.max_isi_cv) return std::nullopt;
  return 1.0 / mean;
}

}  // namespace

std::optional<double> self_pulsation_frequency(const LaserParams& p, const ProbeConfig& cfg) {
  return pulsation_in_tail(free_run(p, cfg), p, cfg);
}

bool elicits_pulse(const LaserParams& p, const Drive& drive, double horizon_ns, const ProbeConfig& cfg) {
  const auto rest = steady_state(p);
  const auto traj = integrate(p, drive, horizon_ns, cfg.dt_ps, rest, lenient());
  const double level = std::max(cfg.excursion_ratio * rest.S, saturation_photon_density(p));
  return std::any_of(traj.samples.begin(), traj.samples.end(), [&](const NeuronState& s) { return s.S >= level; });
}

RegimeReport classify_regime(const LaserParams& p, const StimulusWaveform& probe, const ProbeConfig& cfg) {
  RegimeReport rep;
  if (auto f = self_pulsation_frequency(p, cfg)) {
    rep.regime = Regime::self_pulsing;
    rep.pulsation_frequency_ghz = f;
    return rep;
  }
  const double horizon = std::max(cfg.probe_horizon_ns, probe.duration_ns());
  rep.regime = elicits_pulse(p, Drive{probe, {}}, horizon, cfg) ? Regime::excitable : Regime::quiescent;
  return rep;
}

double find_pulsation_onset(const LaserParams& p, std::pair<double, double> range, double rel_tol,
                            const ProbeConfig& cfg) {
  auto pulses_at = [&](double current) {
    LaserParams q = p;
    q.I_a = current;
    return self_pulsation_frequency(q, cfg).has_value();
  };
  double lo = range.first, hi = range.second;
  if (!(lo < hi)) throw CalibrationError("onset search: empty current range");
  if (pulses_at(lo)) throw CalibrationError("onset search: lower current already self-pulses");
  if (!pulses_at(hi)) throw CalibrationError("onset search: upper current does not self-pulse");
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (pulses_at(mid) ? hi : lo) = mid;
  }
  return hi;
}

LaserParams calibrate_excitable_bias(const LaserParams& p, std::pair<double, double> range, double fraction,
                                     const ProbeConfig& cfg) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw ConfigError("bias fraction must lie in (0, 1)");
  LaserParams q = p;
  q.I_a = fraction * find_pulsation_onset(p, range, 1e-5, cfg);
  return q;
}

double find_excitation_threshold(const LaserParams& p, PulseKind kind, double width_ns, const ProbeConfig& cfg) {
  constexpr double center = 2.0, horizon = 12.0;
  auto fires = [&](double amp) {
    auto w = zero_waveform(cfg.dt_ps, horizon);
    add_pulse(w.values, cfg.dt_ps, kind, width_ns, center, amp);
    return elicits_pulse(p, Drive{std::move(w), {}}, horizon, cfg);
  };
  double lo = 1e-6, hi = 1.0;
  while (!fires(hi)) {
    lo = hi;
    hi *= 4.0;
    if (hi > 1e6) throw CalibrationError("no pulse amplitude up to 1e6 mW excites the neuron");
  }
  if (fires(lo)) throw CalibrationError("neuron fires for vanishing stimulus; bias is not excitable");
  while (hi / lo > 1.0 + 1e-6) {
    const double mid = std::sqrt(lo * hi);
    (fires(mid) ? hi : lo) = mid;
  }
  return hi;
}

PiCurve pi_curve(const LaserParams& p, const std::vector<double>& pump_grid, const ProbeConfig& cfg) {
  if (!std::is_sorted(pump_grid.begin(), pump_grid.end())) throw ConfigError("pump grid must be ascending");
  PiCurve curve;
  curve.points = map_indexed<PiPoint>(pump_grid.size(), [&](std::size_t i) {
    LaserParams q = p;
    q.I_a = pump_grid[i];
    const auto traj = free_run(q, cfg);
    const auto skip = static_cast<std::size_t>(std::llround(cfg.settle_ns * 1e3 / cfg.dt_ps));
    double sum_S = 0.0, sum_na = 0.0;
    for (std::size_t k = skip; k < traj.size(); ++k) {
      sum_S += traj.samples[k].S;
      sum_na += traj.samples[k].n_a;
    }
    const auto count = static_cast<double>(traj.size() - skip);
    const double na = sum_na / count;
    PiPoint pt;
    pt.I_a = q.I_a;
    pt.mean_S = sum_S / count;
    pt.spontaneous_floor = q.beta * q.B_r * na * na * q.tau_ph * 1e-12;
    pt.self_pulsing = pulsation_in_tail(traj, q, cfg).has_value();
    return pt;
  }, cfg.execution);
  for (const auto& pt : curve.points) {
    if (pt.mean_S > 10.0 * pt.spontaneous_floor) {
      curve.knee_current = pt.I_a;
      break;
    }
  }
  return curve;
}

}  // namespace fpsa
