#include "fpsa/network.hpp"

#include <algorithm>
#include <cmath>

#include "fpsa/errors.hpp"

namespace fpsa {

void validate(const Topology& topo, const WeightMatrix& w) {
  validate(topo.window);
  if (topo.n_post_logical != topo.window.n_windows) throw ConfigError("topology: logical POST count must equal window count");
  if (w.n_post != topo.n_post_logical || w.n_pre != topo.n_pre) {
    throw ConfigError("weights are " + std::to_string(w.n_post) + "x" + std::to_string(w.n_pre) + ", topology expects " +
                      std::to_string(topo.n_post_logical) + "x" + std::to_string(topo.n_pre));
  }
}

void validate(const CascadeConfig& cc) {
  if (!(cc.attenuation >= 0.0 && cc.attenuation <= 1.0)) throw ConfigError("cascade attenuation must lie in [0, 1]");
  if (!(cc.coupling_delay_ns >= 0.0)) throw ConfigError("cascade coupling_delay must be >= 0");
  if (!(cc.output_gain >= 0.0) || !std::isfinite(cc.output_gain)) throw ConfigError("cascade output_gain must be finite and >= 0");
  validate(cc.params2);
  validate(cc.detect2);
}

nlohmann::json to_json(const InferenceResult& r) {
  nlohmann::json fired = nlohmann::json::array();
  for (bool f : r.fired) fired.push_back(f);
  return {{"label", r.label},
          {"fired", fired},
          {"winning_window", r.winning_window ? nlohmann::json(*r.winning_window + 1) : nlohmann::json(nullptr)},
          {"spike_times_ns", r.spike_times_ns},
          {"unclassified", r.unclassified()}};
}

namespace {

void read_out(InferenceResult& res, const SpikeTrain& spikes, const WindowSpec& window) {
  const auto bins = demultiplex_response(spikes, window);
  res.fired.clear();
  std::size_t n_fired = 0, last = 0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    res.fired.push_back(bins[i].fired);
    if (bins[i].fired) {
      ++n_fired;
      last = i;
    }
  }
  res.spike_times_ns = spikes.times;
  if (n_fired == 1) res.winning_window = last;
}

Topology topology_of(const PixelPattern& pattern, const SimContext& sim) {
  return {pattern.cols, sim.window.n_windows, sim.window};
}

}  // namespace

InferenceResult infer(const PixelPattern& pattern, const WeightMatrix& w, const SimContext& sim, const InferOptions& opt) {
  validate(topology_of(pattern, sim), w);
  require_window_fits(sim.window, pattern.rows, pattern.cols, sim.encode_offset_ns);
  const auto trains = encode_pattern(pattern, sim.encode_offset_ns);
  auto pres = present(trains, w, sim, opt.jitter, opt.rng);
  InferenceResult res;
  res.label = pattern.label;
  read_out(res, pres.spikes, sim.window);
  if (opt.keep_traces) res.trajectory = std::move(pres.trajectory);
  return res;
}

StimulusWaveform cascade_drive(const Trajectory& stage1, const CascadeConfig& cc) {
  const double scale = cc.attenuation * cc.output_gain;
  const auto delay = static_cast<std::size_t>(std::llround(cc.coupling_delay_ns * 1e3 / stage1.dt_ps));
  StimulusWaveform out{stage1.dt_ps, std::vector<double>(stage1.size() + delay)};
  // Before the run neuron 1 sat at its initial state.
  for (std::size_t k = 0; k < delay; ++k) out.values[k] = scale * stage1.samples.front().S;
  for (std::size_t k = 0; k < stage1.size(); ++k) out.values[k + delay] = scale * stage1.samples[k].S;
  return out;
}

NeuronState cascade_rest(const NeuronState& rest1, const CascadeConfig& cc) {
  const double baseline = cc.params2.k_inj * cc.attenuation * cc.output_gain * rest1.S;
  return steady_state(cc.params2, 0.0, baseline);
}

InferenceResult infer_cascaded(const PixelPattern& pattern, const WeightMatrix& w, const SimContext& sim,
                               const CascadeConfig& cc, const InferOptions& opt) {
  validate(cc);
  validate(topology_of(pattern, sim), w);
  require_window_fits(sim.window, pattern.rows, pattern.cols, sim.encode_offset_ns);
  const auto trains = encode_pattern(pattern, sim.encode_offset_ns);
  auto pres = present(trains, w, sim, opt.jitter, opt.rng);

  Drive drive2;
  drive2.post = cascade_drive(pres.trajectory, cc);
  const double duration = pres.trajectory.duration_ns() + cc.coupling_delay_ns;
  auto traj2 = integrate(cc.params2, drive2, duration, sim.dt_ps, cascade_rest(sim.rest, cc));
  const auto spikes2 = detect_spikes(traj2, cc.detect2);

  InferenceResult res;
  res.label = pattern.label;
  // Windows are read on neuron 2's clock shifted back by the fibre delay.
  std::vector<double> shifted;
  for (double t : spikes2.times) {
    if (t >= cc.coupling_delay_ns) shifted.push_back(t - cc.coupling_delay_ns);
  }
  read_out(res, SpikeTrain(shifted), sim.window);
  res.spike_times_ns = spikes2.times;
  res.stage1_spike_times_ns = pres.spikes.times;

  const double reach = cc.coupling_delay_ns + 2.0;
  for (double t2 : spikes2.times) {
    const bool preceded = std::any_of(pres.spikes.times.begin(), pres.spikes.times.end(),
                                      [&](double t1) { return t1 <= t2 && t2 - t1 <= reach; });
    if (!preceded) res.causal = false;
  }
  if (opt.keep_traces) {
    res.trajectory = std::move(traj2);
    res.stage1_trajectory = std::move(pres.trajectory);
  }
  return res;
}

Evaluation evaluate(const std::vector<PixelPattern>& patterns, const std::vector<std::size_t>& targets,
                    const WeightMatrix& w, const SimContext& sim, const std::optional<CascadeConfig>& cascade) {
  if (patterns.size() != targets.size()) throw ConfigError("evaluate: one target per pattern required");
  const std::size_t n_win = sim.window.n_windows;
  for (auto t : targets) {
    if (t >= n_win) throw ConfigError("evaluate: target window out of range");
  }
  Evaluation ev;
  ev.total = patterns.size();
  ev.confusion.assign(n_win, std::vector<std::size_t>(n_win + 1, 0));
  ev.results = map_indexed<InferenceResult>(
      patterns.size(),
      [&](std::size_t k) { return cascade ? infer_cascaded(patterns[k], w, sim, *cascade) : infer(patterns[k], w, sim); },
      sim.execution);
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const auto& r = ev.results[k];
    if (!r.winning_window) {
      ++ev.unclassified;
      ++ev.confusion[targets[k]][n_win];
      continue;
    }
    ++ev.confusion[targets[k]][*r.winning_window];
    if (*r.winning_window == targets[k]) ++ev.correct;
  }
  return ev;
}

nlohmann::json to_json(const Evaluation& e) {
  nlohmann::json results = nlohmann::json::array();
  for (const auto& r : e.results) results.push_back(to_json(r));
  return {{"total", e.total},       {"correct", e.correct}, {"unclassified", e.unclassified},
          {"accuracy", e.accuracy()}, {"confusion", e.confusion}, {"results", results}};
}

}  // namespace fpsa
