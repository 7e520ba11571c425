#include "fpsa/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpsa {

namespace {

constexpr double kWidth = 0.2;

Protocol make(std::string name, double duration, double dt_ps) {
  Protocol p;
  p.name = std::move(name);
  p.duration_ns = duration;
  p.stimulus = zero_waveform(dt_ps, duration);
  return p;
}

void pulse(Protocol& p, double center, double amp) {
  add_pulse(p.stimulus.values, p.stimulus.dt_ps, PulseKind::rectangular, kWidth, center, amp);
}

std::vector<SegmentResult> count(const std::vector<ProtocolSegment>& segs, const SpikeTrain& spikes, double shift) {
  std::vector<SegmentResult> out;
  for (const auto& s : segs) {
    const auto n = std::count_if(spikes.times.begin(), spikes.times.end(), [&](double t) {
      return t - shift >= s.start_ns && t - shift < s.end_ns;
    });
    out.push_back({s.name, static_cast<int>(n), s.expected_min, s.expected_max});
  }
  return out;
}

}  // namespace

Protocol threshold_protocol(double a, double dt_ps) {
  auto p = make("threshold", 35.0, dt_ps);
  pulse(p, 5.0, 1.5 * a);
  pulse(p, 15.0, 0.5 * a);
  pulse(p, 25.0, 0.5 * a);
  p.segments = {{"strong", 4.0, 14.0, 1, 1}, {"weak_1", 14.0, 24.0, 0, 0}, {"weak_2", 24.0, 34.0, 0, 0}};
  return p;
}

Protocol integration_protocol(double a, double dt_ps) {
  auto p = make("integration", 30.0, dt_ps);
  pulse(p, 5.0, 0.5 * a);
  for (double c : {15.0, 15.5, 16.0}) pulse(p, c, 0.5 * a);
  p.segments = {{"single_weak", 4.0, 14.0, 0, 0},
                {"triplet_500ps", 14.0, 28.0, 1, std::numeric_limits<int>::max()}};
  return p;
}

Protocol refractory_protocol(double a, double dt_ps) {
  auto p = make("refractory", 25.0, dt_ps);
  for (int k = 0; k < 5; ++k) pulse(p, 5.0 + 2.0 * k, 1.5 * a);
  p.segments = {{"burst_2ns", 4.0, 22.0, 1, 4}};
  return p;
}

bool ProtocolRun::pass() const noexcept {
  return std::all_of(segments.begin(), segments.end(), [](const SegmentResult& s) { return s.pass(); });
}

ProtocolRun run_protocol(const Protocol& prog, const CalibratedNeuron& n, double dt_ps) {
  ProtocolRun r;
  r.name = prog.name;
  Drive d;
  d.pre = prog.stimulus;
  r.trajectory = integrate(n.params, d, prog.duration_ns, dt_ps, steady_state(n.params));
  r.spikes = detect_spikes(r.trajectory, detect_config(n));
  r.segments = count(prog.segments, r.spikes, 0.0);
  return r;
}

bool CascadeProtocolRun::pass() const noexcept {
  if (!stage1.pass() || !stage2.pass()) return false;
  for (std::size_t k = 0; k < stage1.segments.size(); ++k) {
    if ((stage1.segments[k].spikes > 0) != (stage2.segments[k].spikes > 0)) return false;
  }
  return true;
}

CascadeProtocolRun run_cascade_protocol(const Protocol& prog, const CalibratedNeuron& n1, const CascadeConfig& cc,
                                        double dt_ps) {
  CascadeProtocolRun r;
  r.stage1 = run_protocol(prog, n1, dt_ps);
  r.stage2.name = prog.name + "_stage2";
  Drive d;
  d.post = cascade_drive(r.stage1.trajectory, cc);
  r.stage2.trajectory = integrate(cc.params2, d, prog.duration_ns + cc.coupling_delay_ns, dt_ps,
                                  cascade_rest(steady_state(n1.params), cc));
  r.stage2.spikes = detect_spikes(r.stage2.trajectory, cc.detect2);
  r.stage2.segments = count(prog.segments, r.stage2.spikes, cc.coupling_delay_ns);
  return r;
}

nlohmann::json to_json(const ProtocolRun& r) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : r.segments) {
    nlohmann::json expected = {{"min", s.expected_min}};
    expected["max"] = s.expected_max == std::numeric_limits<int>::max() ? nlohmann::json(nullptr) : nlohmann::json(s.expected_max);
    segs.push_back({{"name", s.name}, {"spikes", s.spikes}, {"expected", expected}, {"pass", s.pass()}});
  }
  return {{"experiment", r.name},
          {"spike_times_ns", r.spikes.times},
          {"segments", segs},
          {"clamped_steps", r.trajectory.clamped_steps},
          {"verdict", r.pass() ? "pass" : "fail"}};
}

nlohmann::json to_json(const CascadeProtocolRun& r) {
  return {{"stage1", to_json(r.stage1)}, {"stage2", to_json(r.stage2)}, {"verdict", r.pass() ? "pass" : "fail"}};
}

}  // namespace fpsa
