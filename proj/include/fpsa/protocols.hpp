#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "fpsa/presets.hpp"

namespace fpsa {

/// A stimulus program with windows in which the response is counted.
struct ProtocolSegment {
  std::string name;
  double start_ns = 0.0;
  double end_ns = 0.0;
  int expected_min = 0;
  int expected_max = 0;
};

struct Protocol {
  std::string name;
  double duration_ns = 0.0;
  StimulusWaveform stimulus;  // mW
  std::vector<ProtocolSegment> segments;
};

/// Pulses of 1.5 A*, 0.5 A*, 0.5 A*, 10 ns apart: only the first fires.
Protocol threshold_protocol(double a_star_mw, double dt_ps = 0.2);
/// One 0.5 A* pulse, then three 0.5 A* pulses 500 ps apart: 0 then at least 1 spike.
Protocol integration_protocol(double a_star_mw, double dt_ps = 0.2);
/// Five 1.5 A* pulses 2 ns apart: at least 1 and fewer than 5 spikes.
Protocol refractory_protocol(double a_star_mw, double dt_ps = 0.2);

struct SegmentResult {
  std::string name;
  int spikes = 0;
  int expected_min = 0;
  int expected_max = 0;
  [[nodiscard]] bool pass() const noexcept { return spikes >= expected_min && spikes <= expected_max; }
};

struct ProtocolRun {
  std::string name;
  Trajectory trajectory;
  SpikeTrain spikes;
  std::vector<SegmentResult> segments;
  [[nodiscard]] bool pass() const noexcept;
};

/// Runs the program on a calibrated neuron from rest.
ProtocolRun run_protocol(const Protocol& prog, const CalibratedNeuron& n, double dt_ps = 0.2);

struct CascadeProtocolRun {
  ProtocolRun stage1;
  ProtocolRun stage2;  // counted against the same segments, shifted by the coupling delay
  [[nodiscard]] bool pass() const noexcept;  // both stages pass and agree on fired / silent per segment
};

CascadeProtocolRun run_cascade_protocol(const Protocol& prog, const CalibratedNeuron& n1, const CascadeConfig& cc,
                                        double dt_ps = 0.2);

nlohmann::json to_json(const ProtocolRun& r);
nlohmann::json to_json(const CascadeProtocolRun& r);

}  // namespace fpsa
