#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "fpsa/learning.hpp"

namespace fpsa {

struct Topology {
  std::size_t n_pre = 0;
  std::size_t n_post_logical = 0;
  WindowSpec window;
};

/// Throws ConfigError unless n_post_logical == window.n_windows and `w` matches.
void validate(const Topology& topo, const WeightMatrix& w);

/// Second stage of a cascade. Neuron 2 receives
///   P_post(t) = attenuation * output_gain * S1(t - coupling_delay)   [mW]
/// where S1 is neuron 1's photon density; output_gain converts it to power.
struct CascadeConfig {
  double attenuation = 0.5;        // VOA transmission, in [0, 1]
  double coupling_delay_ns = 0.0;
  double output_gain = 0.0;        // mW per m^-3 of neuron-1 photon density
  LaserParams params2;
  SpikeDetectConfig detect2;
};

void validate(const CascadeConfig& cc);

struct InferenceResult {
  std::string label;
  std::vector<bool> fired;
  std::vector<double> spike_times_ns;        // absolute times of the read-out neuron
  std::optional<std::size_t> winning_window; // 0-based; present iff exactly one window fired
  std::optional<Trajectory> trajectory;      // read-out neuron, when traces are kept
  // Cascade only.
  std::vector<double> stage1_spike_times_ns;
  std::optional<Trajectory> stage1_trajectory;
  bool causal = true;  // every read-out spike has a stage-1 spike at most delay + 2 ns earlier

  [[nodiscard]] bool unclassified() const noexcept { return !winning_window.has_value(); }
};

/// JSON {label, fired[], winning_window (1-based or null), spike_times_ns[], unclassified}.
nlohmann::json to_json(const InferenceResult& r);

struct InferOptions {
  bool keep_traces = false;
  const PulseJitter* jitter = nullptr;
  std::mt19937_64* rng = nullptr;
};

/// encode, synthesize per window, multiplex, integrate, detect, demultiplex.
InferenceResult infer(const PixelPattern& pattern, const WeightMatrix& w, const SimContext& sim,
                      const InferOptions& opt = {});

/// As infer, with neuron 1's photon density driving neuron 2 (from its own rest
/// under the stage-1 resting output); the classification is read from neuron 2.
InferenceResult infer_cascaded(const PixelPattern& pattern, const WeightMatrix& w, const SimContext& sim,
                               const CascadeConfig& cc, const InferOptions& opt = {});

/// Neuron-2 input power for a stage-1 photon-density trace.
StimulusWaveform cascade_drive(const Trajectory& stage1, const CascadeConfig& cc);

/// Resting state of neuron 2 under neuron 1's resting output.
NeuronState cascade_rest(const NeuronState& rest1, const CascadeConfig& cc);

struct Evaluation {
  std::size_t total = 0;
  std::size_t correct = 0;
  std::size_t unclassified = 0;
  /// confusion[target][predicted]; the last column counts unclassified results.
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<InferenceResult> results;

  [[nodiscard]] double accuracy() const noexcept {
    return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
  }
};

/// Patterns run in parallel; aggregation follows dataset order.
/// targets[k] is the 0-based window pattern k should fire.
Evaluation evaluate(const std::vector<PixelPattern>& patterns, const std::vector<std::size_t>& targets,
                    const WeightMatrix& w, const SimContext& sim, const std::optional<CascadeConfig>& cascade = std::nullopt);

nlohmann::json to_json(const Evaluation& e);

}  // namespace fpsa
