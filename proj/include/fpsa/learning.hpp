#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fpsa/encoding.hpp"
#include "fpsa/parallel.hpp"
#include "fpsa/yamada.hpp"

namespace fpsa {

/// K(t) = V0 (exp(-t/tau_m) - exp(-t/tau_s_k)), t in ns.
struct KernelParams {
  double V0 = 2.1165;
  double tau_m = 1.0;
  double tau_s_k = 0.25;
};

void validate(const KernelParams& kp);

/// Throws PreconditionError for t < 0.
double kernel(double t_ns, const KernelParams& kp);

/// Row i holds the weights from every PRE onto logical POST i.
struct WeightMatrix {
  std::size_t n_post = 0;
  std::size_t n_pre = 0;
  std::vector<double> data;  // row-major

  WeightMatrix() = default;
  WeightMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : n_post(rows), n_pre(cols), data(rows * cols, fill) {}

  [[nodiscard]] double& at(std::size_t i, std::size_t j) { return data[i * n_pre + j]; }
  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return data[i * n_pre + j]; }
  [[nodiscard]] std::vector<double> row(std::size_t i) const {
    return {data.begin() + static_cast<std::ptrdiff_t>(i * n_pre), data.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_pre)};
  }
  bool operator==(const WeightMatrix&) const = default;
};

nlohmann::json to_json(const WeightMatrix& w);
/// Strict: {n_post, n_pre, data}, finite entries, matching length.
WeightMatrix weights_from_json(const nlohmann::json& j);
WeightMatrix load_weights(const std::string& path);

/// Weight change of one synapse for one presentation:
///   n_d = 1, n_o = 0:  sum_{t_i <= t_max} K(t_max - t_i)
///   n_d = 0, n_o = 1: -sum_{t_i <= t_out} K(t_out - t_i)
///   n_d == n_o:        0
/// Throws ContractError when t_out is given without an output spike or missing with one,
/// or for counts outside {0, 1}.
double delta_weight(const SpikeTrain& pre, int n_d, int n_o, std::optional<double> t_out, double t_max,
                    const KernelParams& kp);

enum class InitScheme { zeros, uniform, seeded_random };

struct LearningConfig {
  double omega_f = 0.4e8;
  int max_epochs = 100;
  InitScheme init = InitScheme::seeded_random;
  double init_lo = 0.0;       // uniform only
  double init_hi = 0.05e8;    // upper bound for uniform and seeded_random
  std::uint64_t rng_seed = 1;
  bool batch = false;         // one update per epoch instead of per presentation
  /// Handle windows with more than one output spike (otherwise counted as one).
  bool multi_spike_extension = false;
  /// Training presents target rows at (1 - margin) and the other rows at
  /// (1 + margin) times their weights; 0 presents the weights as they are.
  double margin = 0.1;
};

void validate(const LearningConfig& cfg);

/// Strict parse of the training section of a config file; absent keys keep their defaults.
LearningConfig learning_config_from_json(const nlohmann::json& j, LearningConfig base = {});
nlohmann::json to_json(const LearningConfig& cfg);

WeightMatrix initial_weights(std::size_t n_post, std::size_t n_pre, const LearningConfig& cfg);

/// w + omega_f * deltas, elementwise. Throws ContractError on shape mismatch.
WeightMatrix apply_update(const WeightMatrix& w, const WeightMatrix& deltas, const LearningConfig& cfg);

/// Desired spike count per (pattern, logical POST).
struct TargetSpec {
  std::vector<std::vector<int>> n_d;

  /// Pattern k targets POST k.
  static TargetSpec one_hot(std::size_t n);
};

/// Requires one row per pattern, one column per POST, entries in {0,1}.
/// With `require_one_hot`, exactly one 1 per row.
void validate(const TargetSpec& t, std::size_t n_patterns, std::size_t n_post, bool require_one_hot = true);

/// Everything needed to turn a pattern and a weight matrix into a neuron response.
struct SimContext {
  LaserParams params;
  NeuronState rest;            // initial state of every presentation
  WindowSpec window;
  PulseShape shape;
  double dt_ps = 0.2;
  double encode_offset_ns = 5.0;
  SpikeDetectConfig detect;
  KernelParams kernel;
  Execution execution = Execution::parallel;
};

/// Stimulus for one presentation: per-window weighted synthesis, then multiplexing.
StimulusWaveform presentation_stimulus(const std::vector<SpikeTrain>& trains, const WeightMatrix& w,
                                       const SimContext& sim, const PulseJitter* jitter = nullptr,
                                       std::mt19937_64* rng = nullptr);

/// Neuron response to one presentation, read per logical POST.
struct WindowReadout {
  std::size_t n_o = 0;              // spikes detected in the slot
  std::optional<double> t_out;      // first spike, window-relative ns
  std::optional<double> t_second;   // second spike, if any
  double t_max = 0.0;               // window-relative ns
};

struct Presentation {
  Trajectory trajectory;
  SpikeTrain spikes;
  std::vector<WindowReadout> windows;
};

/// Integrates the presentation from sim.rest and reads every window.
/// t_max is the argmax of S between the earliest input spike and the window end,
/// or the window end when S stays within 1% of its resting value there.
Presentation present(const std::vector<SpikeTrain>& trains, const WeightMatrix& w, const SimContext& sim,
                     const PulseJitter* jitter = nullptr, std::mt19937_64* rng = nullptr);

struct EpochEntry {
  std::size_t pattern = 0;
  std::size_t post = 0;
  int n_d = 0;
  std::size_t n_o = 0;
  std::optional<double> t_out;
  double t_max = 0.0;
  double delta_norm = 0.0;  // Euclidean norm of the delta row, before omega_f
};

struct EpochRecord {
  int epoch = 0;
  std::vector<EpochEntry> entries;  // pattern-major, then POST
  bool all_correct = false;
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
  std::optional<int> converged_epoch;
};

/// One JSON object per line, one line per epoch.
void write_training_log(std::ostream& os, const TrainingLog& log, const std::vector<PixelPattern>& patterns);

/// Weights as presented during training: row i scaled by 1 - margin when n_d[i] = 1, else 1 + margin.
WeightMatrix margin_presentation(const WeightMatrix& w, const std::vector<int>& n_d, double margin);

/// Deltas for one presentation (one row per POST) and the matching log entries.
std::pair<WeightMatrix, std::vector<EpochEntry>> presentation_deltas(const std::vector<SpikeTrain>& trains,
                                                                     const Presentation& pres,
                                                                     const std::vector<int>& n_d, std::size_t pattern,
                                                                     const LearningConfig& cfg, const SimContext& sim);

/// One pass over the patterns in dataset order. Per-presentation updates by
/// default; with cfg.batch the presentations run in parallel against the
/// epoch-start weights and their deltas are summed in dataset order.
std::pair<WeightMatrix, EpochRecord> train_epoch(const std::vector<PixelPattern>& patterns, const TargetSpec& targets,
                                                 const WeightMatrix& w, const LearningConfig& cfg,
                                                 const SimContext& sim, int epoch_index);

struct TrainResult {
  WeightMatrix weights;
  TrainingLog log;
  [[nodiscard]] bool converged() const noexcept { return log.converged_epoch.has_value(); }
};

/// Repeats train_epoch until an epoch sees n_o == n_d for every (pattern, POST)
/// or max_epochs passes. Non-convergence is reported through the result.
TrainResult train(const std::vector<PixelPattern>& patterns, const TargetSpec& targets, const LearningConfig& cfg,
                  const SimContext& sim, std::optional<WeightMatrix> initial = std::nullopt);

}  // namespace fpsa
