#pragma once

#include <span>
#include <vector>

#include "fpsa/yamada.hpp"

namespace fpsa {

/// Spike times in ns, strictly increasing and non-negative.
struct SpikeTrain {
  std::vector<double> times;

  SpikeTrain() = default;
  /// Throws ContractError unless `t` is strictly increasing and non-negative.
  explicit SpikeTrain(std::vector<double> t);

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
  [[nodiscard]] bool empty() const noexcept { return times.empty(); }
  bool operator==(const SpikeTrain&) const = default;
};

struct SpikeDetectConfig {
  double threshold = 0.0;        // absolute photon density, m^-3
  double min_separation = 0.3;   // ns
  double min_prominence = 0.5;   // fraction of threshold
};

void validate(const SpikeDetectConfig& cfg);

/// Peaks of a uniformly sampled signal: local maxima at or above threshold
/// whose topographic prominence is at least min_prominence * threshold.
/// Peaks closer than min_separation are resolved in favour of the taller one.
SpikeTrain detect_peaks(std::span<const double> signal, double dt_ps, double t0_ns, const SpikeDetectConfig& cfg);

/// detect_peaks applied to the photon density of a trajectory.
SpikeTrain detect_spikes(const Trajectory& traj, const SpikeDetectConfig& cfg);

}  // namespace fpsa
