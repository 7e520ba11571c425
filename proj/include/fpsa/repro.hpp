#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fpsa/network.hpp"

namespace fpsa {

struct ReproConfig {
  std::size_t trials = 500;
  PulseJitter jitter;
  std::uint64_t seed = 1;
};

struct PatternRepro {
  std::string label;
  std::optional<std::size_t> nominal;                 // jitter-free winning window
  std::vector<std::optional<std::size_t>> verdicts;   // one per trial
  [[nodiscard]] double consistency() const noexcept;  // fraction of trials equal to nominal
};

struct ReproSummary {
  std::vector<PatternRepro> patterns;
  [[nodiscard]] double min_consistency() const noexcept;
};

/// Every trial re-synthesizes the stimulus with per-pulse jitter drawn from an
/// engine seeded by (seed, pattern index, trial index); trials run in parallel.
ReproSummary run_repro(const std::vector<PixelPattern>& patterns, const WeightMatrix& w, const SimContext& sim,
                       const ReproConfig& cfg);

nlohmann::json to_json(const ReproSummary& s, const ReproConfig& cfg);

}  // namespace fpsa
