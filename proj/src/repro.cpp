#include "fpsa/repro.hpp"

#include <algorithm>
#include <random>

namespace fpsa {

double PatternRepro::consistency() const noexcept {
  if (verdicts.empty()) return 1.0;
  const auto same = std::count(verdicts.begin(), verdicts.end(), nominal);
  return static_cast<double>(same) / static_cast<double>(verdicts.size());
}

double ReproSummary::min_consistency() const noexcept {
  double m = 1.0;
  for (const auto& p : patterns) m = std::min(m, p.consistency());
  return m;
}

ReproSummary run_repro(const std::vector<PixelPattern>& patterns, const WeightMatrix& w, const SimContext& sim,
                       const ReproConfig& cfg) {
  ReproSummary out;
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    PatternRepro pr;
    pr.label = patterns[p].label;
    pr.nominal = infer(patterns[p], w, sim).winning_window;
    pr.verdicts = map_indexed<std::optional<std::size_t>>(
        cfg.trials,
        [&](std::size_t k) {
          std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                            static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(k)};
          std::mt19937_64 rng(seq);
          InferOptions opt;
          opt.jitter = &cfg.jitter;
          opt.rng = &rng;
          return infer(patterns[p], w, sim, opt).winning_window;
        },
        sim.execution);
    out.patterns.push_back(std::move(pr));
  }
  return out;
}

nlohmann::json to_json(const ReproSummary& s, const ReproConfig& cfg) {
  auto window = [](const std::optional<std::size_t>& v) { return v ? nlohmann::json(*v + 1) : nlohmann::json(nullptr); };
  nlohmann::json pats = nlohmann::json::array();
  for (const auto& p : s.patterns) {
    nlohmann::json verdicts = nlohmann::json::array();
    for (const auto& v : p.verdicts) verdicts.push_back(window(v));
    pats.push_back({{"label", p.label}, {"nominal_window", window(p.nominal)}, {"consistency", p.consistency()},
                    {"verdicts", verdicts}});
  }
  return {{"trials", cfg.trials},
          {"amp_jitter", cfg.jitter.amp_sigma},
          {"time_jitter_ns", cfg.jitter.time_sigma_ns},
          {"seed", cfg.seed},
          {"min_consistency", s.min_consistency()},
          {"patterns", pats}};
}

}  // namespace fpsa
