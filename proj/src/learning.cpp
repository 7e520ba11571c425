#include "fpsa/learning.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fpsa/errors.hpp"
#include "fpsa/io.hpp"

namespace fpsa {

void validate(const KernelParams& kp) {
  if (!(kp.V0 > 0.0)) throw ConfigError("kernel V0 must be > 0");
  if (!(kp.tau_s_k > 0.0) || !(kp.tau_m > kp.tau_s_k)) throw ConfigError("kernel needs tau_m > tau_s_k > 0");
}

double kernel(double t_ns, const KernelParams& kp) {
  if (!(t_ns >= 0.0)) throw PreconditionError("kernel lag must be >= 0");
  return kp.V0 * (std::exp(-t_ns / kp.tau_m) - std::exp(-t_ns / kp.tau_s_k));
}

nlohmann::json to_json(const WeightMatrix& w) {
  return {{"n_post", w.n_post}, {"n_pre", w.n_pre}, {"data", w.data}};
}

WeightMatrix weights_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("weights must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "n_post" && key != "n_pre" && key != "data") throw ConfigError("weights: unknown key '" + key + "'");
  }
  WeightMatrix w;
  try {
    w.n_post = j.at("n_post").get<std::size_t>();
    w.n_pre = j.at("n_pre").get<std::size_t>();
    w.data = j.at("data").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("weights: ") + e.what());
  }
  if (w.n_post == 0 || w.n_pre == 0) throw ConfigError("weights: dimensions must be positive");
  if (w.data.size() != w.n_post * w.n_pre) throw ConfigError("weights: data length does not equal n_post * n_pre");
  for (double v : w.data) {
    if (!std::isfinite(v)) throw ConfigError("weights: entries must be finite");
  }
  return w;
}

WeightMatrix load_weights(const std::string& path) { return weights_from_json(read_json_file(path)); }

double delta_weight(const SpikeTrain& pre, int n_d, int n_o, std::optional<double> t_out, double t_max,
                    const KernelParams& kp) {
  if (n_d < 0 || n_d > 1 || n_o < 0 || n_o > 1) throw ContractError("delta_weight: spike counts must be 0 or 1");
  if ((n_o >= 1) != t_out.has_value()) throw ContractError("delta_weight: t_out must be given iff n_o >= 1");
  if (n_d == n_o) return 0.0;
  const double anchor = n_d == 1 ? t_max : *t_out;
  double sum = 0.0;
  for (double t : pre.times) {
    if (t > anchor) break;
    sum += kernel(anchor - t, kp);
  }
  return n_d == 1 ? sum : -sum;
}

void validate(const LearningConfig& cfg) {
  if (!(cfg.omega_f > 0.0) || !std::isfinite(cfg.omega_f)) throw ConfigError("omega_f must be finite and > 0");
  if (cfg.max_epochs < 1) throw ConfigError("max_epochs must be >= 1");
  if (cfg.init == InitScheme::uniform && !(cfg.init_lo <= cfg.init_hi)) throw ConfigError("init_lo must not exceed init_hi");
  if (cfg.init == InitScheme::seeded_random && !(cfg.init_hi >= 0.0)) throw ConfigError("init_hi must be >= 0");
  if (!(cfg.margin >= 0.0 && cfg.margin < 1.0)) throw ConfigError("margin must lie in [0, 1)");
}

namespace {

InitScheme init_from_string(const std::string& s) {
  if (s == "zeros") return InitScheme::zeros;
  if (s == "uniform") return InitScheme::uniform;
  if (s == "seeded_random") return InitScheme::seeded_random;
  throw ConfigError("unknown init scheme '" + s + "'");
}

const char* init_name(InitScheme s) {
  switch (s) {
    case InitScheme::zeros: return "zeros";
    case InitScheme::uniform: return "uniform";
    case InitScheme::seeded_random: return "seeded_random";
  }
  return "zeros";
}

}  // namespace

LearningConfig learning_config_from_json(const nlohmann::json& j, LearningConfig cfg) {
  if (!j.is_object()) throw ConfigError("learning config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "omega_f") cfg.omega_f = v.get<double>();
      else if (key == "max_epochs") cfg.max_epochs = v.get<int>();
      else if (key == "init") cfg.init = init_from_string(v.get<std::string>());
      else if (key == "init_lo") cfg.init_lo = v.get<double>();
      else if (key == "init_hi") cfg.init_hi = v.get<double>();
      else if (key == "rng_seed") cfg.rng_seed = v.get<std::uint64_t>();
      else if (key == "batch") cfg.batch = v.get<bool>();
      else if (key == "multi_spike_extension") cfg.multi_spike_extension = v.get<bool>();
      else if (key == "margin") cfg.margin = v.get<double>();
      else throw ConfigError("learning config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("learning config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

nlohmann::json to_json(const LearningConfig& cfg) {
  return {{"omega_f", cfg.omega_f}, {"max_epochs", cfg.max_epochs}, {"init", init_name(cfg.init)},
          {"init_lo", cfg.init_lo}, {"init_hi", cfg.init_hi},       {"rng_seed", cfg.rng_seed},
          {"batch", cfg.batch},     {"multi_spike_extension", cfg.multi_spike_extension}, {"margin", cfg.margin}};
}

WeightMatrix initial_weights(std::size_t n_post, std::size_t n_pre, const LearningConfig& cfg) {
  validate(cfg);
  WeightMatrix w(n_post, n_pre);
  if (cfg.init == InitScheme::zeros) return w;
  const double lo = cfg.init == InitScheme::uniform ? cfg.init_lo : 0.0;
  std::mt19937_64 rng(cfg.rng_seed);
  std::uniform_real_distribution<double> dist(lo, cfg.init_hi);
  for (double& v : w.data) v = dist(rng);
  return w;
}

WeightMatrix apply_update(const WeightMatrix& w, const WeightMatrix& deltas, const LearningConfig& cfg) {
  if (w.n_post != deltas.n_post || w.n_pre != deltas.n_pre || w.data.size() != deltas.data.size()) {
    throw ContractError("apply_update: weight and delta shapes differ");
  }
  WeightMatrix out = w;
  for (std::size_t k = 0; k < out.data.size(); ++k) out.data[k] += cfg.omega_f * deltas.data[k];
  return out;
}

TargetSpec TargetSpec::one_hot(std::size_t n) {
  TargetSpec t;
  t.n_d.assign(n, std::vector<int>(n, 0));
  for (std::size_t k = 0; k < n; ++k) t.n_d[k][k] = 1;
  return t;
}

void validate(const TargetSpec& t, std::size_t n_patterns, std::size_t n_post, bool require_one_hot) {
  if (t.n_d.size() != n_patterns) throw ConfigError("targets: one row per pattern required");
  for (const auto& row : t.n_d) {
    if (row.size() != n_post) throw ConfigError("targets: one entry per logical POST required");
    int ones = 0;
    for (int v : row) {
      if (v != 0 && v != 1) throw ConfigError("targets: desired counts must be 0 or 1");
      ones += v;
    }
    if (require_one_hot && ones != 1) throw ConfigError("targets: each pattern must target exactly one POST");
  }
}

StimulusWaveform presentation_stimulus(const std::vector<SpikeTrain>& trains, const WeightMatrix& w,
                                       const SimContext& sim, const PulseJitter* jitter, std::mt19937_64* rng) {
  if (w.n_pre != trains.size()) throw ContractError("weight matrix has " + std::to_string(w.n_pre) + " PRE columns, pattern has " +
                                                    std::to_string(trains.size()));
  if (w.n_post != sim.window.n_windows) throw ContractError("weight matrix rows must equal the number of windows");
  std::vector<StimulusWaveform> per_post;
  per_post.reserve(w.n_post);
  for (std::size_t i = 0; i < w.n_post; ++i) {
    per_post.push_back(synthesize_stimulus(trains, w.row(i), sim.shape, sim.dt_ps, sim.window.window_len_ns, jitter, rng));
  }
  return time_multiplex(per_post, sim.window);
}

Presentation present(const std::vector<SpikeTrain>& trains, const WeightMatrix& w, const SimContext& sim,
                     const PulseJitter* jitter, std::mt19937_64* rng) {
  Presentation pres;
  Drive drive;
  drive.pre = presentation_stimulus(trains, w, sim, jitter, rng);
  pres.trajectory = integrate(sim.params, drive, sim.window.total_ns(), sim.dt_ps, sim.rest);
  pres.spikes = detect_spikes(pres.trajectory, sim.detect);
  const auto bins = demultiplex_response(pres.spikes, sim.window);

  double first_input = sim.window.window_len_ns;
  for (const auto& tr : trains) {
    if (!tr.empty()) first_input = std::min(first_input, tr.times.front());
  }

  const double dt_ns = sim.dt_ps * 1e-3;
  const double rest_S = sim.rest.S;
  pres.windows.resize(sim.window.n_windows);
  for (std::size_t i = 0; i < sim.window.n_windows; ++i) {
    auto& r = pres.windows[i];
    r.n_o = bins[i].times.size();
    if (r.n_o >= 1) r.t_out = bins[i].times[0];
    if (r.n_o >= 2) r.t_second = bins[i].times[1];

    const double start = static_cast<double>(i) * sim.window.slot_ns();
    const auto a = static_cast<std::size_t>(std::llround((start + first_input) / dt_ns));
    const auto b = std::min(pres.trajectory.size(),
                            static_cast<std::size_t>(std::llround((start + sim.window.window_len_ns) / dt_ns)));
    r.t_max = sim.window.window_len_ns;
    if (a >= b) continue;
    std::size_t best = a;
    for (std::size_t k = a + 1; k < b; ++k) {
      if (pres.trajectory.samples[k].S > pres.trajectory.samples[best].S) best = k;
    }
    if (pres.trajectory.samples[best].S - rest_S > 0.01 * rest_S) {
      r.t_max = static_cast<double>(best) * dt_ns - start;
    }
  }
  return pres;
}

void write_training_log(std::ostream& os, const TrainingLog& log, const std::vector<PixelPattern>& patterns) {
  for (const auto& rec : log.epochs) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : rec.entries) {
      entries.push_back({{"pattern", patterns.at(e.pattern).label},
                         {"post", e.post},
                         {"n_d", e.n_d},
                         {"n_o", e.n_o},
                         {"t_out", e.t_out ? nlohmann::json(*e.t_out) : nlohmann::json(nullptr)},
                         {"t_max", e.t_max},
                         {"delta_norm", e.delta_norm}});
    }
    nlohmann::json line = {{"epoch", rec.epoch},
                           {"all_correct", rec.all_correct},
                           {"converged_epoch", log.converged_epoch && *log.converged_epoch == rec.epoch
                                                   ? nlohmann::json(rec.epoch)
                                                   : nlohmann::json(nullptr)},
                           {"entries", entries}};
    os << line.dump() << '\n';
  }
}

WeightMatrix margin_presentation(const WeightMatrix& w, const std::vector<int>& n_d, double margin) {
  if (n_d.size() != w.n_post) throw ContractError("margin_presentation: one target per row required");
  if (margin == 0.0) return w;
  WeightMatrix out = w;
  for (std::size_t i = 0; i < w.n_post; ++i) {
    const double s = n_d[i] == 1 ? 1.0 - margin : 1.0 + margin;
    for (std::size_t j = 0; j < w.n_pre; ++j) out.at(i, j) *= s;
  }
  return out;
}

std::pair<WeightMatrix, std::vector<EpochEntry>> presentation_deltas(const std::vector<SpikeTrain>& trains,
                                                                     const Presentation& pres,
                                                                     const std::vector<int>& n_d, std::size_t pattern,
                                                                     const LearningConfig& cfg, const SimContext& sim) {
  const std::size_t n_post = pres.windows.size();
  WeightMatrix d(n_post, trains.size());
  std::vector<EpochEntry> entries;
  entries.reserve(n_post);
  for (std::size_t i = 0; i < n_post; ++i) {
    const auto& r = pres.windows[i];
    EpochEntry e{pattern, i, n_d[i], r.n_o, r.t_out, r.t_max, 0.0};
    int n_o = std::min<int>(static_cast<int>(r.n_o), 1);
    std::optional<double> anchor = r.t_out;
    if (cfg.multi_spike_extension && r.n_o > 1 && n_d[i] == 1) {
      // A wanted spike followed by extras: depress at the second spike.
      n_o = 1;
      anchor = r.t_second;
      for (std::size_t j = 0; j < trains.size(); ++j) d.at(i, j) = delta_weight(trains[j], 0, 1, anchor, r.t_max, sim.kernel);
    } else {
      for (std::size_t j = 0; j < trains.size(); ++j) d.at(i, j) = delta_weight(trains[j], n_d[i], n_o, anchor, r.t_max, sim.kernel);
    }
    double sq = 0.0;
    for (std::size_t j = 0; j < trains.size(); ++j) sq += d.at(i, j) * d.at(i, j);
    e.delta_norm = std::sqrt(sq);
    entries.push_back(e);
  }
  return {std::move(d), std::move(entries)};
}

namespace {

bool entry_correct(const EpochEntry& e, const LearningConfig& cfg) {
  if (cfg.multi_spike_extension) return static_cast<int>(e.n_o) == e.n_d;
  return std::min<int>(static_cast<int>(e.n_o), 1) == e.n_d;
}

}  // namespace

std::pair<WeightMatrix, EpochRecord> train_epoch(const std::vector<PixelPattern>& patterns, const TargetSpec& targets,
                                                 const WeightMatrix& w, const LearningConfig& cfg,
                                                 const SimContext& sim, int epoch_index) {
  validate(targets, patterns.size(), sim.window.n_windows, false);
  std::vector<std::vector<SpikeTrain>> trains;
  trains.reserve(patterns.size());
  for (const auto& p : patterns) {
    require_window_fits(sim.window, p.rows, p.cols, sim.encode_offset_ns);
    trains.push_back(encode_pattern(p, sim.encode_offset_ns));
  }

  EpochRecord rec;
  rec.epoch = epoch_index;
  WeightMatrix current = w;
  if (cfg.batch) {
    auto results = map_indexed<std::pair<WeightMatrix, std::vector<EpochEntry>>>(
        patterns.size(),
        [&](std::size_t k) {
          const auto shown = margin_presentation(w, targets.n_d[k], cfg.margin);
          return presentation_deltas(trains[k], present(trains[k], shown, sim), targets.n_d[k], k, cfg, sim);
        },
        sim.execution);
    WeightMatrix total(w.n_post, w.n_pre);
    for (auto& [d, entries] : results) {
      for (std::size_t k = 0; k < total.data.size(); ++k) total.data[k] += d.data[k];
      rec.entries.insert(rec.entries.end(), entries.begin(), entries.end());
    }
    current = apply_update(current, total, cfg);
  } else {
    for (std::size_t k = 0; k < patterns.size(); ++k) {
      const auto shown = margin_presentation(current, targets.n_d[k], cfg.margin);
      auto [d, entries] = presentation_deltas(trains[k], present(trains[k], shown, sim), targets.n_d[k], k, cfg, sim);
      current = apply_update(current, d, cfg);
      rec.entries.insert(rec.entries.end(), entries.begin(), entries.end());
    }
  }
  rec.all_correct = std::all_of(rec.entries.begin(), rec.entries.end(),
                                [&](const EpochEntry& e) { return entry_correct(e, cfg); });
  // A fully correct epoch makes every delta exactly zero; keep the input bits.
  if (rec.all_correct) current = w;
  return {std::move(current), std::move(rec)};
}

TrainResult train(const std::vector<PixelPattern>& patterns, const TargetSpec& targets, const LearningConfig& cfg,
                  const SimContext& sim, std::optional<WeightMatrix> initial) {
  validate(cfg);
  TrainResult res;
  res.weights = initial ? *initial : initial_weights(sim.window.n_windows, patterns.front().cols, cfg);
  for (int ep = 1; ep <= cfg.max_epochs; ++ep) {
    auto [w, rec] = train_epoch(patterns, targets, res.weights, cfg, sim, ep);
    res.weights = std::move(w);
    const bool done = rec.all_correct;
    res.log.epochs.push_back(std::move(rec));
    if (done) {
      res.log.converged_epoch = ep;
      break;
    }
  }
  return res;
}

}  // namespace fpsa
