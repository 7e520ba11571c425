#include "commands.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fpsa/characterize.hpp"
#include "fpsa/config.hpp"
#include "fpsa/errors.hpp"
#include "fpsa/io.hpp"
#include "fpsa/network.hpp"
#include "fpsa/presets.hpp"
#include "fpsa/protocols.hpp"
#include "fpsa/repro.hpp"

#include "manifest.hpp"
#include "schemas.hpp"
#include "svg.hpp"

namespace fpsa::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Outcome {
  std::vector<std::string> artifacts;
  json config = json::object();
  std::optional<std::uint64_t> seed;
  int exit_code = 0;
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

void emit_text(Outcome& o, const std::string& path, const std::string& text) {
  write_file_atomic(path, text);
  o.artifacts.push_back(path);
}

void emit_json(Outcome& o, const std::string& path, const json& j, void (*check)(const json&)) {
  const auto text = j.dump(2) + "\n";
  check(json::parse(text));
  emit_text(o, path, text);
}

const std::vector<std::string> kTrajectoryHeader = {"t_ns", "S", "n_a", "n_s", "phi_pre", "phi_post"};

std::string trajectory_csv(const Trajectory& t, std::size_t stride) {
  std::ostringstream os;
  write_trajectory_csv(os, t, stride);
  auto text = os.str();
  check_csv(text, kTrajectoryHeader);
  return text;
}

std::string trajectory_svg(const std::string& title, const Trajectory& t) {
  std::vector<double> x;
  SvgSeries inj{"injection (m^-3)", {}}, s{"S (m^-3)", {}}, na{"n_a (m^-3)", {}}, ns{"n_s (m^-3)", {}};
  for (std::size_t k = 0; k < t.size(); ++k) {
    x.push_back(t.time_ns(k));
    inj.y.push_back(t.phi_pre[k] + t.phi_post[k]);
    s.y.push_back(t.samples[k].S);
    na.y.push_back(t.samples[k].n_a);
    ns.y.push_back(t.samples[k].n_s);
  }
  return svg_traces(title, "t (ns)", x, {inj, s, na, ns});
}

RunConfig task_config(Task t, const std::string& config_path) {
  RunConfig rc{default_sim(t), default_learning()};
  if (!config_path.empty()) rc = load_run_config(config_path, rc);
  return rc;
}

std::vector<std::size_t> one_hot_targets(std::size_t n) {
  std::vector<std::size_t> t(n);
  std::iota(t.begin(), t.end(), std::size_t{0});
  return t;
}

std::string file_digest(const std::string& path) { return hex64(fnv1a64(read_file(path))); }

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string params, stimulus, out, svg, initial = "rest";
  double duration_ns = 0.0, dt_ps = 0.2, noise = 0.0;
  std::uint64_t seed = 0;
  std::size_t stride = 1;
};

void cmd_simulate(const SimulateArgs& a, Outcome& o, Streams io) {
  const auto p = load_laser_params(a.params);
  o.seed = a.seed;
  o.config = {{"params", to_json(p)}, {"duration_ns", a.duration_ns}, {"dt_ps", a.dt_ps}, {"initial", a.initial},
              {"noise", a.noise},     {"stride", a.stride}};
  Drive d;
  if (!a.stimulus.empty()) {
    d.pre = load_waveform_csv(a.stimulus);
    o.config["stimulus_fnv1a64"] = file_digest(a.stimulus);
  }
  IntegrateOptions opts;
  if (a.noise > 0.0) opts.noise = NoiseConfig{a.noise, a.seed};
  const NeuronState init = a.initial == "rest" ? steady_state(p) : NeuronState{};
  const auto traj = integrate(p, d, a.duration_ns, a.dt_ps, init, opts);
  emit_text(o, a.out, trajectory_csv(traj, a.stride));
  if (!a.svg.empty()) emit_text(o, a.svg, trajectory_svg("simulate", traj));
  io.out << "simulated " << format_number(traj.duration_ns()) << " ns (" << traj.size() << " samples, "
         << traj.clamped_steps << " clamped steps) -> " << a.out << "\n";
}

// ---------------------------------------------------------------- demo

struct DemoArgs {
  std::string experiment, out_dir = ".";
  double dt_ps = 0.2;
  std::size_t stride = 5;
  bool svg = false;
};

Protocol make_protocol(const std::string& name, double a_star, double dt_ps) {
  if (name == "threshold") return threshold_protocol(a_star, dt_ps);
  if (name == "integration") return integration_protocol(a_star, dt_ps);
  if (name == "refractory") return refractory_protocol(a_star, dt_ps);
  throw ConfigError("unknown experiment '" + name + "'");
}

std::string counts(const ProtocolRun& r) {
  std::string s;
  for (const auto& seg : r.segments) s += (s.empty() ? "" : ",") + std::to_string(seg.spikes);
  return "[" + s + "]";
}

void cmd_demo(const DemoArgs& a, Outcome& o, Streams io) {
  const auto n1 = neuron1();
  o.config = {{"experiment", a.experiment}, {"dt_ps", a.dt_ps}, {"stride", a.stride},
              {"params", to_json(n1.params)}, {"calibration", to_json(n1.cal)}};
  fs::create_directories(a.out_dir);
  auto path = [&](const std::string& f) { return (fs::path(a.out_dir) / f).string(); };
  const double a_star = n1.cal.threshold_mw;

  if (a.experiment != "cascade") {
    const auto run = run_protocol(make_protocol(a.experiment, a_star, a.dt_ps), n1, a.dt_ps);
    emit_text(o, path(a.experiment + "_trace.csv"), trajectory_csv(run.trajectory, a.stride));
    if (a.svg) emit_text(o, path(a.experiment + "_trace.svg"), trajectory_svg(a.experiment, run.trajectory));
    auto v = to_json(run);
    v["a_star_mw"] = a_star;
    emit_json(o, path(a.experiment + "_verdict.json"), v, check_demo_json);
    io.out << a.experiment << ": spikes " << counts(run) << " verdict " << (run.pass() ? "pass" : "fail") << "\n";
    return;
  }

  const auto cc = default_cascade();
  o.config["cascade"] = {{"attenuation", cc.attenuation}, {"coupling_delay_ns", cc.coupling_delay_ns},
                         {"output_gain", cc.output_gain}, {"params2", to_json(cc.params2)}};
  json v = {{"experiment", "cascade"}, {"a_star_mw", a_star}, {"protocols", json::object()}};
  bool all = true;
  for (const std::string name : {"threshold", "integration", "refractory"}) {
    const auto run = run_cascade_protocol(make_protocol(name, a_star, a.dt_ps), n1, cc, a.dt_ps);
    const auto stem = "cascade_" + name;
    emit_text(o, path(stem + "_stage1.csv"), trajectory_csv(run.stage1.trajectory, a.stride));
    emit_text(o, path(stem + "_stage2.csv"), trajectory_csv(run.stage2.trajectory, a.stride));
    if (a.svg) {
      emit_text(o, path(stem + "_stage1.svg"), trajectory_svg(stem + " stage 1", run.stage1.trajectory));
      emit_text(o, path(stem + "_stage2.svg"), trajectory_svg(stem + " stage 2", run.stage2.trajectory));
    }
    v["protocols"][name] = to_json(run);
    all = all && run.pass();
    io.out << "cascade " << name << ": stage 1 " << counts(run.stage1) << ", stage 2 " << counts(run.stage2)
           << " verdict " << (run.pass() ? "pass" : "fail") << "\n";
  }
  v["verdict"] = all ? "pass" : "fail";
  emit_json(o, path("cascade_verdict.json"), v, check_demo_json);
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string task, config, out_weights, log;
  std::optional<std::uint64_t> seed;
};

void cmd_train(const TrainArgs& a, Outcome& o, Streams io) {
  const Task t = task_from_string(a.task);
  auto rc = task_config(t, a.config);
  if (a.seed) rc.learning.rng_seed = *a.seed;
  validate(rc.learning);
  o.seed = rc.learning.rng_seed;
  o.config = to_json(rc);
  o.config["task"] = a.task;

  const auto pats = task_patterns(t);
  const auto res = train(pats, TargetSpec::one_hot(pats.size()), rc.learning, rc.sim);
  emit_json(o, a.out_weights, to_json(res.weights), check_weights_json);
  if (!a.log.empty()) {
    std::ostringstream os;
    write_training_log(os, res.log, pats);
    check_training_log(os.str());
    emit_text(o, a.log, os.str());
  }
  if (res.converged()) {
    io.out << a.task << ": converged after " << *res.log.converged_epoch << " epochs -> " << a.out_weights << "\n";
  } else {
    io.err << a.task << ": no convergence within " << rc.learning.max_epochs << " epochs (weights of the last epoch written)\n";
    o.exit_code = static_cast<int>(ExitCode::not_converged);
  }
}

// ---------------------------------------------------------------- infer

struct InferArgs {
  std::string task, config, weights, out;
  bool cascade = false;
  std::optional<double> attenuation, delay_ns;
};

void cmd_infer(const InferArgs& a, Outcome& o, Streams io) {
  const Task t = task_from_string(a.task);
  const auto rc = task_config(t, a.config);
  o.config = to_json(rc);
  o.config["task"] = a.task;
  o.config["weights_fnv1a64"] = file_digest(a.weights);
  const auto w = load_weights(a.weights);

  std::optional<CascadeConfig> cc;
  if (a.cascade) {
    cc = default_cascade();
    if (a.attenuation) cc->attenuation = *a.attenuation;
    if (a.delay_ns) cc->coupling_delay_ns = *a.delay_ns;
    validate(*cc);
    o.config["cascade"] = {{"attenuation", cc->attenuation}, {"coupling_delay_ns", cc->coupling_delay_ns},
                           {"output_gain", cc->output_gain}, {"params2", to_json(cc->params2)}};
  } else if (a.attenuation || a.delay_ns) {
    throw ConfigError("--attenuation and --delay require --cascade");
  }

  const auto pats = task_patterns(t);
  const auto ev = evaluate(pats, one_hot_targets(pats.size()), w, rc.sim, cc);
  auto j = to_json(ev);
  j["task"] = a.task;
  j["cascade"] = a.cascade;
  emit_json(o, a.out, j, check_evaluation_json);
  io.out << a.task << (a.cascade ? " (cascade)" : "") << ": " << ev.correct << "/" << ev.total << " correct";
  if (ev.unclassified > 0) io.out << ", " << ev.unclassified << " unclassified";
  io.out << "\n";
}

// ---------------------------------------------------------------- repro

struct ReproArgs {
  std::string task = "digits", config, weights, out;
  std::size_t trials = 500;
  double amp_jitter = default_jitter().amp_sigma;
  double time_jitter_ns = default_jitter().time_sigma_ns;
  std::uint64_t seed = 1;
};

void cmd_repro(const ReproArgs& a, Outcome& o, Streams io) {
  const Task t = task_from_string(a.task);
  const auto rc = task_config(t, a.config);
  const ReproConfig cfg{a.trials, {a.amp_jitter, a.time_jitter_ns}, a.seed};
  o.seed = a.seed;
  o.config = to_json(rc);
  o.config["task"] = a.task;
  o.config["trials"] = a.trials;
  o.config["jitter"] = {{"amp_sigma", a.amp_jitter}, {"time_sigma_ns", a.time_jitter_ns}};
  if (a.trials == 0) throw ConfigError("--trials must be >= 1");

  const auto pats = task_patterns(t);
  WeightMatrix w;
  if (!a.weights.empty()) {
    o.config["weights_fnv1a64"] = file_digest(a.weights);
    w = load_weights(a.weights);
  } else {
    const auto res = train(pats, TargetSpec::one_hot(pats.size()), rc.learning, rc.sim);
    if (!res.converged()) {
      io.err << a.task << ": training with the run configuration did not converge; pass --weights\n";
      o.exit_code = static_cast<int>(ExitCode::not_converged);
      return;
    }
    w = res.weights;
  }
  const auto summary = run_repro(pats, w, rc.sim, cfg);
  auto j = to_json(summary, cfg);
  j["task"] = a.task;
  emit_json(o, a.out, j, check_repro_json);
  for (const auto& p : summary.patterns) {
    io.out << p.label << ": " << format_number(100.0 * p.consistency()) << "% of " << cfg.trials
           << " trials match the jitter-free verdict\n";
  }
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string mode, params, pump, out, svg;
  std::optional<double> probe_mw;
};

std::vector<double> parse_pump(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ConfigError("--pump must be A:B:N");
  double lo = 0, hi = 0;
  long n = 0;
  try {
    std::size_t used = 0;
    lo = std::stod(spec.substr(0, c1), &used);
    if (used != c1) throw std::invalid_argument("trailing");
    hi = std::stod(spec.substr(c1 + 1, c2 - c1 - 1), &used);
    if (used != c2 - c1 - 1) throw std::invalid_argument("trailing");
    n = std::stol(spec.substr(c2 + 1), &used);
    if (used != spec.size() - c2 - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ConfigError("--pump must be A:B:N with numbers A, B (A) and an integer N");
  }
  if (n < 1 || !std::isfinite(lo) || !std::isfinite(hi) || lo <= 0.0 || (n > 1 && !(hi > lo))) {
    throw ConfigError("--pump needs 0 < A < B and N >= 1");
  }
  std::vector<double> grid;
  for (long k = 0; k < n; ++k) grid.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
  return grid;
}

void cmd_sweep(const SweepArgs& a, Outcome& o, Streams io) {
  const auto p = load_laser_params(a.params);
  const auto grid = parse_pump(a.pump);
  o.config = {{"mode", a.mode}, {"params", to_json(p)}, {"pump", grid}};
  std::string text;
  std::vector<double> x = grid;
  SvgSeries y1, y2;
  if (a.mode == "pi") {
    const auto curve = pi_curve(p, grid);
    text = "I_a_A,mean_S,spontaneous_floor,self_pulsing\n";
    for (const auto& pt : curve.points) {
      text += format_number(pt.I_a) + "," + format_number(pt.mean_S) + "," + format_number(pt.spontaneous_floor) + "," +
              (pt.self_pulsing ? "1" : "0") + "\n";
      y1.y.push_back(pt.mean_S);
    }
    y1.name = "mean S (m^-3)";
    check_csv(text, {"I_a_A", "mean_S", "spontaneous_floor", "self_pulsing"});
    io.out << "pi: " << grid.size() << " points, knee "
           << (curve.knee_current ? format_number(*curve.knee_current) + " A" : std::string("not reached")) << "\n";
  } else {
    const double probe_mw = a.probe_mw.value_or(1.5 * neuron1().cal.threshold_mw);
    o.config["probe_mw"] = probe_mw;
    const ProbeConfig pc;
    const auto probe = single_pulse(probe_mw, 5.0, 0.2, pc.dt_ps, pc.probe_horizon_ns);
    const auto reports = map_indexed<RegimeReport>(grid.size(), [&](std::size_t i) {
      auto q = p;
      q.I_a = grid[i];
      return classify_regime(q, probe, pc);
    });
    text = "I_a_A,regime,frequency_ghz\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& r = reports[i];
      text += format_number(grid[i]) + "," + std::string(to_string(r.regime)) + "," +
              (r.pulsation_frequency_ghz ? format_number(*r.pulsation_frequency_ghz) : "") + "\n";
      y1.y.push_back(static_cast<double>(r.regime));
      y2.y.push_back(r.pulsation_frequency_ghz.value_or(0.0));
    }
    y1.name = "regime (0 quiescent, 1 excitable, 2 self-pulsing)";
    y2.name = "pulsation frequency (GHz)";
    check_csv(text, {"I_a_A", "regime", "frequency_ghz"}, {"regime"}, {"frequency_ghz"});
    io.out << "regime: " << grid.size() << " points\n";
  }
  emit_text(o, a.out, text);
  if (!a.svg.empty()) {
    if (grid.size() < 2) throw ConfigError("--svg needs a pump grid of at least two points");
    std::vector<SvgSeries> series{y1};
    if (!y2.y.empty()) series.push_back(y2);
    emit_text(o, a.svg, svg_traces("sweep " + a.mode, "I_a (A)", x, series));
  }
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::string out;
};

void cmd_calibrate(const CalibrateArgs& a, Outcome& o, Streams io) {
  o.config = {{"neuron1_base", to_json(neuron1_base())}, {"neuron2_base", to_json(neuron2_base())},
              {"bias_fraction", kBiasFraction}};
  const auto n1 = calibrate_neuron(neuron1_base());
  const auto n2 = calibrate_neuron(neuron2_base());
  const double c = cascade_threshold_coupling(n1, n2);
  const json j = {{"neuron1", {{"params", to_json(n1.params)}, {"calibration", to_json(n1.cal)}}},
                  {"neuron2", {{"params", to_json(n2.params)}, {"calibration", to_json(n2.cal)}}},
                  {"cascade_threshold_coupling", c},
                  {"default_output_gain", kCascadeMargin * c / kCascadeAttenuation}};
  emit_json(o, a.out, j, check_calibration_json);
  for (const auto& [name, n] : {std::pair{"neuron1", n1}, std::pair{"neuron2", n2}}) {
    io.out << name << ": onset " << format_number(n.cal.onset_current) << " A, A* " << format_number(n.cal.threshold_mw)
           << " mW, spike peak " << format_number(n.cal.spike_peak) << " m^-3\n";
  }
  io.out << "cascade threshold coupling " << format_number(c) << " mW per m^-3\n";
}

// ---------------------------------------------------------------- replay

struct ReplayArgs {
  std::string from;
  std::optional<long> entry;
};

class CwdGuard {
 public:
  explicit CwdGuard(const std::string& dir) : prev_(fs::current_path()) {
    if (!dir.empty()) {
      if (!fs::is_directory(dir)) throw ConfigError("recorded working directory '" + dir + "' does not exist");
      fs::current_path(dir);
    }
  }
  ~CwdGuard() {
    std::error_code ec;
    fs::current_path(prev_, ec);
  }
  CwdGuard(const CwdGuard&) = delete;
  CwdGuard& operator=(const CwdGuard&) = delete;

 private:
  fs::path prev_;
};

void cmd_replay(const ReplayArgs& a, Outcome& o, Streams io) {
  const auto entries = read_manifest(a.from);
  std::optional<std::size_t> idx;
  if (a.entry) {
    const long n = static_cast<long>(entries.size());
    const long k = *a.entry < 0 ? n + *a.entry : *a.entry;
    if (k < 0 || k >= n) throw ConfigError("--entry out of range (manifest has " + std::to_string(n) + " records)");
    idx = static_cast<std::size_t>(k);
  } else {
    for (std::size_t k = entries.size(); k-- > 0;) {
      if (entries[k].command != "replay") {
        idx = k;
        break;
      }
    }
    if (!idx) throw ConfigError("manifest '" + a.from + "' has no record to replay");
  }
  const auto& m = entries[*idx];
  if (m.command == "replay") throw ConfigError("cannot replay a replay record");
  o.seed = m.seed;
  o.config = {{"manifest", a.from}, {"entry", *idx}, {"argv", m.argv}};

  bool same = true;
  {
    CwdGuard guard(m.cwd);
    std::ostringstream sink_out, sink_err;
    const int code = run(m.argv, sink_out, sink_err, false);
    if (code != m.exit_code) {
      io.out << "exit code " << code << " differs from recorded " << m.exit_code << "\n";
      same = false;
    }
    for (const auto& art : m.artifacts) {
      const bool present = fs::exists(art.path);
      const bool match = present && hash_artifact(art.path).fnv1a64 == art.fnv1a64;
      same = same && match;
      io.out << (match ? "identical " : (present ? "DIFFERS   " : "MISSING   ")) << art.path << "\n";
      o.artifacts.push_back((fs::current_path() / art.path).lexically_normal().string());
    }
  }
  io.out << (same ? "replay reproduced every artifact byte-identically\n" : "replay did not reproduce the recorded run\n");
  if (!same) o.exit_code = static_cast<int>(ExitCode::numerical);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool record) {
  CLI::App app{"Spiking neural network simulator built on excitable semiconductor lasers", "fpsa_snn"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);
  std::string manifest_path = "fpsa_manifest.jsonl";
  app.add_option("--manifest", manifest_path, "Append-only JSONL run manifest")->capture_default_str();

  std::string command;
  std::function<void(Outcome&, Streams)> action;

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Integrate one neuron under a stimulus waveform");
  s->add_option("--params", sim.params, "Laser parameter JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--stimulus", sim.stimulus, "Injected power CSV (t_ns,power_mw); none = unperturbed");
  s->add_option("--duration", sim.duration_ns, "Duration (ns)")->required()->check(CLI::PositiveNumber);
  s->add_option("--dt", sim.dt_ps, "Step (ps)")->capture_default_str();
  s->add_option("--seed", sim.seed, "Noise seed")->capture_default_str();
  s->add_option("--noise", sim.noise, "Spontaneous-emission noise strength (0 = off)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  s->add_option("--initial", sim.initial, "Initial state")->capture_default_str()->check(CLI::IsMember({"rest", "zero"}));
  s->add_option("--stride", sim.stride, "Write every n-th sample")->capture_default_str()->check(CLI::PositiveNumber);
  s->add_option("--out", sim.out, "Trajectory CSV")->required();
  s->add_option("--svg", sim.svg, "Also write an SVG of the traces");
  s->callback([&] {
    command = "simulate";
    action = [&](Outcome& o, Streams io) { cmd_simulate(sim, o, io); };
  });

  DemoArgs demo;
  auto* d = app.add_subcommand("demo", "Run a neuron dynamics protocol on the shipped neurons");
  d->add_option("--experiment", demo.experiment, "Protocol")
      ->required()
      ->check(CLI::IsMember({"threshold", "integration", "refractory", "cascade"}));
  d->add_option("--out-dir", demo.out_dir, "Output directory")->capture_default_str();
  d->add_option("--dt", demo.dt_ps, "Step (ps)")->capture_default_str();
  d->add_option("--stride", demo.stride, "Write every n-th sample")->capture_default_str()->check(CLI::PositiveNumber);
  d->add_flag("--svg", demo.svg, "Also write SVG traces");
  d->callback([&] {
    command = "demo";
    action = [&](Outcome& o, Streams io) { cmd_demo(demo, o, io); };
  });

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train the weights of a recognition task");
  t->add_option("--task", tr.task, "digits, xdu or nju")->required();
  t->add_option("--config", tr.config, "Run configuration JSON")->check(CLI::ExistingFile);
  t->add_option("--seed", tr.seed, "Weight initialization seed (overrides the config)");
  t->add_option("--out-weights", tr.out_weights, "Weights JSON")->required();
  t->add_option("--log", tr.log, "Per-epoch training log (JSONL)");
  t->callback([&] {
    command = "train";
    action = [&](Outcome& o, Streams io) { cmd_train(tr, o, io); };
  });

  InferArgs inf;
  auto* i = app.add_subcommand("infer", "Classify every pattern of a task with trained weights");
  i->add_option("--task", inf.task, "digits, xdu or nju")->required();
  i->add_option("--weights", inf.weights, "Weights JSON")->required();
  i->add_option("--config", inf.config, "Run configuration JSON")->check(CLI::ExistingFile);
  i->add_flag("--cascade", inf.cascade, "Read the decision from a second neuron driven by the first");
  i->add_option("--attenuation", inf.attenuation, "Inter-stage transmission in [0, 1]");
  i->add_option("--delay", inf.delay_ns, "Inter-stage delay (ns)");
  i->add_option("--out", inf.out, "Results JSON")->required();
  i->callback([&] {
    command = "infer";
    action = [&](Outcome& o, Streams io) { cmd_infer(inf, o, io); };
  });

  ReproArgs rp;
  auto* r = app.add_subcommand("repro", "Monte Carlo over jittered stimuli");
  r->add_option("--task", rp.task, "digits, xdu or nju")->capture_default_str();
  r->add_option("--trials", rp.trials, "Trials per pattern")->capture_default_str();
  r->add_option("--amp-jitter", rp.amp_jitter, "Relative amplitude sigma per pulse")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  r->add_option("--time-jitter", rp.time_jitter_ns, "Timing sigma per pulse (ns)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  r->add_option("--seed", rp.seed, "Jitter seed")->capture_default_str();
  r->add_option("--weights", rp.weights, "Weights JSON (default: train with the run configuration)");
  r->add_option("--config", rp.config, "Run configuration JSON")->check(CLI::ExistingFile);
  r->add_option("--out", rp.out, "Summary JSON")->required();
  r->callback([&] {
    command = "repro";
    action = [&](Outcome& o, Streams io) { cmd_repro(rp, o, io); };
  });

  SweepArgs sw;
  auto* w = app.add_subcommand("sweep", "PI curve or regime map over a gain-current grid");
  w->add_option("--mode", sw.mode, "pi or regime")->required()->check(CLI::IsMember({"pi", "regime"}));
  w->add_option("--params", sw.params, "Laser parameter JSON")->required()->check(CLI::ExistingFile);
  w->add_option("--pump", sw.pump, "Gain current grid A:B:N (A)")->required();
  w->add_option("--probe-mw", sw.probe_mw, "Regime probe pulse amplitude (mW)")->check(CLI::PositiveNumber);
  w->add_option("--out", sw.out, "CSV")->required();
  w->add_option("--svg", sw.svg, "Also write an SVG");
  w->callback([&] {
    command = "sweep";
    action = [&](Outcome& o, Streams io) { cmd_sweep(sw, o, io); };
  });

  CalibrateArgs cal;
  auto* c = app.add_subcommand("calibrate", "Recompute the shipped neuron calibration");
  c->add_option("--out", cal.out, "Calibration JSON")->required();
  c->callback([&] {
    command = "calibrate";
    action = [&](Outcome& o, Streams io) { cmd_calibrate(cal, o, io); };
  });

  ReplayArgs rl;
  auto* y = app.add_subcommand("replay", "Re-run a manifest record and compare artifact hashes");
  y->add_option("--from", rl.from, "Manifest to read")->required()->check(CLI::ExistingFile);
  y->add_option("--entry", rl.entry, "Record index (negative counts from the end; default: last non-replay record)");
  y->callback([&] {
    command = "replay";
    action = [&](Outcome& o, Streams io) { cmd_replay(rl, o, io); };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  int code = 0;
  Streams io{out, err};
  try {
    action(o, io);
    code = o.exit_code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    code = static_cast<int>(exit_code(e));
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    code = static_cast<int>(ExitCode::usage);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    code = static_cast<int>(ExitCode::usage);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    code = 1;
  }
  if (!record) return code;

  RunManifest m;
  m.argv = args;
  m.cwd = fs::current_path().string();
  m.command = command;
  m.config_hash = hex64(fnv1a64(o.config.dump()));
  m.seed = o.seed;
  try {
    for (const auto& p : o.artifacts) m.artifacts.push_back(hash_artifact(p));
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.exit_code = code;
    append_manifest(manifest_path, m);
  } catch (const Error& e) {
    err << "error: manifest: " << e.what() << "\n";
    if (code == 0) code = static_cast<int>(ExitCode::usage);
  }
  return code;
}

}  // namespace fpsa::cli
