// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fpsa/characterize.hpp"
#include "fpsa/presets.hpp"
#include "fpsa/protocols.hpp"
#include "fpsa/repro.hpp"

#include "commands.hpp"
#include "manifest.hpp"
#include "support.hpp"

using namespace fpsa;

namespace {

struct Verdict {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Verdict()> body;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

// Trained digit weights shared by criteria 6 and 8.
std::optional<WeightMatrix> g_digit_weights;

Verdict encoding_exact() {
  const auto t = encode_pattern(glyph("2"));
  const std::vector<std::vector<double>> want{{7, 9, 10, 11}, {8, 10, 12}, {9, 11, 13}, {10, 11, 12, 14}};
  Verdict v;
  v.ok = t.size() == want.size();
  for (std::size_t j = 0; v.ok && j < want.size(); ++j) v.ok = t[j].times == want[j];
  v.detail = "column trains of \"2\" " + std::string(v.ok ? "exact" : "differ");
  return v;
}

Verdict kernel_constants() {
  const KernelParams kp;
  double best = 0.0, t_best = 0.0;
  for (int k = 0; k <= 2000000; ++k) {
    const double t = 1e-6 * k;
    const double v = kernel(t, kp);
    if (v > best) {
      best = v;
      t_best = t;
    }
  }
  Verdict v;
  v.ok = std::abs(best - 1.0) <= 1e-3 && std::abs(t_best - 0.4621) < 1e-4 && kernel(0.0, kp) == 0.0;
  v.detail = "max K = " + fmt(best) + " at t = " + fmt(t_best) + " ns, K(0) = " + fmt(kernel(0.0, kp));
  return v;
}

Verdict learning_oracle() {
  const KernelParams kp;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  std::uniform_int_distribution<int> count(0, 10), bit(0, 1);
  double worst = 0.0;
  bool zero_exact = true;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> times;
    const int n = count(rng);
    for (int k = 0; k < n; ++k) times.push_back(u(rng));
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    const int n_d = bit(rng), n_o = bit(rng);
    const double t_out = u(rng), t_max = u(rng);
    const double got = delta_weight(SpikeTrain(times), n_d, n_o, n_o ? std::optional(t_out) : std::nullopt, t_max, kp);
    double want = 0.0;
    if (n_d != n_o) {
      const double anchor = n_d == 1 ? t_max : t_out;
      for (double ti : times) {
        if (anchor - ti >= 0.0) want += kp.V0 * (std::exp(-(anchor - ti) / kp.tau_m) - std::exp(-(anchor - ti) / kp.tau_s_k));
      }
      if (n_d == 0) want = -want;
    } else {
      zero_exact = zero_exact && got == 0.0;
    }
    worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
  }
  return {worst <= 1e-12 && zero_exact, "worst relative deviation " + fmt(worst) + " over 1000 instances"};
}

Verdict integrator_order() {
  const auto p = neuron1().params;
  auto x = steady_state(p);
  x.n_a *= 1.1;
  const auto ref = integrate(p, Drive{}, 6.0, 0.025, x);
  double peak = 0.0;
  for (const auto& s : ref.samples) peak = std::max(peak, s.S);
  auto err = [&](double dt) {
    const auto c = integrate(p, Drive{}, 6.0, dt, x);
    const auto stride = static_cast<std::size_t>(std::lround(dt / 0.025));
    double e = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) e = std::max(e, std::abs(c.samples[k].S - ref.samples[k * stride].S) / peak);
    return std::pair{e, c.clamped_steps};
  };
  const auto [e8, c8] = err(0.8);
  const auto [e4, c4] = err(0.4);
  const auto [e2, c2] = err(0.2);
  const double o1 = std::log2(e8 / e4), o2 = std::log2(e4 / e2);
  const bool clamp_free = ref.clamped_steps + c8 + c4 + c2 == 0 && peak > 1e23;
  return {clamp_free && o1 >= 3.0 && o2 >= 3.0, "observed orders " + fmt(o1) + ", " + fmt(o2)};
}

Verdict dynamics_suite() {
  const auto n = neuron1();
  const auto th = run_protocol(threshold_protocol(n.cal.threshold_mw), n);
  const auto in = run_protocol(integration_protocol(n.cal.threshold_mw), n);
  const auto rf = run_protocol(refractory_protocol(n.cal.threshold_mw), n);
  const bool ok = th.segments[0].spikes == 1 && th.segments[1].spikes == 0 && th.segments[2].spikes == 0 &&
                  in.segments[0].spikes == 0 && in.segments[1].spikes >= 1 && rf.segments[0].spikes >= 1 &&
                  rf.segments[0].spikes < 5;
  std::ostringstream d;
  d << "threshold [" << th.segments[0].spikes << "," << th.segments[1].spikes << "," << th.segments[2].spikes
    << "], integration [" << in.segments[0].spikes << "," << in.segments[1].spikes << "], refractory "
    << rf.segments[0].spikes << " (target 3)";
  return {ok, d.str()};
}

bool one_window_each(const Evaluation& ev) {
  for (std::size_t k = 0; k < ev.results.size(); ++k) {
    const auto& r = ev.results[k];
    if (std::count(r.fired.begin(), r.fired.end(), true) != 1 || r.winning_window != std::optional<std::size_t>(k)) {
      return false;
    }
  }
  return true;
}

Verdict digit_task() {
  const auto sim = default_sim(Task::digits);
  const auto pats = task_patterns(Task::digits);
  const auto res = train(pats, TargetSpec::one_hot(4), default_learning(), sim);
  if (!res.converged()) return {false, "no convergence within " + std::to_string(default_learning().max_epochs) + " epochs"};
  g_digit_weights = res.weights;
  const auto ev = evaluate(pats, {0, 1, 2, 3}, res.weights, sim);
  return {ev.correct == 4 && one_window_each(ev) && *res.log.converged_epoch <= 100,
          "converged at epoch " + std::to_string(*res.log.converged_epoch) + ", " + std::to_string(ev.correct) +
              "/4 with one fired window each"};
}

Verdict letter_cascade() {
  std::string detail;
  bool ok = true;
  for (auto task : {Task::xdu, Task::nju}) {
    const auto sim = default_sim(task);
    const auto pats = task_patterns(task);
    const auto res = train(pats, TargetSpec::one_hot(3), default_learning(), sim);
    if (!res.converged()) return {false, "letter training did not converge"};
    const auto ev = evaluate(pats, {0, 1, 2}, res.weights, sim, default_cascade());
    const bool causal = std::all_of(ev.results.begin(), ev.results.end(), [](const InferenceResult& r) { return r.causal; });
    ok = ok && ev.correct == 3 && causal;
    detail += std::string(task == Task::xdu ? "XDU " : ", NJU ") + std::to_string(ev.correct) + "/3" +
              (causal ? " causal" : " NOT causal");
  }
  return {ok, detail};
}

Verdict reproducibility() {
  if (!g_digit_weights) return {false, "needs the trained digit weights"};
  ReproConfig cfg;
  cfg.trials = 500;
  cfg.jitter = default_jitter();
  const auto s = run_repro(task_patterns(Task::digits), *g_digit_weights, default_sim(Task::digits), cfg);
  std::string detail = "consistency per digit:";
  for (const auto& p : s.patterns) detail += " " + p.label + "=" + fmt(100.0 * p.consistency()) + "%";
  return {s.min_consistency() >= 0.99, detail};
}

Verdict characterization() {
  ProbeConfig cfg;
  std::vector<double> grid;
  for (int k = 0; k <= 80; ++k) grid.push_back(2.0e-3 + 0.025e-3 * k);
  // Absorber bias from weak to strong: more negative I_s with a shorter tau_s.
  const std::vector<std::pair<double, double>> bias{{0.0, 0.4}, {-0.1e-3, 0.3}, {-0.2e-3, 0.2}};
  std::vector<double> knees;
  for (const auto& [I_s, tau_s] : bias) {
    auto p = neuron1().params;
    p.I_s = I_s;
    p.tau_s = tau_s;
    const auto pi = pi_curve(p, grid, cfg);
    knees.push_back(pi.knee_current.value_or(NAN));
  }
  bool ok = std::none_of(knees.begin(), knees.end(), [](double k) { return std::isnan(k); }) &&
            std::is_sorted(knees.begin(), knees.end());

  std::vector<double> freqs;
  for (int k = 0; k <= 10; ++k) {
    auto p = neuron1().params;
    p.I_a = 3.0e-3 + 0.1e-3 * k;
    const auto f = self_pulsation_frequency(p, cfg);
    if (!f) {
      ok = false;
      break;
    }
    freqs.push_back(*f);
  }
  ok = ok && freqs.size() == 11 && std::is_sorted(freqs.begin(), freqs.end());
  std::string detail = "knees (A):";
  for (double k : knees) detail += " " + fmt(k);
  detail += "; frequency " + (freqs.empty() ? std::string("n/a") : fmt(freqs.front()) + " -> " + fmt(freqs.back())) +
            " GHz over 3.0-4.0 mA";
  return {ok, detail};
}

Verdict determinism() {
  test::TempDir dir("acceptance");
  const std::string man = dir.file("manifest.jsonl");
  const std::string params = std::string(FPSA_ASSET_DIR) + "/params/neuron1.json";
  std::ostringstream out, err;
  const std::vector<std::vector<std::string>> commands{
      {"simulate", "--params", params, "--duration", "5", "--noise", "1e-4", "--seed", "11", "--stride", "10", "--out",
       dir.file("sim.csv")},
      {"demo", "--experiment", "cascade", "--out-dir", dir.path().string(), "--stride", "20"},
      {"train", "--task", "xdu", "--out-weights", dir.file("w.json"), "--log", dir.file("log.jsonl")},
      {"infer", "--task", "xdu", "--weights", dir.file("w.json"), "--cascade", "--out", dir.file("eval.json")},
      {"repro", "--task", "xdu", "--trials", "10", "--weights", dir.file("w.json"), "--out", dir.file("repro.json")},
      {"sweep", "--mode", "regime", "--params", params, "--pump", "2e-3:3.5e-3:4", "--out", dir.file("regime.csv")},
  };
  for (auto args : commands) {
    args.insert(args.begin(), {"--manifest", man});
    if (cli::run(args, out, err) != 0) return {false, "command failed: " + args[2] + ": " + err.str()};
  }
  const auto n = cli::read_manifest(man).size();
  std::size_t identical = 0, artifacts = 0;
  for (std::size_t k = 0; k < n; ++k) {
    artifacts += cli::read_manifest(man)[k].artifacts.size();
    std::ostringstream rout;
    if (cli::run({"--manifest", man, "replay", "--from", man, "--entry", std::to_string(k)}, rout, err) == 0) ++identical;
  }
  return {identical == n && n == commands.size(),
          std::to_string(identical) + "/" + std::to_string(n) + " records replayed, " + std::to_string(artifacts) +
              " artifacts byte-identical"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "encoding exactness", 1e-3, encoding_exact},
      {2, "kernel constants", 1.0, kernel_constants},
      {3, "learning-rule oracle", 5.0, learning_oracle},
      {4, "integrator order", 60.0, integrator_order},
      {5, "neuron dynamics suite", 10.0, dynamics_suite},
      {6, "digit task", 120.0, digit_task},
      {7, "cascaded letter tasks", 180.0, letter_cascade},
      {8, "reproducibility Monte Carlo", 300.0, reproducibility},
      {9, "characterization properties", 120.0, characterization},
      {10, "determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.budget_s <= 0.0 || secs < c.budget_s;
    const bool pass = v.ok && in_time;
    if (!pass) ++failed;
    std::cout << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << v.detail << " (" << fmt(secs)
              << " s" << (c.budget_s > 0.0 ? ", budget " + fmt(c.budget_s) + " s" : std::string()) << ")"
              << (in_time ? "" : " over budget") << "\n"
              << std::flush;
  }
  return failed == 0 ? 0 : 1;
}
