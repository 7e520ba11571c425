#include "doctest.h"

#include "fpsa/errors.hpp"
#include "fpsa/presets.hpp"

#include "support.hpp"

using namespace fpsa;

namespace {

// Window `win` receives 1.5 A* from PRE `pre` alone.
WeightMatrix single_drive(std::size_t n_post, std::size_t n_pre, std::size_t win, std::size_t pre, const SimContext& sim) {
  WeightMatrix w(n_post, n_pre, 0.0);
  w.at(win, pre) = 1.5 * neuron1().cal.threshold_mw / sim.shape.amplitude_unit;
  return w;
}

}  // namespace

TEST_CASE("topology validation") {
  const auto sim = default_sim(Task::digits);
  const Topology topo{4, 4, sim.window};
  CHECK_NOTHROW(validate(topo, WeightMatrix(4, 4)));
  CHECK_THROWS_AS(validate(topo, WeightMatrix(3, 4)), ConfigError);
  CHECK_THROWS_AS(validate(topo, WeightMatrix(4, 5)), ConfigError);
  CHECK_THROWS_AS(validate(Topology{4, 3, sim.window}, WeightMatrix(3, 4)), ConfigError);
  CHECK_THROWS_AS(infer(glyph("X"), WeightMatrix(4, 4), sim), ConfigError);
}

TEST_CASE("a single driven window wins") {
  const auto sim = default_sim(Task::xdu);
  const auto r = infer(glyph("X"), single_drive(3, 5, 2, 2, sim), sim, {true});
  CHECK(r.fired == std::vector<bool>{false, false, true});
  REQUIRE(r.winning_window);
  CHECK(*r.winning_window == 2);
  CHECK_FALSE(r.unclassified());
  REQUIRE(r.spike_times_ns.size() == 1);
  CHECK(r.spike_times_ns[0] > 2 * sim.window.slot_ns() + 11.0);
  REQUIRE(r.trajectory);
  CHECK(r.trajectory->duration_ns() == doctest::Approx(sim.window.total_ns()));

  const auto j = to_json(r);
  CHECK(j["winning_window"] == 3);
  CHECK(j["unclassified"] == false);
}

TEST_CASE("no window or several windows leave the pattern unclassified") {
  const auto sim = default_sim(Task::xdu);
  const auto silent = infer(glyph("X"), WeightMatrix(3, 5, 0.0), sim);
  CHECK(silent.unclassified());
  CHECK(to_json(silent)["winning_window"].is_null());
  auto w = single_drive(3, 5, 0, 2, sim);
  w.at(1, 2) = w.at(0, 2);
  const auto two = infer(glyph("X"), w, sim);
  CHECK(two.fired == std::vector<bool>{true, true, false});
  CHECK(two.unclassified());
}

TEST_CASE("cascade rest is an equilibrium under the stage-1 resting output") {
  const auto cc = default_cascade();
  const auto rest1 = steady_state(neuron1().params);
  const auto r2 = cascade_rest(rest1, cc);
  const double phi = cc.params2.k_inj * cc.attenuation * cc.output_gain * rest1.S;
  const auto d = derivatives(r2, cc.params2, 0.0, phi);
  CHECK(std::abs(d.dS) * cc.params2.tau_ph * 1e-3 < 1e-6 * r2.S);
  CHECK(std::abs(d.dn_a) * cc.params2.tau_a < 1e-9 * r2.n_a);
}

TEST_CASE("cascade drive scales and delays the stage-1 photon density") {
  const auto p = neuron1().params;
  Drive d;
  d.pre = single_pulse(0.2, 1.0, 0.2, 0.2, 3.0);
  const auto t1 = integrate(p, d, 3.0, 0.2, steady_state(p));
  CascadeConfig cc = default_cascade();
  cc.coupling_delay_ns = 0.5;
  const auto w = cascade_drive(t1, cc);
  CHECK(w.values.size() == t1.size() + 2500);
  for (std::size_t k = 0; k < 2500; ++k) CHECK(w.values[k] == cc.attenuation * cc.output_gain * t1.samples[0].S);
  for (std::size_t k = 0; k < t1.size(); k += 97) CHECK(w.values[k + 2500] == cc.attenuation * cc.output_gain * t1.samples[k].S);
}

TEST_CASE("cascaded inference follows stage 1 and is causal") {
  const auto sim = default_sim(Task::xdu);
  for (double delay : {0.0, 1.5}) {
    auto cc = default_cascade();
    cc.coupling_delay_ns = delay;
    const auto r = infer_cascaded(glyph("X"), single_drive(3, 5, 1, 2, sim), sim, cc, {true});
    CHECK(r.causal);
    REQUIRE(r.winning_window);
    CHECK(*r.winning_window == 1);
    REQUIRE(r.stage1_spike_times_ns.size() == 1);
    REQUIRE(r.spike_times_ns.size() == 1);
    CHECK(r.spike_times_ns[0] > r.stage1_spike_times_ns[0] + delay);
    CHECK(r.spike_times_ns[0] < r.stage1_spike_times_ns[0] + delay + 0.5);
    REQUIRE(r.stage1_trajectory);
    REQUIRE(r.trajectory);
  }
  auto cc = default_cascade();
  const auto quiet = infer_cascaded(glyph("X"), WeightMatrix(3, 5, 0.0), sim, cc);
  CHECK(quiet.spike_times_ns.empty());
  CHECK(quiet.unclassified());
}

TEST_CASE("weak coupling does not fire stage 2") {
  const auto sim = default_sim(Task::xdu);
  auto cc = default_cascade();
  cc.attenuation = 0.5 * kCascadeAttenuation / kCascadeMargin;  // half the threshold coupling
  const auto r = infer_cascaded(glyph("X"), single_drive(3, 5, 1, 2, sim), sim, cc);
  CHECK(r.stage1_spike_times_ns.size() == 1);
  CHECK(r.spike_times_ns.empty());
}

TEST_CASE("cascade config validation") {
  auto cc = default_cascade();
  CHECK_NOTHROW(validate(cc));
  cc.attenuation = 1.5;
  CHECK_THROWS_AS(validate(cc), ConfigError);
  cc = default_cascade();
  cc.coupling_delay_ns = -1.0;
  CHECK_THROWS_AS(validate(cc), ConfigError);
  cc = default_cascade();
  cc.output_gain = -1.0;
  CHECK_THROWS_AS(validate(cc), ConfigError);
}

TEST_CASE("evaluation bookkeeping") {
  const auto sim = default_sim(Task::xdu);
  const auto pats = task_patterns(Task::xdu);
  // Every letter fires window 0 through PRE 0; X, D and U all have a black pixel in column 1.
  const auto ev = evaluate(pats, {0, 1, 2}, single_drive(3, 5, 0, 0, sim), sim);
  CHECK(ev.total == 3);
  CHECK(ev.correct == 1);
  CHECK(ev.accuracy() == doctest::Approx(1.0 / 3.0));
  CHECK(ev.unclassified == 0);
  CHECK(ev.confusion[0][0] == 1);
  CHECK(ev.confusion[1][0] == 1);
  CHECK(ev.confusion[2][0] == 1);
  std::size_t sum = 0;
  for (const auto& row : ev.confusion) {
    CHECK(row.size() == 4);
    for (auto c : row) sum += c;
  }
  CHECK(sum == 3);
  const auto j = to_json(ev);
  CHECK(j["results"].size() == 3);
  CHECK(j["correct"] == 1);

  CHECK_THROWS_AS(evaluate(pats, {0, 1}, WeightMatrix(3, 5), sim), ConfigError);
  CHECK_THROWS_AS(evaluate(pats, {0, 1, 3}, WeightMatrix(3, 5), sim), ConfigError);
}

TEST_CASE("trained letters classify directly and through the cascade") {
  for (auto task : {Task::xdu, Task::nju}) {
    const auto sim = default_sim(task);
    const auto pats = task_patterns(task);
    const auto res = train(pats, TargetSpec::one_hot(3), default_learning(), sim);
    REQUIRE(res.converged());
    const auto direct = evaluate(pats, {0, 1, 2}, res.weights, sim);
    CHECK(direct.correct == 3);
    const auto casc = evaluate(pats, {0, 1, 2}, res.weights, sim, default_cascade());
    CHECK(casc.correct == 3);
    for (const auto& r : casc.results) CHECK(r.causal);
  }
}
