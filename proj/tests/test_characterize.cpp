#include "doctest.h"

#include <algorithm>

#include "fpsa/errors.hpp"
#include "fpsa/presets.hpp"

#include "support.hpp"

using namespace fpsa;

TEST_CASE("pulsation onset lies in the bracket found by a linear scan") {
  const auto base = neuron1_base();
  std::optional<double> below, above;
  for (double i = 2.60e-3; i <= 3.00e-3 + 1e-12; i += 0.02e-3) {
    auto p = base;
    p.I_a = i;
    if (self_pulsation_frequency(p)) {
      above = i;
      break;
    }
    below = i;
  }
  REQUIRE(below);
  REQUIRE(above);
  const double onset = find_pulsation_onset(base, {0.3e-3, 5e-3});
  CHECK(onset > *below);
  CHECK(onset <= *above);
  CHECK(test::rel_diff(onset, neuron1().cal.onset_current) < 1e-6);
}

TEST_CASE("onset search needs a bracketing range") {
  CHECK_THROWS_AS(find_pulsation_onset(neuron1_base(), {0.3e-3, 1e-3}), CalibrationError);
  CHECK_THROWS_AS(find_pulsation_onset(neuron1_base(), {4e-3, 5e-3}), CalibrationError);
}

TEST_CASE("excitable bias is the requested fraction of the onset") {
  const auto p = calibrate_excitable_bias(neuron1_base(), {0.3e-3, 5e-3}, 0.9);
  CHECK(p.I_a == doctest::Approx(0.9 * neuron1().cal.onset_current).epsilon(1e-5));
}

TEST_CASE("excitation threshold separates firing from silence") {
  const auto n = neuron1();
  const double a = find_excitation_threshold(n.params);
  CHECK(test::rel_diff(a, n.cal.threshold_mw) < 1e-6);
  const ProbeConfig cfg;
  auto fires = [&](double amp) {
    Drive d;
    d.pre = single_pulse(amp, 5.0, 0.2, cfg.dt_ps, cfg.probe_horizon_ns);
    return elicits_pulse(n.params, d, cfg.probe_horizon_ns, cfg);
  };
  CHECK(fires(1.01 * a));
  CHECK_FALSE(fires(0.99 * a));
}

TEST_CASE("regimes appear in order along an ascending pump grid") {
  const auto n = neuron1();
  const ProbeConfig cfg;
  const auto probe = single_pulse(1.5 * n.cal.threshold_mw, 5.0, 0.2, cfg.dt_ps, cfg.probe_horizon_ns);
  std::vector<Regime> seen;
  std::optional<double> last_f;
  for (double i = 1.0e-3; i <= 4.0e-3 + 1e-12; i += 0.25e-3) {
    auto p = n.params;
    p.I_a = i;
    const auto r = classify_regime(p, probe, cfg);
    CHECK(r.pulsation_frequency_ghz.has_value() == (r.regime == Regime::self_pulsing));
    if (r.pulsation_frequency_ghz) {
      if (last_f) CHECK(*r.pulsation_frequency_ghz >= *last_f);
      last_f = r.pulsation_frequency_ghz;
    }
    seen.push_back(r.regime);
  }
  CHECK(std::is_sorted(seen.begin(), seen.end()));
  CHECK(std::count(seen.begin(), seen.end(), Regime::quiescent) > 0);
  CHECK(std::count(seen.begin(), seen.end(), Regime::excitable) > 0);
  CHECK(std::count(seen.begin(), seen.end(), Regime::self_pulsing) > 0);
  auto at_bias = n.params;
  CHECK(classify_regime(at_bias, probe, cfg).regime == Regime::excitable);
}

TEST_CASE("PI curve") {
  const auto p = neuron1_base();
  std::vector<double> grid;
  for (int k = 0; k < 9; ++k) grid.push_back(0.5e-3 + 0.45e-3 * k);
  const auto curve = pi_curve(p, grid);
  REQUIRE(curve.points.size() == grid.size());
  REQUIRE(curve.knee_current);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    CHECK(curve.points[k].I_a == grid[k]);
    if (k > 0) CHECK(curve.points[k].mean_S >= curve.points[k - 1].mean_S);
    const bool above = grid[k] >= *curve.knee_current;
    CHECK((curve.points[k].mean_S > 10.0 * curve.points[k].spontaneous_floor) == above);
  }
  CHECK(*curve.knee_current > neuron1().cal.bias_fraction * neuron1().cal.onset_current * 0.9);
  CHECK_THROWS_AS(pi_curve(p, {2e-3, 1e-3}), ConfigError);
}

TEST_CASE("regime names") {
  CHECK(to_string(Regime::quiescent) == "quiescent");
  CHECK(to_string(Regime::excitable) == "excitable");
  CHECK(to_string(Regime::self_pulsing) == "self_pulsing");
}
