#include "doctest.h"

#include <array>
#include <cmath>
#include <sstream>

#include "fpsa/errors.hpp"
#include "fpsa/presets.hpp"

#include "support.hpp"

using namespace fpsa;

namespace {

// Damped Newton on the three equilibrium equations with a finite-difference Jacobian.
NeuronState newton_equilibrium(const LaserParams& p, NeuronState x, double phi) {
  auto f = [&](const std::array<double, 3>& v) {
    const auto d = derivatives({v[0], v[1], v[2]}, p, phi, 0.0);
    return std::array<double, 3>{d.dS, d.dn_a, d.dn_s};
  };
  std::array<double, 3> v{x.S, x.n_a, x.n_s};
  for (int it = 0; it < 200; ++it) {
    const auto r = f(v);
    double J[3][3];
    for (int c = 0; c < 3; ++c) {
      auto w = v;
      const double h = 1e-7 * std::max(std::abs(v[c]), 1.0);
      w[c] += h;
      const auto rh = f(w);
      for (int rr = 0; rr < 3; ++rr) J[rr][c] = (rh[rr] - r[rr]) / h;
    }
    // Cramer's rule.
    auto det3 = [](double m[3][3]) {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const double D = det3(J);
    std::array<double, 3> step{};
    for (int c = 0; c < 3; ++c) {
      double M[3][3];
      for (int rr = 0; rr < 3; ++rr)
        for (int cc = 0; cc < 3; ++cc) M[rr][cc] = cc == c ? -r[rr] : J[rr][cc];
      step[c] = det3(M) / D;
    }
    double lambda = 1.0;
    while (v[0] + lambda * step[0] <= 0.0) lambda *= 0.5;
    for (int c = 0; c < 3; ++c) v[c] += lambda * step[c];
    if (std::abs(step[0]) < 1e-13 * v[0] && std::abs(step[1]) < 1e-13 * v[1]) break;
  }
  return {v[0], v[1], v[2]};
}

double max_rel_error(const Trajectory& coarse, const Trajectory& ref, double scale) {
  const auto stride = static_cast<std::size_t>(std::lround(coarse.dt_ps / ref.dt_ps));
  double err = 0.0;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    err = std::max(err, std::abs(coarse.samples[k].S - ref.samples[k * stride].S) / scale);
  }
  return err;
}

}  // namespace

TEST_CASE("steady state agrees with a damped Newton solve") {
  for (const auto& n : {neuron1(), neuron2()}) {
    const auto s = steady_state(n.params);
    const auto o = newton_equilibrium(n.params, s, 0.0);
    CHECK(test::rel_diff(s.S, o.S) < 1e-6);
    CHECK(test::rel_diff(s.n_a, o.n_a) < 1e-9);
    CHECK(test::rel_diff(s.n_s, o.n_s) < 1e-9);
  }
  const auto p = neuron1().params;
  const auto s = steady_state(p, 2e19, 0.0);
  const auto o = newton_equilibrium(p, s, 2e19);
  CHECK(test::rel_diff(s.S, o.S) < 1e-6);
}

TEST_CASE("rest is a fixed point of the integrator") {
  const auto n = neuron1();
  const auto rest = steady_state(n.params);
  const auto t = integrate(n.params, Drive{}, 10.0, 0.2, rest);
  CHECK(t.size() == 50001);
  CHECK(test::rel_diff(t.samples.back().S, rest.S) < 1e-9);
  CHECK(test::rel_diff(t.samples.back().n_a, rest.n_a) < 1e-12);
  CHECK(t.clamped_steps == 0);
}

TEST_CASE("RK4 converges at fourth order on an excitable response") {
  const auto p = neuron1().params;
  auto x = steady_state(p);
  x.n_a *= 1.1;  // kicked above threshold: one stereotyped pulse, no stimulus edges
  const auto ref = integrate(p, Drive{}, 6.0, 0.025, x);
  double peak = 0.0;
  for (const auto& s : ref.samples) peak = std::max(peak, s.S);
  REQUIRE(peak > 1e23);
  REQUIRE(ref.clamped_steps == 0);
  const double e8 = max_rel_error(integrate(p, Drive{}, 6.0, 0.8, x), ref, peak);
  const double e4 = max_rel_error(integrate(p, Drive{}, 6.0, 0.4, x), ref, peak);
  const double e2 = max_rel_error(integrate(p, Drive{}, 6.0, 0.2, x), ref, peak);
  CHECK(std::log2(e8 / e4) > 3.5);
  CHECK(std::log2(e4 / e2) > 3.5);
}

TEST_CASE("photon and carrier budgets close over a spike") {
  // X(T) - X(0) equals the trapezoid integral of the right-hand side along the trajectory.
  const auto n = neuron1();
  Drive d;
  d.pre = single_pulse(1.5 * n.cal.threshold_mw, 1.0, 0.2, 0.05, 5.0);
  const auto t = integrate(n.params, d, 5.0, 0.05, steady_state(n.params));
  double iS = 0.0, ia = 0.0, is = 0.0;
  const double h = t.dt_ps * 1e-3;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    // Zero-order hold: the step from k uses the stimulus sampled at k.
    const auto d0 = derivatives(t.samples[k], n.params, t.phi_pre[k], 0.0);
    const auto d1 = derivatives(t.samples[k + 1], n.params, t.phi_pre[k], 0.0);
    iS += 0.5 * h * (d0.dS + d1.dS);
    ia += 0.5 * h * (d0.dn_a + d1.dn_a);
    is += 0.5 * h * (d0.dn_s + d1.dn_s);
  }
  double peak = 0.0, na_lo = 1e300, na_hi = 0.0;
  for (const auto& s : t.samples) {
    peak = std::max(peak, s.S);
    na_lo = std::min(na_lo, s.n_a);
    na_hi = std::max(na_hi, s.n_a);
  }
  REQUIRE(peak > 1e23);
  CHECK(std::abs(t.samples.back().S - t.samples.front().S - iS) < 1e-3 * peak);
  CHECK(std::abs(t.samples.back().n_a - t.samples.front().n_a - ia) < 1e-3 * (na_hi - na_lo));
  CHECK(std::abs(t.samples.back().n_s - t.samples.front().n_s - is) < 1e-3 * t.samples.front().n_s);
}

TEST_CASE("integrate preconditions") {
  const auto p = neuron1().params;
  const auto rest = steady_state(p);
  CHECK(max_step_ps(p) == doctest::Approx(0.96));
  CHECK_THROWS_WITH_AS(integrate(p, Drive{}, 1.0, 1.0, rest), doctest::Contains("0.96"), PreconditionError);
  CHECK_THROWS_AS(integrate(p, Drive{}, 1e-4, 0.2, rest), PreconditionError);
  CHECK_THROWS_AS(integrate(p, Drive{}, 1.0, 0.0, rest), PreconditionError);
  CHECK_THROWS_AS(integrate(p, Drive{}, 1.0, 0.2, {std::nan(""), 0.0, 0.0}), Error);
}

TEST_CASE("integration is deterministic and the noise seed matters") {
  const auto n = neuron1();
  const auto rest = steady_state(n.params);
  Drive d;
  d.pre = single_pulse(1.5 * n.cal.threshold_mw, 1.0);
  CHECK(integrate(n.params, d, 5.0, 0.2, rest).samples == integrate(n.params, d, 5.0, 0.2, rest).samples);

  IntegrateOptions a, b;
  a.noise = NoiseConfig{1.0, 11};
  b.noise = NoiseConfig{1.0, 12};
  const auto ta = integrate(n.params, Drive{}, 2.0, 0.2, rest, a);
  CHECK(ta.samples == integrate(n.params, Drive{}, 2.0, 0.2, rest, a).samples);
  CHECK(ta.samples != integrate(n.params, Drive{}, 2.0, 0.2, rest, b).samples);
  CHECK(ta.samples != integrate(n.params, Drive{}, 2.0, 0.2, rest).samples);
}

TEST_CASE("systematic clamping escalates unless disabled") {
  auto p = neuron1().params;
  p.I_s = -2.0;  // absurd reverse bias: n_s overshoots below zero every step
  const auto rest = steady_state(neuron1().params);
  CHECK_THROWS_AS(integrate(p, Drive{}, 1.0, 0.5, rest), NumericalError);
  IntegrateOptions lenient;
  lenient.escalate_clamps = false;
  const auto t = integrate(p, Drive{}, 1.0, 0.5, rest, lenient);
  CHECK(t.clamped_steps > 100);
  for (const auto& s : t.samples) CHECK(s.n_s >= 0.0);
}

TEST_CASE("co-sampled injection follows the stimulus") {
  const auto n = neuron1();
  Drive d;
  d.pre = single_pulse(0.1, 1.0, 0.2, 0.2, 3.0);
  d.post = single_pulse(0.2, 2.0, 0.2, 0.2, 3.0);
  const auto t = integrate(n.params, d, 3.0, 0.2, steady_state(n.params));
  for (std::size_t k = 0; k < t.size(); ++k) {
    CHECK(t.phi_pre[k] == doctest::Approx(n.params.k_inj * d.pre.at(t.time_ns(k))));
    CHECK(t.phi_post[k] == doctest::Approx(n.params.k_inj * d.post.at(t.time_ns(k))));
  }
}

TEST_CASE("trajectory CSV honours the stride and keeps the last sample") {
  const auto p = neuron1().params;
  const auto t = integrate(p, Drive{}, 1.0, 0.2, steady_state(p));  // 5001 samples
  auto rows = [&](std::size_t stride) {
    std::ostringstream os;
    write_trajectory_csv(os, t, stride);
    const auto s = os.str();
    return std::count(s.begin(), s.end(), '\n') - 1;
  };
  CHECK(rows(1) == 5001);
  CHECK(rows(1000) == 6);
  CHECK(rows(3) == 1668);
  CHECK(rows(7000) == 2);
  std::ostringstream os;
  CHECK_THROWS_AS(write_trajectory_csv(os, t, 0), ConfigError);
}

TEST_CASE("saturation density") {
  const auto p = neuron1().params;
  CHECK(saturation_photon_density(p) == doctest::Approx(1.0 / (0.06 * 2.9e-12 * 0.8e-9)));
}
