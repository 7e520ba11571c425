#include "fpsa/yamada.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <string>

#include "fpsa/errors.hpp"

namespace fpsa {

namespace {

bool finite3(double a, double b, double c) noexcept {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c);
}

void put_number(std::ostream& os, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  os.write(buf, res.ptr - buf);
}

}  // namespace

Derivatives derivatives(const NeuronState& s, const LaserParams& p, double phi_pre, double phi_post) {
  if (!finite3(s.S, s.n_a, s.n_s) || !std::isfinite(phi_pre) || !std::isfinite(phi_post)) {
    throw NumericalError("derivatives: non-finite state or injection");
  }
  const RateCoefficients c(p);
  return rate_equations(c, s.S, s.n_a, s.n_s, phi_pre + phi_post);
}

double max_step_ps(const LaserParams& p) noexcept { return p.tau_ph / 5.0; }

double saturation_photon_density(const LaserParams& p) noexcept {
  return 1.0 / (p.gamma_a * p.g_a * p.tau_a * 1e-9);
}

std::vector<double> Trajectory::photon_density() const {
  std::vector<double> out(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) out[k] = samples[k].S;
  return out;
}

Trajectory integrate(const LaserParams& p, const Drive& drive, double duration_ns, double dt_ps,
                     const NeuronState& initial, const IntegrateOptions& opts) {
  validate(p);
  if (!(dt_ps > 0.0) || dt_ps > max_step_ps(p) * (1.0 + 1e-12)) {
    throw PreconditionError("dt = " + std::to_string(dt_ps) + " ps exceeds the stability bound tau_ph/5 = " +
                            std::to_string(max_step_ps(p)) + " ps");
  }
  const double dt = dt_ps * 1e-3;
  if (!(duration_ns >= dt * (1.0 - 1e-9))) {
    throw PreconditionError("duration must be at least one step");
  }
  if (!finite3(initial.S, initial.n_a, initial.n_s)) throw NumericalError("integrate: non-finite initial state");

  const auto steps = static_cast<std::size_t>(std::llround(duration_ns / dt));
  const RateCoefficients c(p);

  Trajectory traj;
  traj.dt_ps = dt_ps;
  traj.samples.resize(steps + 1);
  traj.phi_pre.resize(steps + 1);
  traj.phi_post.resize(steps + 1);

  std::mt19937_64 rng(opts.noise ? opts.noise->seed : 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double noise_strength = opts.noise ? opts.noise->spontaneous_strength : 0.0;

  double S = initial.S, na = initial.n_a, ns = initial.n_s;
  for (std::size_t n = 0;; ++n) {
    const double t = static_cast<double>(n) * dt;
    const double phi_pre = p.k_inj * drive.pre.at(t);
    const double phi_post = p.k_inj * drive.post.at(t);
    traj.samples[n] = {S, na, ns};
    traj.phi_pre[n] = phi_pre;
    traj.phi_post[n] = phi_post;
    if (n == steps) break;

    const double phi = phi_pre + phi_post;
    const Derivatives k1 = rate_equations(c, S, na, ns, phi);
    const Derivatives k2 = rate_equations(c, S + 0.5 * dt * k1.dS, na + 0.5 * dt * k1.dn_a, ns + 0.5 * dt * k1.dn_s, phi);
    const Derivatives k3 = rate_equations(c, S + 0.5 * dt * k2.dS, na + 0.5 * dt * k2.dn_a, ns + 0.5 * dt * k2.dn_s, phi);
    const Derivatives k4 = rate_equations(c, S + dt * k3.dS, na + dt * k3.dn_a, ns + dt * k3.dn_s, phi);
    S += dt / 6.0 * (k1.dS + 2.0 * k2.dS + 2.0 * k3.dS + k4.dS);
    na += dt / 6.0 * (k1.dn_a + 2.0 * k2.dn_a + 2.0 * k3.dn_a + k4.dn_a);
    ns += dt / 6.0 * (k1.dn_s + 2.0 * k2.dn_s + 2.0 * k3.dn_s + k4.dn_s);

    if (noise_strength > 0.0) S += noise_strength * std::sqrt(c.spont * na * na * dt) * gauss(rng);

    if (!finite3(S, na, ns)) {
      throw NumericalError("integrate: state became non-finite at t = " + std::to_string(t) + " ns");
    }
    if (S < 0.0 || na < 0.0 || ns < 0.0) {
      S = std::max(S, 0.0);
      na = std::max(na, 0.0);
      ns = std::max(ns, 0.0);
      ++traj.clamped_steps;
    }
  }

  if (opts.escalate_clamps && steps > 0 &&
      static_cast<double>(traj.clamped_steps) > opts.max_clamp_fraction * static_cast<double>(steps)) {
    throw NumericalError(std::to_string(traj.clamped_steps) + " of " + std::to_string(steps) +
                         " steps were clamped to non-negative state; reduce dt");
  }
  return traj;
}

NeuronState steady_state(const LaserParams& p, double phi_pre, double phi_post) {
  validate(p);
  const RateCoefficients c(p);
  const double phi = phi_pre + phi_post;

  auto carriers = [&](double S) {
    const double u = S + c.phi_factor * phi;
    const double den_a = c.inv_tau_a + c.gain_a * u;
    if (!(den_a > 0.0)) throw NumericalError("steady_state: injection too strong for an equilibrium");
    const double na = std::max(0.0, (c.pump_a + c.gain_a * c.n0_a * u) / den_a);
    const double ns = std::max(0.0, (c.pump_s + c.gain_s * c.n0_s * S) / (c.inv_tau_s + c.gain_s * S));
    return std::pair{na, ns};
  };
  auto residual = [&](double S) {
    const auto [na, ns] = carriers(S);
    return (c.gain_a * (na - c.n0_a) + c.gain_s * (ns - c.n0_s) - c.inv_tau_ph) * S + c.spont * na * na;
  };

  if (residual(0.0) <= 0.0) {
    const auto [na, ns] = carriers(0.0);
    return {0.0, na, ns};
  }
  // First sign change on a geometric grid, then bisection.
  double lo = 0.0, hi = 1e6;
  while (residual(hi) > 0.0) {
    lo = hi;
    hi *= 1.25;
    if (hi > 1e32) throw NumericalError("steady_state: no equilibrium below 1e32 m^-3");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) > 0.0 ? lo : hi) = mid;
  }
  const double S = 0.5 * (lo + hi);
  const auto [na, ns] = carriers(S);
  return {S, na, ns};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t, std::size_t stride) {
  if (stride == 0) throw ConfigError("trajectory stride must be >= 1");
  os << "t_ns,S,n_a,n_s,phi_pre,phi_post\n";
  for (std::size_t k = 0; k < t.size(); k = (k + stride < t.size() || k + 1 == t.size()) ? k + stride : t.size() - 1) {
    const auto& s = t.samples[k];
    put_number(os, t.time_ns(k));
    for (double v : {s.S, s.n_a, s.n_s, t.phi_pre[k], t.phi_post[k]}) {
      os.put(',');
      put_number(os, v);
    }
    os.put('\n');
  }
}

}  // namespace fpsa
