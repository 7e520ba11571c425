#include "fpsa/spikes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpsa/errors.hpp"

namespace fpsa {

SpikeTrain::SpikeTrain(std::vector<double> t) : times(std::move(t)) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || times[k] < 0.0) throw ContractError("spike times must be finite and >= 0");
    if (k > 0 && !(times[k] > times[k - 1])) throw ContractError("spike times must be strictly increasing");
  }
}

void validate(const SpikeDetectConfig& cfg) {
  if (!(cfg.threshold > 0.0)) throw ConfigError("spike threshold must be > 0");
  if (!(cfg.min_separation >= 0.0)) throw ConfigError("min_separation must be >= 0");
  if (!(cfg.min_prominence >= 0.0)) throw ConfigError("min_prominence must be >= 0");
}

namespace {

double prominence(std::span<const double> x, std::size_t peak) {
  const double h = x[peak];
  double left_min = h;
  for (std::size_t i = peak; i-- > 0;) {
    if (x[i] > h) break;
    left_min = std::min(left_min, x[i]);
  }
  double right_min = h;
  for (std::size_t i = peak + 1; i < x.size(); ++i) {
    if (x[i] > h) break;
    right_min = std::min(right_min, x[i]);
  }
  return h - std::max(left_min, right_min);
}

}  // namespace

SpikeTrain detect_peaks(std::span<const double> x, double dt_ps, double t0_ns, const SpikeDetectConfig& cfg) {
  validate(cfg);
  std::vector<std::size_t> peaks;
  const std::size_t n = x.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (x[i] < cfg.threshold || !(x[i] > x[i - 1])) continue;
    // Plateau: the peak is the first sample of the flat top, provided the signal falls after it.
    std::size_t j = i;
    while (j + 1 < n && x[j + 1] == x[i]) ++j;
    if (j + 1 < n && x[j + 1] < x[i]) peaks.push_back(i);
    i = j;
  }

  const double min_prom = cfg.min_prominence * cfg.threshold;
  std::erase_if(peaks, [&](std::size_t k) { return prominence(x, k) < min_prom; });

  // Greedy suppression by height: keep the tallest, drop neighbours within min_separation.
  const auto min_gap = static_cast<double>(cfg.min_separation) * 1e3 / dt_ps;
  std::vector<std::size_t> order(peaks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[peaks[a]] > x[peaks[b]]; });
  std::vector<bool> keep(peaks.size(), true);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t a = order[oi];
    if (!keep[a]) continue;
    for (std::size_t b = 0; b < peaks.size(); ++b) {
      if (b == a || !keep[b]) continue;
      const double gap = std::fabs(static_cast<double>(peaks[b]) - static_cast<double>(peaks[a]));
      if (gap < min_gap - 1e-9) keep[b] = false;
    }
  }

  std::vector<double> times;
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    if (keep[k]) times.push_back(t0_ns + static_cast<double>(peaks[k]) * dt_ps * 1e-3);
  }
  return SpikeTrain(std::move(times));
}

SpikeTrain detect_spikes(const Trajectory& traj, const SpikeDetectConfig& cfg) {
  const auto s = traj.photon_density();
  return detect_peaks(s, traj.dt_ps, traj.t0_ns, cfg);
}

}  // namespace fpsa
