#include "fpsa/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "fpsa/errors.hpp"

namespace fpsa {

void validate(const PulseShape& shape) {
  if (!(shape.width_ns > 0.0) || !(shape.width_ns < 0.5)) throw ConfigError("pulse width must lie in (0, 0.5) ns");
  if (!(shape.amplitude_unit > 0.0) || !std::isfinite(shape.amplitude_unit)) {
    throw ConfigError("pulse amplitude_unit must be finite and > 0");
  }
}

StimulusWaveform zero_waveform(double dt_ps, double duration_ns) {
  if (!(dt_ps > 0.0)) throw ConfigError("waveform dt must be > 0");
  const auto n = static_cast<std::size_t>(std::llround(std::max(0.0, duration_ns) * 1e3 / dt_ps));
  return {dt_ps, std::vector<double>(n, 0.0)};
}

void add_pulse(std::vector<double>& values, double dt_ps, PulseKind kind, double width_ns, double center_ns,
               double amplitude) {
  const double dt = dt_ps * 1e-3;
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  if (kind == PulseKind::rectangular) {
    const double half = 0.5 * width_ns;
    const auto first = static_cast<std::ptrdiff_t>(std::ceil((center_ns - half) / dt - 1e-6));
    const auto last = static_cast<std::ptrdiff_t>(std::floor((center_ns + half) / dt + 1e-6));
    for (auto k = std::max<std::ptrdiff_t>(first, 0); k <= std::min(last, n - 1); ++k) {
      values[static_cast<std::size_t>(k)] += amplitude;
    }
    return;
  }
  // Gaussian with FWHM = width, truncated at 3 FWHM.
  const double a = 4.0 * std::log(2.0) / (width_ns * width_ns);
  const auto first = static_cast<std::ptrdiff_t>(std::floor((center_ns - 3.0 * width_ns) / dt));
  const auto last = static_cast<std::ptrdiff_t>(std::ceil((center_ns + 3.0 * width_ns) / dt));
  for (auto k = std::max<std::ptrdiff_t>(first, 0); k <= std::min(last, n - 1); ++k) {
    const double u = static_cast<double>(k) * dt - center_ns;
    values[static_cast<std::size_t>(k)] += amplitude * std::exp(-a * u * u);
  }
}

}  // namespace fpsa
