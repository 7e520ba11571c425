#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace fpsa {

/// Uniformly sampled injected optical power, in mW. Sample k covers
/// [k dt, (k+1) dt) under zero-order hold; beyond the last sample the power is 0.
struct StimulusWaveform {
  double dt_ps = 1.0;
  std::vector<double> values;

  [[nodiscard]] double duration_ns() const noexcept { return static_cast<double>(values.size()) * dt_ps * 1e-3; }

  /// Sample index whose hold interval contains t. Robust to t being an exact
  /// multiple of dt computed in floating point.
  [[nodiscard]] std::ptrdiff_t index_at(double t_ns) const noexcept {
    return static_cast<std::ptrdiff_t>(std::floor(t_ns * 1e3 / dt_ps + 1e-9));
  }

  [[nodiscard]] double at(double t_ns) const noexcept {
    const auto k = index_at(t_ns);
    if (k < 0 || static_cast<std::size_t>(k) >= values.size()) return 0.0;
    return values[static_cast<std::size_t>(k)];
  }

  bool operator==(const StimulusWaveform&) const = default;
};

enum class PulseKind { rectangular, gaussian };

/// Shape of one stimulus pulse. For gaussian pulses width is the FWHM.
/// amplitude_unit converts one unit of synaptic weight into mW.
struct PulseShape {
  PulseKind kind = PulseKind::rectangular;
  double width_ns = 0.2;
  double amplitude_unit = 1.0;
};

/// Throws ConfigError unless 0 < width < 0.5 ns and amplitude_unit > 0.
void validate(const PulseShape& shape);

/// An all-zero waveform covering [0, duration).
StimulusWaveform zero_waveform(double dt_ps, double duration_ns);

/// Adds `amplitude` * shape(t - center) onto the samples (no clamping).
/// Rectangular pulses occupy the closed interval [center - w/2, center + w/2].
void add_pulse(std::vector<double>& values, double dt_ps, PulseKind kind, double width_ns, double center_ns,
               double amplitude);

}  // namespace fpsa
