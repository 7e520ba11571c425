#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "fpsa/spikes.hpp"
#include "fpsa/waveform.hpp"

namespace fpsa {

/// Binary image, row-major, 1 = black.
struct PixelPattern {
  std::string label;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<int> pixels;

  [[nodiscard]] int at(std::size_t row, std::size_t col) const { return pixels[row * cols + col]; }
  bool operator==(const PixelPattern&) const = default;
};

void validate(const PixelPattern& p);

/// One train per column (PRE). Black pixel at 1-based column x, row y fires at x + y + offset ns.
std::vector<SpikeTrain> encode_pattern(const PixelPattern& p, double offset_ns = 5.0);

/// Per-pulse stimulus-chain noise: amplitude scaled by (1 + amp_sigma * xi),
/// centre shifted by time_sigma_ns * xi', xi, xi' ~ N(0,1).
struct PulseJitter {
  double amp_sigma = 0.0;
  double time_sigma_ns = 0.0;
};

/// Sum over trains j and spikes of weights_row[j] * amplitude_unit * pulse, before clamping.
/// With `jitter` set, every pulse draws its own perturbation from `rng` in train/spike order.
std::vector<double> synthesize_unclamped(const std::vector<SpikeTrain>& trains, const std::vector<double>& weights_row,
                                         const PulseShape& shape, double dt_ps, double duration_ns,
                                         const PulseJitter* jitter = nullptr, std::mt19937_64* rng = nullptr);

/// synthesize_unclamped clamped at 0.
StimulusWaveform synthesize_stimulus(const std::vector<SpikeTrain>& trains, const std::vector<double>& weights_row,
                                     const PulseShape& shape, double dt_ps, double duration_ns,
                                     const PulseJitter* jitter = nullptr, std::mt19937_64* rng = nullptr);

/// Logical POST i owns [i * slot, i * slot + window_len), slot = window_len + guard.
struct WindowSpec {
  std::size_t n_windows = 1;
  double window_len_ns = 15.0;
  double guard_ns = 1.0;

  [[nodiscard]] double slot_ns() const noexcept { return window_len_ns + guard_ns; }
  [[nodiscard]] double total_ns() const noexcept { return static_cast<double>(n_windows) * slot_ns(); }
  bool operator==(const WindowSpec&) const = default;
};

void validate(const WindowSpec& w);

/// Throws PreconditionError when the window cannot hold the latest spike the
/// default encoding produces for a rows x cols pattern.
void require_window_fits(const WindowSpec& w, std::size_t rows, std::size_t cols, double offset_ns = 5.0);

/// Concatenates the per-POST waveforms into consecutive slots.
StimulusWaveform time_multiplex(const std::vector<StimulusWaveform>& per_post, const WindowSpec& w);

struct WindowResponse {
  bool fired = false;
  std::vector<double> times;  // window-relative, ns
  bool operator==(const WindowResponse&) const = default;
};

/// Bins spikes by slot; a spike in the guard after window i belongs to window i.
std::vector<WindowResponse> demultiplex_response(const SpikeTrain& spikes, const WindowSpec& w);

nlohmann::json to_json(const PixelPattern& p);
PixelPattern pattern_from_json(const nlohmann::json& j);
PixelPattern load_pattern(const std::string& path);

/// {"0": [...], "1": [...]} keyed by 0-based PRE index.
nlohmann::json spike_trains_to_json(const std::vector<SpikeTrain>& trains);

/// CSV `t_ns,power`.
void write_waveform_csv(std::ostream& os, const StimulusWaveform& w);
/// Reads `t_ns,power` rows with uniform spacing; dt is taken from the first two rows.
StimulusWaveform read_waveform_csv(std::istream& is);
StimulusWaveform load_waveform_csv(const std::string& path);

}  // namespace fpsa
