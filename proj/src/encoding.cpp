#include "fpsa/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fpsa/errors.hpp"
#include "fpsa/io.hpp"

namespace fpsa {

void validate(const PixelPattern& p) {
  if (p.rows == 0 || p.cols == 0) throw ConfigError("pattern '" + p.label + "': rows and cols must be positive");
  if (p.pixels.size() != p.rows * p.cols) {
    throw ConfigError("pattern '" + p.label + "': pixel count does not equal rows * cols");
  }
  for (int v : p.pixels) {
    if (v != 0 && v != 1) throw ConfigError("pattern '" + p.label + "': pixels must be 0 or 1");
  }
}

std::vector<SpikeTrain> encode_pattern(const PixelPattern& p, double offset_ns) {
  validate(p);
  std::vector<SpikeTrain> trains(p.cols);
  for (std::size_t x = 0; x < p.cols; ++x) {
    std::vector<double> t;
    for (std::size_t y = 0; y < p.rows; ++y) {
      if (p.at(y, x)) t.push_back(static_cast<double>(x + 1) + static_cast<double>(y + 1) + offset_ns);
    }
    trains[x] = SpikeTrain(std::move(t));
  }
  return trains;
}

std::vector<double> synthesize_unclamped(const std::vector<SpikeTrain>& trains, const std::vector<double>& weights_row,
                                         const PulseShape& shape, double dt_ps, double duration_ns,
                                         const PulseJitter* jitter, std::mt19937_64* rng) {
  if (trains.size() != weights_row.size()) throw ContractError("one weight per spike train required");
  validate(shape);
  if (jitter && !rng) throw ContractError("jittered synthesis needs a random engine");
  auto values = zero_waveform(dt_ps, duration_ns).values;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t j = 0; j < trains.size(); ++j) {
    const double amp = weights_row[j] * shape.amplitude_unit;
    for (double t : trains[j].times) {
      double a = amp, c = t;
      if (jitter) {
        a *= 1.0 + jitter->amp_sigma * gauss(*rng);
        c += jitter->time_sigma_ns * gauss(*rng);
      }
      if (amp != 0.0) add_pulse(values, dt_ps, shape.kind, shape.width_ns, c, a);
    }
  }
  return values;
}

StimulusWaveform synthesize_stimulus(const std::vector<SpikeTrain>& trains, const std::vector<double>& weights_row,
                                     const PulseShape& shape, double dt_ps, double duration_ns,
                                     const PulseJitter* jitter, std::mt19937_64* rng) {
  auto values = synthesize_unclamped(trains, weights_row, shape, dt_ps, duration_ns, jitter, rng);
  for (double& v : values) v = std::max(v, 0.0);
  return {dt_ps, std::move(values)};
}

void validate(const WindowSpec& w) {
  if (w.n_windows < 1) throw ConfigError("window spec needs at least one window");
  if (!(w.window_len_ns > 0.0)) throw ConfigError("window_len must be > 0");
  if (!(w.guard_ns >= 0.0)) throw ConfigError("guard must be >= 0");
}

void require_window_fits(const WindowSpec& w, std::size_t rows, std::size_t cols, double offset_ns) {
  const double last = static_cast<double>(rows + cols) + offset_ns;
  if (!(w.window_len_ns > last)) {
    throw PreconditionError("window_len " + format_number(w.window_len_ns) + " ns must exceed the last encoded spike at " +
                            format_number(last) + " ns");
  }
}

StimulusWaveform time_multiplex(const std::vector<StimulusWaveform>& per_post, const WindowSpec& w) {
  validate(w);
  if (per_post.size() != w.n_windows) throw PreconditionError("one waveform per window required");
  const double dt_ps = per_post.front().dt_ps;
  const auto slot = static_cast<std::size_t>(std::llround(w.slot_ns() * 1e3 / dt_ps));
  const auto window = static_cast<std::size_t>(std::llround(w.window_len_ns * 1e3 / dt_ps));
  StimulusWaveform out{dt_ps, std::vector<double>(slot * w.n_windows, 0.0)};
  for (std::size_t i = 0; i < per_post.size(); ++i) {
    const auto& in = per_post[i];
    if (in.dt_ps != dt_ps) throw PreconditionError("multiplexed waveforms must share dt");
    // Trailing silence beyond the window is allowed; power is not.
    for (std::size_t k = window; k < in.values.size(); ++k) {
      if (in.values[k] != 0.0) {
        throw PreconditionError("waveform " + std::to_string(i) + " extends beyond window_len " +
                                format_number(w.window_len_ns) + " ns");
      }
    }
    const auto n = std::min(in.values.size(), window);
    std::copy_n(in.values.begin(), n, out.values.begin() + static_cast<std::ptrdiff_t>(i * slot));
  }
  return out;
}

std::vector<WindowResponse> demultiplex_response(const SpikeTrain& spikes, const WindowSpec& w) {
  validate(w);
  std::vector<WindowResponse> out(w.n_windows);
  const double slot = w.slot_ns();
  for (double t : spikes.times) {
    const auto i = static_cast<std::size_t>(std::floor(t / slot));
    if (i >= w.n_windows) continue;
    out[i].fired = true;
    out[i].times.push_back(t - static_cast<double>(i) * slot);
  }
  return out;
}

nlohmann::json to_json(const PixelPattern& p) {
  return {{"label", p.label}, {"rows", p.rows}, {"cols", p.cols}, {"pixels", p.pixels}};
}

PixelPattern pattern_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("pattern must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "label" && key != "rows" && key != "cols" && key != "pixels") {
      throw ConfigError("pattern: unknown key '" + key + "'");
    }
  }
  PixelPattern p;
  try {
    p.label = j.at("label").get<std::string>();
    p.rows = j.at("rows").get<std::size_t>();
    p.cols = j.at("cols").get<std::size_t>();
    p.pixels = j.at("pixels").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("pattern: ") + e.what());
  }
  validate(p);
  return p;
}

PixelPattern load_pattern(const std::string& path) { return pattern_from_json(read_json_file(path)); }

nlohmann::json spike_trains_to_json(const std::vector<SpikeTrain>& trains) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < trains.size(); ++i) j[std::to_string(i)] = trains[i].times;
  return j;
}

void write_waveform_csv(std::ostream& os, const StimulusWaveform& w) {
  os << "t_ns,power\n";
  for (std::size_t k = 0; k < w.values.size(); ++k) {
    os << format_number(static_cast<double>(k) * w.dt_ps * 1e-3) << ',' << format_number(w.values[k]) << '\n';
  }
}

StimulusWaveform read_waveform_csv(std::istream& is) {
  std::vector<double> t, v;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (lineno == 1 && line.rfind("t_ns", 0) == 0) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("waveform line " + std::to_string(lineno) + ": expected t_ns,power");
    try {
      std::size_t used = 0;
      t.push_back(std::stod(line.substr(0, comma), &used));
      v.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ConfigError("waveform line " + std::to_string(lineno) + ": not a number");
    }
    if (!(v.back() >= 0.0) || !std::isfinite(v.back())) {
      throw ConfigError("waveform line " + std::to_string(lineno) + ": power must be finite and >= 0");
    }
  }
  if (t.size() < 2) throw ConfigError("waveform needs at least two samples");
  const double dt_ns = t[1] - t[0];
  if (!(dt_ns > 0.0) || std::abs(t[0]) > 1e-9) throw ConfigError("waveform must start at t = 0 with increasing time");
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (std::abs(t[k] - static_cast<double>(k) * dt_ns) > 1e-6 * dt_ns * static_cast<double>(k) + 1e-12) {
      throw ConfigError("waveform sampling is not uniform at row " + std::to_string(k + 1));
    }
  }
  return {dt_ns * 1e3, std::move(v)};
}

StimulusWaveform load_waveform_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return read_waveform_csv(in);
}

}  // namespace fpsa
