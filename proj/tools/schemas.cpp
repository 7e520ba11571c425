#include "schemas.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "fpsa/errors.hpp"
#include "fpsa/learning.hpp"

namespace fpsa::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

void require(bool ok, const std::string& what) {
  if (!ok) throw ContractError(what);
}

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where) {
  require(j.is_object(), where + " is not an object");
  for (const char* k : keys) require(j.contains(k), where + ": missing '" + k + "'");
}

}  // namespace

void check_csv(std::string_view text, const std::vector<std::string>& header, const std::vector<std::string>& text_columns,
               const std::vector<std::string>& optional_columns) {
  std::istringstream in{std::string(text)};
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), "csv: empty output");
  require(split(line) == header, "csv: unexpected header '" + line + "'");
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const auto fields = split(line);
    require(fields.size() == header.size(), "csv row " + std::to_string(row) + ": wrong field count");
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (contains(text_columns, header[c])) continue;
      if (fields[c].empty() && contains(optional_columns, header[c])) continue;
      double v = 0.0;
      const auto* b = fields[c].data();
      const auto [end, ec] = std::from_chars(b, b + fields[c].size(), v);
      require(ec == std::errc() && end == b + fields[c].size() && std::isfinite(v),
              "csv row " + std::to_string(row) + ": '" + header[c] + "' is not a finite number");
    }
  }
  require(text.empty() || text.back() == '\n', "csv: missing final newline");
}

void check_weights_json(const nlohmann::json& j) {
  try {
    (void)weights_from_json(j);
  } catch (const ConfigError& e) {
    throw ContractError(std::string("weights: ") + e.what());
  }
}

void check_evaluation_json(const nlohmann::json& j) {
  require_keys(j, {"task", "cascade", "total", "correct", "unclassified", "accuracy", "confusion", "results"}, "evaluation");
  require(j["results"].is_array() && j["results"].size() == j["total"].get<std::size_t>(), "evaluation: results/total mismatch");
  for (const auto& r : j["results"]) {
    require_keys(r, {"label", "fired", "winning_window", "spike_times_ns", "unclassified"}, "evaluation result");
    require(r["winning_window"].is_null() || r["winning_window"].is_number_unsigned(), "evaluation result: winning_window");
  }
}

void check_repro_json(const nlohmann::json& j) {
  require_keys(j, {"trials", "seed", "amp_jitter", "time_jitter_ns", "min_consistency", "patterns"}, "repro summary");
  const auto trials = j["trials"].get<std::size_t>();
  for (const auto& p : j["patterns"]) {
    require_keys(p, {"label", "nominal_window", "consistency", "verdicts"}, "repro pattern");
    require(p["verdicts"].is_array() && p["verdicts"].size() == trials, "repro pattern: verdict count != trials");
    const double c = p["consistency"].get<double>();
    require(c >= 0.0 && c <= 1.0, "repro pattern: consistency outside [0, 1]");
  }
}

void check_demo_json(const nlohmann::json& j) {
  require_keys(j, {"experiment", "verdict"}, "demo verdict");
  const auto v = j["verdict"].get<std::string>();
  require(v == "pass" || v == "fail", "demo verdict must be pass or fail");
}

void check_calibration_json(const nlohmann::json& j) {
  require_keys(j, {"neuron1", "neuron2", "cascade_threshold_coupling", "default_output_gain"}, "calibration");
  for (const char* n : {"neuron1", "neuron2"}) {
    require_keys(j[n], {"params", "calibration"}, n);
    require_keys(j[n]["calibration"], {"onset_current", "bias_fraction", "threshold_mw", "spike_peak"}, n);
  }
}

void check_training_log(std::string_view jsonl) {
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int expected = 1;
  while (std::getline(in, line)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ContractError(std::string("training log: ") + e.what());
    }
    require_keys(j, {"epoch", "all_correct", "converged_epoch", "entries"}, "training log line");
    require(j["epoch"].get<int>() == expected++, "training log: epochs out of order");
  }
}

}  // namespace fpsa::cli
