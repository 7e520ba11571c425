#include "manifest.hpp"

#include <fstream>
#include <sstream>

#include "CLI11.hpp"

#include "fpsa/errors.hpp"
#include "fpsa/io.hpp"

namespace fpsa::cli {

nlohmann::json module_versions() {
  return {{"fpsa_snn", kToolVersion},
          {"compiler", __VERSION__},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                                "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"cli11", CLI11_VERSION},
          {"openmp", _OPENMP}};
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json arts = nlohmann::json::array();
  for (const auto& a : m.artifacts) arts.push_back({{"path", a.path}, {"fnv1a64", a.fnv1a64}});
  return {{"argv", m.argv},
          {"cwd", m.cwd},
          {"command", m.command},
          {"config_hash", m.config_hash},
          {"seed", m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr)},
          {"artifacts", arts},
          {"wall_time_s", m.wall_time_s},
          {"exit_code", m.exit_code},
          {"versions", module_versions()}};
}

void check_manifest_schema(const nlohmann::json& j) {
  auto need = [&](const char* key, bool ok) {
    if (!j.contains(key) || !ok) throw ContractError(std::string("manifest record: bad or missing '") + key + "'");
  };
  if (!j.is_object()) throw ContractError("manifest record is not an object");
  need("argv", j.contains("argv") && j["argv"].is_array());
  for (const auto& a : j["argv"]) {
    if (!a.is_string()) throw ContractError("manifest record: argv entries must be strings");
  }
  need("cwd", j.contains("cwd") && j["cwd"].is_string());
  need("command", j.contains("command") && j["command"].is_string());
  need("config_hash", j.contains("config_hash") && j["config_hash"].is_string() && j["config_hash"].get<std::string>().size() == 16);
  need("seed", j.contains("seed") && (j["seed"].is_null() || j["seed"].is_number_unsigned()));
  need("artifacts", j.contains("artifacts") && j["artifacts"].is_array());
  for (const auto& a : j["artifacts"]) {
    if (!a.is_object() || !a.contains("path") || !a["path"].is_string() || !a.contains("fnv1a64") ||
        !a["fnv1a64"].is_string() || a.size() != 2) {
      throw ContractError("manifest record: malformed artifact");
    }
  }
  need("wall_time_s", j.contains("wall_time_s") && j["wall_time_s"].is_number() && j["wall_time_s"].get<double>() >= 0.0);
  need("exit_code", j.contains("exit_code") && j["exit_code"].is_number_integer());
  need("versions", j.contains("versions") && j["versions"].is_object());
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    check_manifest_schema(j);
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  RunManifest m;
  m.argv = j["argv"].get<std::vector<std::string>>();
  m.cwd = j["cwd"].get<std::string>();
  m.command = j["command"].get<std::string>();
  m.config_hash = j["config_hash"].get<std::string>();
  if (!j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
  for (const auto& a : j["artifacts"]) m.artifacts.push_back({a["path"].get<std::string>(), a["fnv1a64"].get<std::string>()});
  m.wall_time_s = j["wall_time_s"].get<double>();
  m.exit_code = j["exit_code"].get<int>();
  return m;
}

Artifact hash_artifact(const std::string& path) { return {path, hex64(fnv1a64(read_file(path)))}; }

void append_manifest(const std::string& path, const RunManifest& m) {
  const auto j = to_json(m);
  check_manifest_schema(j);
  const std::string line = j.dump() + "\n";
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw ConfigError("cannot open manifest '" + path + "' for appending");
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out) throw ConfigError("failed to append to manifest '" + path + "'");
}

std::vector<RunManifest> read_manifest(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<RunManifest> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    out.push_back(manifest_from_json(j));
  }
  return out;
}

}  // namespace fpsa::cli
