#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace fpsa::cli {

inline constexpr const char* kToolVersion = "1.0.0";

struct Artifact {
  std::string path;
  std::string fnv1a64;  // hex digest of the file bytes
};

/// One line of the manifest file.
struct RunManifest {
  std::vector<std::string> argv;  // subcommand and flags, without the program name
  std::string cwd;
  std::string command;
  std::string config_hash;
  std::optional<std::uint64_t> seed;
  std::vector<Artifact> artifacts;
  double wall_time_s = 0.0;
  int exit_code = 0;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Throws ContractError when `j` is not a well-formed manifest record.
void check_manifest_schema(const nlohmann::json& j);

nlohmann::json module_versions();

Artifact hash_artifact(const std::string& path);

/// Appends one line. The file is never rewritten.
void append_manifest(const std::string& path, const RunManifest& m);

/// Every record in file order. Throws ConfigError on a malformed line.
std::vector<RunManifest> read_manifest(const std::string& path);

}  // namespace fpsa::cli
