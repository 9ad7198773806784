#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace cfrsense::io {

using json = nlohmann::ordered_json;

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr const char* kToolName = "cfrsense";
inline constexpr const char* kToolVersion = "1.0.0";

// A manifest records what a run produced: the configuration that drove it,
// every seed, and a content hash per emitted file. Hashes make reruns
// checkable byte for byte; the manifest itself carries the only timestamp.
json manifest_create(const std::string& kind);

// Hashes base_dir/rel_path and appends {path, sha256, bytes} to m["files"].
void manifest_add_file(json& m, const std::string& base_dir, const std::string& rel_path);

void write_manifest(const json& m, const std::string& path);

// Parses and validates schema version and required keys.
json read_manifest(const std::string& path);

struct FileCheck {
  std::string path;
  bool ok = false;
};

// Recomputes each listed file's hash against base_dir.
std::vector<FileCheck> manifest_verify_files(const json& m, const std::string& base_dir);

}  // namespace cfrsense::io
