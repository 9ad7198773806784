#include "cfrsense/io/manifest.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>

#include "cfrsense/error.hpp"
#include "cfrsense/io/sha256.hpp"

namespace cfrsense::io {

namespace {

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

json manifest_create(const std::string& kind) {
  json m;
  m["schema_version"] = kManifestSchemaVersion;
  m["tool"] = kToolName;
  m["tool_version"] = kToolVersion;
  m["created_utc"] = utc_now();
  m["kind"] = kind;
  m["files"] = json::array();
  return m;
}

void manifest_add_file(json& m, const std::string& base_dir, const std::string& rel_path) {
  const std::filesystem::path full = std::filesystem::path(base_dir) / rel_path;
  json entry;
  entry["path"] = rel_path;
  entry["sha256"] = sha256_file_hex(full.string());
  entry["bytes"] = static_cast<std::uint64_t>(std::filesystem::file_size(full));
  m["files"].push_back(std::move(entry));
}

void write_manifest(const json& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open '" + path + "' for writing");
  out << m.dump(2) << '\n';
  if (!out) throw data_error("failed writing '" + path + "'");
}

json read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open '" + path + "'");
  json m;
  try {
    m = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("manifest: ") + e.what(), 0);
  }
  for (const char* key : {"schema_version", "tool", "created_utc", "kind", "files"})
    if (!m.contains(key))
      throw config_error("manifest: missing required key '" + std::string(key) + "'");
  if (!m["schema_version"].is_number_integer() ||
      m["schema_version"].get<int>() != kManifestSchemaVersion)
    throw config_error("manifest: unsupported schema_version " + m["schema_version"].dump() +
                       ", expected " + std::to_string(kManifestSchemaVersion));
  if (!m["files"].is_array()) throw config_error("manifest: 'files' must be an array");
  for (const json& f : m["files"])
    for (const char* key : {"path", "sha256"})
      if (!f.contains(key))
        throw config_error("manifest: file entry missing required key '" + std::string(key) +
                           "'");
  return m;
}

std::vector<FileCheck> manifest_verify_files(const json& m, const std::string& base_dir) {
  std::vector<FileCheck> out;
  for (const json& f : m.at("files")) {
    FileCheck check;
    check.path = f.at("path").get<std::string>();
    const std::filesystem::path full = std::filesystem::path(base_dir) / check.path;
    try {
      check.ok = sha256_file_hex(full.string()) == f.at("sha256").get<std::string>();
    } catch (const data_error&) {
      check.ok = false;
    }
    out.push_back(std::move(check));
  }
  return out;
}

}  // namespace cfrsense::io
