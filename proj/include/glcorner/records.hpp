#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

namespace glcorner {

using Json = nlohmann::json;

std::string code_version();
std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& file);
std::string utc_timestamp();

// One command invocation: everything needed to reproduce its outputs.
struct RunRecord {
  std::string command;
  Json params = Json::object();
  std::string version;
  std::string started, finished;
  Json result = Json::object();
  std::map<std::string, std::string> input_hashes;  // path -> sha256

  Json to_json() const;
  static RunRecord from_json(const Json& j);
};

// Cache key over (command, parameters, resolution, code version). `resolution`
// holds the discretization parameters, kept apart so lookups can name them.
std::string cache_key(const std::string& command, const Json& params, const Json& resolution,
                      const std::string& version = code_version());

// Append-only store of RunRecords, one JSON file per key.
class RecordCache {
 public:
  explicit RecordCache(std::filesystem::path dir);
  const std::filesystem::path& dir() const { return dir_; }
  std::optional<RunRecord> find(const std::string& key) const;
  // Writes through a temporary file and rename; an existing entry is kept.
  void store(const std::string& key, const RunRecord& rec) const;

 private:
  std::filesystem::path dir_;
};

void write_text(const std::filesystem::path& file, const std::string& text);
std::string read_text(const std::filesystem::path& file);

}  // namespace glcorner
