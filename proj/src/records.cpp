#include "glcorner/records.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "glcorner/errors.hpp"

namespace glcorner {

namespace fs = std::filesystem;

std::string code_version() { return GLCORNER_VERSION; }

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) throw Error("sha256 failed");
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
  return out;
}

std::string sha256_file(const fs::path& file) { return sha256_hex(read_text(file)); }

std::string utc_timestamp() {
  auto now = std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}Z", now);
}

Json RunRecord::to_json() const {
  return Json{{"command", command},   {"params", params},     {"version", version},
              {"started", started},   {"finished", finished}, {"result", result},
              {"input_hashes", input_hashes}};
}

RunRecord RunRecord::from_json(const Json& j) {
  RunRecord r;
  r.command = j.at("command").get<std::string>();
  r.params = j.at("params");
  r.version = j.at("version").get<std::string>();
  r.started = j.at("started").get<std::string>();
  r.finished = j.at("finished").get<std::string>();
  r.result = j.at("result");
  r.input_hashes = j.value("input_hashes", std::map<std::string, std::string>{});
  return r;
}

std::string cache_key(const std::string& command, const Json& params, const Json& resolution,
                      const std::string& version) {
  // nlohmann::json keeps object keys sorted, so dump() is canonical
  Json k{{"command", command}, {"params", params}, {"resolution", resolution}, {"version", version}};
  return sha256_hex(k.dump()).substr(0, 32);
}

RecordCache::RecordCache(fs::path dir) : dir_(std::move(dir)) {}

std::optional<RunRecord> RecordCache::find(const std::string& key) const {
  fs::path f = dir_ / (key + ".json");
  if (!fs::exists(f)) return std::nullopt;
  try {
    return RunRecord::from_json(Json::parse(read_text(f)));
  } catch (const Json::exception&) {
    return std::nullopt;
  }
}

void RecordCache::store(const std::string& key, const RunRecord& rec) const {
  fs::create_directories(dir_);
  fs::path f = dir_ / (key + ".json");
  if (fs::exists(f)) return;
  fs::path tmp = dir_ / (key + ".json.tmp");
  write_text(tmp, rec.to_json().dump(2) + "\n");
  fs::rename(tmp, f);
}

void write_text(const fs::path& file, const std::string& text) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw UsageError("cannot write " + file.string());
  out << text;
  if (!out) throw UsageError("failed writing " + file.string());
}

std::string read_text(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw UsageError("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace glcorner
