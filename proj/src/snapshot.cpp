#include "glcorner/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "glcorner/errors.hpp"

namespace glcorner {

namespace {

constexpr char kMagic[] = "GLSNAP1\n";
constexpr size_t kMagicLen = 8;

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ofstream& out, const T* data, size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(sizeof(T) * count));
}

template <class T>
void get(std::ifstream& in, T* data, size_t count) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(sizeof(T) * count));
  if (!in) throw UsageError("truncated snapshot");
}

}  // namespace

void write_snapshot(const std::filesystem::path& file, const Mesh2D& mesh, const ComplexField2D& psi,
                    const Json& meta) {
  if (psi.size() != mesh.nodes.size()) throw UsageError("snapshot field does not match the mesh");
  Json h{{"format", "glcorner-snapshot"},
         {"version", code_version()},
         {"nodes", mesh.nodes.size()},
         {"triangles", mesh.tris.size()},
         {"fields", {"psi"}},
         {"meta", meta}};
  std::string text = h.dump();
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::binary);
  if (!out) throw UsageError("cannot write " + file.string());
  out.write(kMagic, kMagicLen);
  std::uint64_t len = text.size();
  put(out, &len, 1);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Vec2& p : mesh.nodes) put(out, &p.x, 1), put(out, &p.y, 1);
  for (const auto& t : mesh.tris) {
    std::int32_t v[3] = {t[0], t[1], t[2]};
    put(out, v, 3);
  }
  put(out, reinterpret_cast<const double*>(psi.data()), 2 * psi.size());
  if (!out) throw UsageError("failed writing " + file.string());
}

Snapshot read_snapshot(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw UsageError("cannot read " + file.string());
  char magic[kMagicLen];
  get(in, magic, kMagicLen);
  if (std::memcmp(magic, kMagic, kMagicLen) != 0) throw UsageError(file.string() + " is not a glcorner snapshot");
  std::uint64_t len = 0;
  get(in, &len, 1);
  std::string text(len, '\0');
  get(in, text.data(), len);
  Snapshot s;
  s.header = Json::parse(text);
  const size_t nn = s.header.at("nodes").get<size_t>(), nt = s.header.at("triangles").get<size_t>();
  s.nodes.resize(nn);
  for (auto& p : s.nodes) get(in, &p.x, 1), get(in, &p.y, 1);
  s.tris.resize(nt);
  for (auto& t : s.tris) {
    std::int32_t v[3];
    get(in, v, 3);
    t = {v[0], v[1], v[2]};
  }
  s.psi.resize(nn);
  get(in, reinterpret_cast<double*>(s.psi.data()), 2 * nn);
  return s;
}

}  // namespace glcorner
