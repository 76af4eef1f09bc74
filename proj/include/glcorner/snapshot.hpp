#pragma once

#include <filesystem>

#include "glcorner/gl2d.hpp"
#include "glcorner/mesh.hpp"
#include "glcorner/records.hpp"

namespace glcorner {

// File layout: "GLSNAP1\n", uint64 header length, JSON header, then
// little-endian payload: nodes (2 x f64), triangles (3 x i32), psi (2 x f64).
struct Snapshot {
  Json header = Json::object();  // mesh counts plus caller metadata under "meta"
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> tris;
  ComplexField2D psi;
};

void write_snapshot(const std::filesystem::path& file, const Mesh2D& mesh, const ComplexField2D& psi,
                    const Json& meta = Json::object());
Snapshot read_snapshot(const std::filesystem::path& file);

}  // namespace glcorner
