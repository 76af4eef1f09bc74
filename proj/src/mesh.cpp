#include "glcorner/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>

#include <fmt/format.h>

namespace glcorner {

namespace {

double tri_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

double cot_at(Vec2 apex, Vec2 p, Vec2 q) {
  Vec2 u = p - apex, v = q - apex;
  return dot(u, v) / std::abs(cross(u, v));
}

}  // namespace

double Mesh2D::area() const {
  double a = 0.0;
  for (const auto& t : tris) a += std::abs(tri_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]));
  return a;
}

void Mesh2D::finalize() {
  const int n = num_nodes();
  if (tag.size() != nodes.size()) tag.assign(n, NodeTag::Interior);
  struct HalfEdge {
    int i, j;
    double cot;
  };
  std::vector<HalfEdge> he;
  he.reserve(3 * tris.size());
  mass.assign(n, 0.0);
  for (auto& t : tris) {
    double a = tri_area(nodes[t[0]], nodes[t[1]], nodes[t[2]]);
    if (a < 0) {
      std::swap(t[1], t[2]);
      a = -a;
    }
    Vec2 P[3] = {nodes[t[0]], nodes[t[1]], nodes[t[2]]};
    double scale = std::max({(P[1] - P[0]).norm(), (P[2] - P[1]).norm(), (P[0] - P[2]).norm()});
    if (!(a > 1e-12 * scale * scale))
      throw GeometryError(fmt::format("degenerate triangle ({}, {}, {})", t[0], t[1], t[2]));
    double c[3];
    for (int k = 0; k < 3; ++k) c[k] = cot_at(P[k], P[(k + 1) % 3], P[(k + 2) % 3]);
    for (int k = 0; k < 3; ++k) {
      int i = t[(k + 1) % 3], j = t[(k + 2) % 3];
      he.push_back({std::min(i, j), std::max(i, j), c[k]});
    }
    // mixed Voronoi areas
    int obtuse = -1;
    for (int k = 0; k < 3; ++k)
      if (c[k] < 0) obtuse = k;
    for (int k = 0; k < 3; ++k) {
      double m;
      if (obtuse < 0) {
        Vec2 e1 = P[(k + 1) % 3] - P[k], e2 = P[(k + 2) % 3] - P[k];
        m = (dot(e1, e1) * c[(k + 2) % 3] + dot(e2, e2) * c[(k + 1) % 3]) / 8.0;
      } else {
        m = (k == obtuse) ? a / 2 : a / 4;
      }
      mass[t[k]] += m;
    }
  }
  std::sort(he.begin(), he.end(), [](const HalfEdge& x, const HalfEdge& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
  edges.clear();
  weight.clear();
  flux.clear();
  on_boundary.assign(n, 0);
  for (size_t k = 0; k < he.size();) {
    size_t m = k;
    double w = 0.0;
    while (m < he.size() && he[m].i == he[k].i && he[m].j == he[k].j) w += 0.5 * he[m++].cot;
    if (m - k > 2) throw GeometryError("non-manifold edge in mesh");
    if (m - k == 1) on_boundary[he[k].i] = on_boundary[he[k].j] = 1;
    edges.push_back({he[k].i, he[k].j});
    weight.push_back(w);
    flux.push_back(0.5 * cross(nodes[he[k].i], nodes[he[k].j]));
    k = m;
  }
  for (int i = 0; i < n; ++i) {
    if (!(mass[i] > 0)) throw GeometryError(fmt::format("node {} has no incident triangles", i));
    if (on_boundary[i] && tag[i] == NodeTag::Interior) tag[i] = NodeTag::Boundary;
  }
}

void zip_chains(const std::vector<Vec2>& pts, const std::vector<int>& a0, const std::vector<int>& b0, bool closed,
                std::vector<std::array<int, 3>>& out) {
  std::vector<int> a = a0, b = b0;
  if (closed) {
    a.push_back(a0.front());
    b.push_back(b0.front());
  }
  const size_t na = a.size(), nb = b.size();
  size_t i = 0, j = 0;
  while (i + 1 < na || j + 1 < nb) {
    bool advance_a;
    if (i + 1 >= na) {
      advance_a = false;
    } else if (j + 1 >= nb) {
      advance_a = true;
    } else {
      Vec2 d1 = pts[a[i + 1]] - pts[b[j]], d2 = pts[a[i]] - pts[b[j + 1]];
      double l1 = dot(d1, d1), l2 = dot(d2, d2);
      advance_a = l1 <= l2 * (1.0 + 1e-9);
    }
    if (advance_a) {
      out.push_back({a[i], b[j], a[i + 1]});
      ++i;
    } else {
      out.push_back({a[i], b[j], b[j + 1]});
      ++j;
    }
  }
}

Mesh2D build_layer_mesh(const CurvilinearPolygon& poly, double eps, const LayerMeshOptions& opt) {
  if (!(eps > 0) || !(opt.h_s > 0) || !(opt.h_t > 0) || !(opt.depth > 0))
    throw UsageError("layer mesh needs positive eps, spacings and depth");
  Mesh2D m;
  const int nt = std::max(1, static_cast<int>(std::lround(opt.depth / opt.h_t)));
  const double dt = eps * opt.depth / nt;
  const double dmax = dt * nt;
  std::vector<std::vector<int>> rows;

  if (poly.smooth()) {
    const double P = poly.perimeter();
    const int ns = std::max(8, static_cast<int>(std::ceil(P / (eps * opt.h_s))));
    double kmax = 0.0;
    for (int k = 0; k < ns; ++k) kmax = std::max(kmax, poly.curvature(P * k / ns));
    if (kmax * dmax >= 0.9)
      throw UsageError(fmt::format("layer depth {} eps reaches the focal distance; reduce depth", opt.depth));
    for (int j = 0; j <= nt; ++j) {
      std::vector<int> row;
      double d = j * dt;
      for (int k = 0; k < ns; ++k) {
        double s = P * k / ns;
        row.push_back(m.num_nodes());
        m.nodes.push_back(poly.point(s) + poly.inward_normal(s) * d);
        m.bs.push_back(s);
        m.bt.push_back(d);
      }
      rows.push_back(std::move(row));
    }
  } else if (poly.polygonal()) {
    const int nv = static_cast<int>(poly.arcs().size());
    for (const auto& c : poly.corners())
      if (c.beta >= std::numbers::pi) throw UsageError("layer meshes support convex polygons only");
    std::vector<Vec2> V(nv), nu(nv);
    for (int k = 0; k < nv; ++k) {
      V[k] = poly.arcs()[k]->point(0.0);
      nu[k] = perp(poly.arcs()[k]->tangent(0.0));
    }
    for (int j = 0; j <= nt; ++j) {
      double d = j * dt;
      std::vector<Vec2> W(nv);
      for (int k = 0; k < nv; ++k) {
        Vec2 a = nu[(k + nv - 1) % nv], b = nu[k];
        W[k] = V[k] + (a + b) * (d / (1.0 + dot(a, b)));
      }
      std::vector<int> row;
      for (int k = 0; k < nv; ++k) {
        Vec2 p = W[k], q = W[(k + 1) % nv];
        double len = dot(q - p, poly.arcs()[k]->tangent(0.0));
        if (len < 0.5 * eps * opt.h_s) throw UsageError("layer depth exceeds the polygon inradius");
        int ms = std::max(1, static_cast<int>(std::ceil(len / (eps * opt.h_s))));
        for (int i = 0; i < ms; ++i) {
          Vec2 x = p + (q - p) * (static_cast<double>(i) / ms);
          row.push_back(m.num_nodes());
          m.nodes.push_back(x);
          TubularPoint tp = inverse_tubular(poly, x, 1.0, TieBreak::SmallestS);
          m.bs.push_back(tp.s);
          m.bt.push_back(tp.t);
        }
      }
      rows.push_back(std::move(row));
    }
  } else {
    throw UsageError("layer meshes need a smooth boundary or a convex polygon");
  }

  for (size_t j = 0; j + 1 < rows.size(); ++j) zip_chains(m.nodes, rows[j], rows[j + 1], true, m.tris);
  for (size_t j = 0; j < rows.size(); ++j) m.rows.push_back({rows[j], true, j * dt});
  for (const auto& c : poly.corners()) m.corner_points.push_back(c.vertex);
  m.tag.assign(m.nodes.size(), NodeTag::Interior);
  if (opt.inner_dirichlet)
    for (int i : rows.back()) m.tag[i] = NodeTag::Dirichlet;
  m.finalize();
  return m;
}

Mesh2D build_sector_mesh(double beta, double R, double h) {
  if (!(beta > 0 && beta < 2 * std::numbers::pi)) throw UsageError("sector opening must lie in (0, 2 pi)");
  if (!(R > 0) || !(h > 0) || h > R / 4) throw UsageError("sector mesh needs 0 < h <= R/4");
  std::vector<double> radii{0.0};
  while (true) {
    double r = radii.back();
    double step = h * std::clamp(0.3 + 0.25 * r, 0.3, 1.0);
    if (r + 1.5 * step >= R) {
      radii.push_back(R);
      break;
    }
    radii.push_back(r + step);
  }
  Mesh2D m;
  const int min_n = static_cast<int>(std::ceil(4.0 * beta / std::numbers::pi));
  std::vector<std::vector<int>> rings;
  for (size_t i = 0; i < radii.size(); ++i) {
    std::vector<int> ring;
    if (i == 0) {
      ring.push_back(0);
      m.nodes.push_back({0.0, 0.0});
      m.tag.push_back(NodeTag::Interior);
    } else {
      double r = radii[i];
      int n = std::max(min_n, static_cast<int>(std::ceil(r * beta / h)));
      for (int k = 0; k <= n; ++k) {
        double th = beta * k / n;
        ring.push_back(m.num_nodes());
        m.nodes.push_back({r * std::cos(th), r * std::sin(th)});
        m.tag.push_back(i + 1 == radii.size() ? NodeTag::Dirichlet : NodeTag::Interior);
      }
    }
    rings.push_back(std::move(ring));
  }
  for (size_t i = 0; i + 1 < rings.size(); ++i) zip_chains(m.nodes, rings[i], rings[i + 1], false, m.tris);
  for (size_t i = 0; i < rings.size(); ++i) m.rows.push_back({rings[i], false, radii[i]});
  m.corner_points.push_back({0.0, 0.0});
  m.finalize();
  return m;
}

}  // namespace glcorner
