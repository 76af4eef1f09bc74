#include "glcorner/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Dense>
#include <fmt/format.h>

#include "glcorner/errors.hpp"

namespace glcorner {

namespace {

constexpr double pi = std::numbers::pi;

// int_{s0}^{s1} f(s) ds along the boundary, split at arc junctions and arc
// breakpoints (0 <= s0 <= s1 <= perimeter).
template <class F>
double along(const CurvilinearPolygon& poly, double s0, double s1, F f) {
  double total = 0.0;
  const int na = static_cast<int>(poly.arcs().size());
  for (int i = 0; i < na; ++i) {
    const double start = poly.arc_start(i);
    std::vector<double> bp = poly.arcs()[i]->breakpoints();
    for (size_t j = 1; j < bp.size(); ++j) {
      double a = std::max(s0, start + bp[j - 1]), b = std::min(s1, start + bp[j]);
      if (b <= a) continue;
      // stay strictly inside arc i so locate() never picks a neighbour
      double mid = 0.5 * (a + b), half = 0.5 * (b - a) * (1 - 1e-13);
      total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, mid - half, mid + half, 8, 1e-13);
    }
  }
  return total;
}

double wrap(double s, double P) {
  s = std::fmod(s, P);
  return s < 0 ? s + P : s;
}

void need_boundary_coords(const Mesh2D& mesh) {
  if (mesh.bt.size() != mesh.nodes.size() || mesh.bs.size() != mesh.nodes.size())
    throw UsageError("mesh has no boundary coordinates");
}

}  // namespace

double predicted_degree(const CurvilinearPolygon& poly, double eps, double alpha0) {
  if (!(eps > 0)) throw UsageError("eps must be positive");
  return poly.area() / (2 * pi * eps * eps) + poly.perimeter() * alpha0 / (2 * pi * eps);
}

double boundary_flux(const CurvilinearPolygon& poly, double s) {
  s = std::clamp(s, 0.0, poly.perimeter());
  return along(poly, 0.0, s, [&](double u) { return 0.5 * cross(poly.point(u), poly.tangent(u)); });
}

Ansatz tubular_ansatz(const Mesh2D& mesh, const CurvilinearPolygon& poly, double eps, const Profile1D& f0,
                      double alpha0, int degree) {
  if (!(eps > 0)) throw UsageError("eps must be positive");
  need_boundary_coords(mesh);
  Ansatz out;
  out.degree = degree >= 0 ? degree : static_cast<int>(std::lround(predicted_degree(poly, eps, alpha0)));
  const double P = poly.perimeter();
  const double total = poly.area() / (eps * eps) + alpha0 * P / eps;
  // phi(s) follows -(flux(s)/eps^2 + alpha0 s/eps), rescaled to close up at -2 pi n
  const double scale = total != 0.0 ? 2 * pi * out.degree / total : 0.0;
  std::vector<std::pair<double, int>> order;
  for (int i = 0; i < mesh.num_nodes(); ++i) order.emplace_back(wrap(mesh.bs[i], P), i);
  std::sort(order.begin(), order.end());
  out.psi.assign(mesh.nodes.size(), Complex(0.0));
  double s_prev = 0.0, flux = 0.0;
  for (auto [s, i] : order) {
    if (s > s_prev) {
      flux += along(poly, s_prev, s, [&](double u) { return 0.5 * cross(poly.point(u), poly.tangent(u)); });
      s_prev = s;
    }
    double phi = -scale * (flux / (eps * eps) + alpha0 * s / eps);
    double t = mesh.bt[i];
    double normal_gauge = 0.5 * cross(poly.point(s), poly.inward_normal(s)) * t / (eps * eps);
    out.psi[i] = std::polar(f0(t / eps), phi - normal_gauge);
  }
  return out;
}

AgmonReport agmon_profile(const Mesh2D& mesh, const ComplexField2D& psi, double eps) {
  if (!(eps > 0)) throw UsageError("eps must be positive");
  need_boundary_coords(mesh);
  AgmonReport r;
  double mx = 0.0, total = 0.0;
  for (size_t i = 0; i < psi.size(); ++i) {
    mx = std::max(mx, std::abs(psi[i]));
    total += mesh.mass[i] * std::norm(psi[i]);
  }
  r.no_mass = mx <= 1e-3;
  for (int k = 1; k <= 10; ++k) {
    double d = k * eps, m = 0.0;
    for (size_t i = 0; i < psi.size(); ++i)
      if (mesh.bt[i] > d) m += mesh.mass[i] * std::norm(psi[i]);
    r.d.push_back(d);
    r.mass.push_back(total > 0 ? m / total : 0.0);
  }
  if (r.no_mass) return r;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t k = 0; k < r.d.size(); ++k) {
    if (!(r.mass[k] > 1e-300)) continue;
    double x = r.d[k] / eps, y = std::log(r.mass[k]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++n;
  }
  if (n >= 2) r.rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  return r;
}

double surface_profile_deviation(const Mesh2D& mesh, const ComplexField2D& psi, double eps, const Profile1D& f0,
                                 double c2) {
  if (!(eps > 0)) throw UsageError("eps must be positive");
  need_boundary_coords(mesh);
  const double excl = c2 * eps * std::abs(std::log(eps));
  double dev = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    if (mesh.bt[i] > 3 * eps) continue;
    bool near = false;
    for (const Vec2& c : mesh.corner_points) near = near || (mesh.nodes[i] - c).norm() < excl;
    if (near) continue;
    dev = std::max(dev, std::abs(std::abs(psi[i]) - f0(mesh.bt[i] / eps)));
  }
  return dev;
}

int winding_number(const Mesh2D& mesh, const ComplexField2D& psi, double offset) {
  const Row* best = nullptr;
  for (const Row& r : mesh.rows)
    if (r.closed && (!best || std::abs(r.offset - offset) < std::abs(best->offset - offset))) best = &r;
  if (!best) throw UsageError("mesh has no closed contour rows");
  double mx = 0.0, mn = INFINITY;
  for (int i : best->nodes) {
    mx = std::max(mx, std::abs(psi[i]));
    mn = std::min(mn, std::abs(psi[i]));
  }
  if (!(mx > 0) || mn < 1e-3 * mx) throw NumericalError("vanishing on contour", mn);
  double sum = 0.0;
  const size_t n = best->nodes.size();
  for (size_t k = 0; k < n; ++k) sum += std::arg(psi[best->nodes[(k + 1) % n]] / psi[best->nodes[k]]);
  return static_cast<int>(std::lround(sum / (2 * pi)));
}

Supercurrent supercurrent(const Mesh2D& mesh, const Connection& conn, const ComplexField2D& psi) {
  Supercurrent out;
  out.edge.resize(mesh.edges.size());
  std::vector<Eigen::Matrix2d> A(mesh.nodes.size(), Eigen::Matrix2d::Zero());
  std::vector<Eigen::Vector2d> rhs(mesh.nodes.size(), Eigen::Vector2d::Zero());
  for (size_t e = 0; e < mesh.edges.size(); ++e) {
    auto [i, j] = mesh.edges[e];
    Vec2 d = mesh.nodes[j] - mesh.nodes[i];
    double len = d.norm();
    double je = std::imag(std::conj(psi[i]) * conn.U[e] * psi[j]) / len;
    out.edge[e] = je;
    Eigen::Vector2d u(d.x / len, d.y / len);
    for (int v : {i, j}) {
      A[v] += u * u.transpose();
      rhs[v] += u * je;
    }
  }
  out.node.resize(mesh.nodes.size());
  for (size_t v = 0; v < mesh.nodes.size(); ++v) {
    Eigen::Vector2d x = A[v].ldlt().solve(rhs[v]);
    out.node[v] = {x[0], x[1]};
  }
  return out;
}

std::vector<DensityRow> density_vs_curvature(const Mesh2D& mesh, const ComplexField2D& psi, double eps, double b,
                                             const CurvilinearPolygon& poly, const SurfaceConstants& sc,
                                             const std::vector<std::array<double, 2>>& windows) {
  if (!(eps > 0) || !(b > 0)) throw UsageError("eps and b must be positive");
  need_boundary_coords(mesh);
  const double P = poly.perimeter();
  std::vector<DensityRow> out;
  for (auto [s0, s1] : windows) {
    if (!(s1 > s0) || s1 - s0 > P * (1 + 1e-12)) throw UsageError("density window must satisfy s0 < s1 <= s0 + perimeter");
    DensityRow r;
    r.s0 = s0;
    r.s1 = s1;
    r.length = s1 - s0;
    double a = wrap(s0, P), e = a + r.length;
    auto k = [&](double u) { return poly.curvature(u); };
    r.curvature = e <= P ? along(poly, a, e, k) : along(poly, a, P, k) + along(poly, 0.0, e - P, k);
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      double s = wrap(mesh.bs[i], P);
      bool in = e <= P ? (s >= a && s < e) : (s >= a || s < e - P);
      if (in) r.quartic += mesh.mass[i] * std::pow(std::norm(psi[i]), 2);
    }
    r.quartic /= 2 * b;
    r.leading = -eps * sc.E0 * r.length;
    r.correction = eps * eps * sc.ecorr * r.curvature;
    r.residual = r.quartic - r.leading - r.correction;
    out.push_back(r);
  }
  return out;
}

}  // namespace glcorner
