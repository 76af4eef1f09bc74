#include "glcorner/geometry.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <numbers>

namespace glcorner {

namespace {

constexpr double pi = std::numbers::pi;

template <class F>
double integrate(F f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, 1e-12);
}

// int_a^b f(sigma) d sigma over one arc, split at its breakpoints.
template <class F>
double integrate_arc(const Arc& arc, F f, double a, double b) {
  std::vector<double> bp = arc.breakpoints();
  double total = 0.0;
  for (size_t i = 1; i < bp.size(); ++i) total += integrate(f, std::max(a, bp[i - 1]), std::min(b, bp[i]));
  return total;
}

}  // namespace

// ---------------------------------------------------------------- Segment

Segment::Segment(Vec2 a, Vec2 b) : a_(a), b_(b) {
  len_ = (b - a).norm();
  if (!(len_ > 0)) throw GeometryError("degenerate segment");
  dir_ = (b - a) / len_;
}

double Segment::closest(Vec2 p) const { return std::clamp(dot(p - a_, dir_), 0.0, len_); }

// ------------------------------------------------------------ CircularArc

CircularArc::CircularArc(Vec2 center, double radius, double phi0, double sweep)
    : center_(center), radius_(radius), phi0_(phi0), sweep_(sweep) {
  if (!(radius > 0) || !(std::abs(sweep) > 0) || std::abs(sweep) > 2 * pi + 1e-12)
    throw GeometryError("invalid circular arc");
}

Vec2 CircularArc::point(double s) const {
  double a = angle(s);
  return center_ + Vec2{std::cos(a), std::sin(a)} * radius_;
}

Vec2 CircularArc::tangent(double s) const {
  double a = angle(s);
  Vec2 t{-std::sin(a), std::cos(a)};
  return sweep_ > 0 ? t : t * -1.0;
}

double CircularArc::closest(Vec2 p) const {
  Vec2 d = p - center_;
  double best_s = 0.0, best = (point(0.0) - p).norm();
  double e = (point(length()) - p).norm();
  if (e < best) {
    best = e;
    best_s = length();
  }
  if (d.norm() > 0) {
    double a = std::atan2(d.y, d.x);
    // signed angular offset from phi0 in the sweep direction, in [0, 2pi)
    double off = (sweep_ > 0 ? a - phi0_ : phi0_ - a);
    off = std::fmod(off, 2 * pi);
    if (off < 0) off += 2 * pi;
    if (off <= std::abs(sweep_)) {
      double s = off * radius_;
      double dist = (point(s) - p).norm();
      if (dist < best) best_s = s;
    }
  }
  return best_s;
}

// -------------------------------------------------------------- SplineArc

SplineArc::SplineArc(std::vector<Vec2> pts) : p_(std::move(pts)) {
  const int n = static_cast<int>(p_.size());
  if (n < 3) throw GeometryError("spline needs at least 3 points");
  u_.assign(n, 0.0);
  for (int i = 1; i < n; ++i) {
    double h = (p_[i] - p_[i - 1]).norm();
    if (!(h > 0)) throw GeometryError("spline has repeated points");
    u_[i] = u_[i - 1] + h;
  }
  // natural cubic spline second derivatives via the Thomas algorithm
  m_.assign(n, Vec2{});
  std::vector<double> c(n, 0.0);
  std::vector<Vec2> d(n);
  for (int i = 1; i < n - 1; ++i) {
    double h0 = u_[i] - u_[i - 1], h1 = u_[i + 1] - u_[i];
    double a = h0 / 6, b = (h0 + h1) / 3, cc = h1 / 6;
    Vec2 r = (p_[i + 1] - p_[i]) / h1 - (p_[i] - p_[i - 1]) / h0;
    double denom = b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (r - d[i - 1] * a) / denom;
  }
  for (int i = n - 2; i >= 1; --i) m_[i] = d[i] - m_[i + 1] * c[i];

  cum_.assign(n, 0.0);
  for (int i = 1; i < n; ++i)
    cum_[i] = cum_[i - 1] + integrate([&](double u) { return eval_u(u).d1.norm(); }, u_[i - 1], u_[i]);
  total_ = cum_.back();
}

SplineArc::Eval SplineArc::eval_u(double u) const {
  int n = static_cast<int>(u_.size());
  int k = static_cast<int>(std::upper_bound(u_.begin(), u_.end(), u) - u_.begin()) - 1;
  k = std::clamp(k, 0, n - 2);
  double h = u_[k + 1] - u_[k];
  double A = (u_[k + 1] - u) / h, B = (u - u_[k]) / h;
  Eval e;
  e.p = p_[k] * A + p_[k + 1] * B + (m_[k] * (A * A * A - A) + m_[k + 1] * (B * B * B - B)) * (h * h / 6);
  e.d1 = (p_[k + 1] - p_[k]) / h + (m_[k + 1] * (3 * B * B - 1) - m_[k] * (3 * A * A - 1)) * (h / 6);
  e.d2 = m_[k] * A + m_[k + 1] * B;
  return e;
}

double SplineArc::u_of_sigma(double s) const {
  s = std::clamp(s, 0.0, total_);
  int n = static_cast<int>(u_.size());
  int k = static_cast<int>(std::upper_bound(cum_.begin(), cum_.end(), s) - cum_.begin()) - 1;
  k = std::clamp(k, 0, n - 2);
  double target = s - cum_[k];
  double lo = u_[k], hi = u_[k + 1];
  double u = lo + (hi - lo) * target / std::max(cum_[k + 1] - cum_[k], 1e-300);
  // Newton with bisection safeguard, run to roundoff so quadratures over sigma see a smooth integrand
  for (int it = 0; it < 60; ++it) {
    double g = boost::math::quadrature::gauss<double, 20>::integrate([&](double v) { return eval_u(v).d1.norm(); },
                                                                      u_[k], u) -
               target;
    if (g == 0.0) break;
    if (g > 0) hi = u; else lo = u;
    double step = g / eval_u(u).d1.norm();
    if (std::abs(step) <= 1e-15 * (u_[k + 1] - u_[k])) {
      u -= step;
      break;
    }
    double next = u - step;
    u = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
  }
  return u;
}

Vec2 SplineArc::point(double s) const { return eval_u(u_of_sigma(s)).p; }

Vec2 SplineArc::tangent(double s) const {
  Vec2 d = eval_u(u_of_sigma(s)).d1;
  return d / d.norm();
}

double SplineArc::curvature(double s) const {
  Eval e = eval_u(u_of_sigma(s));
  double sp = e.d1.norm();
  return cross(e.d1, e.d2) / (sp * sp * sp);
}

double SplineArc::closest(Vec2 p) const {
  const int samples = 16 * static_cast<int>(u_.size());
  double best_s = 0.0, best = 1e300;
  for (int i = 0; i <= samples; ++i) {
    double s = total_ * i / samples;
    double d = (point(s) - p).norm();
    if (d < best) {
      best = d;
      best_s = s;
    }
  }
  double ds = total_ / samples;
  double lo = std::max(0.0, best_s - ds), hi = std::min(total_, best_s + ds);
  auto r = boost::math::tools::brent_find_minima([&](double s) { return (point(s) - p).norm(); }, lo, hi, 40);
  return r.second <= best ? r.first : best_s;
}

// ----------------------------------------------------- CurvilinearPolygon

CurvilinearPolygon::CurvilinearPolygon(std::vector<std::shared_ptr<const Arc>> arcs, std::string name)
    : arcs_(std::move(arcs)), name_(std::move(name)) {
  if (arcs_.empty()) throw GeometryError("polygon has no arcs");
  cum_.assign(arcs_.size() + 1, 0.0);
  for (size_t i = 0; i < arcs_.size(); ++i) {
    double len = arcs_[i]->length();
    if (!std::isfinite(len) || len <= 0) throw GeometryError("arc " + std::to_string(i) + " has invalid length");
    cum_[i + 1] = cum_[i] + len;
  }
  const double scale = std::max(1.0, cum_.back());
  const int n = static_cast<int>(arcs_.size());
  for (int i = 0; i < n; ++i) {
    const Arc& prev = *arcs_[(i + n - 1) % n];
    const Arc& cur = *arcs_[i];
    Vec2 end = prev.point(prev.length());
    Vec2 start = cur.point(0.0);
    if ((end - start).norm() > 1e-12 * scale)
      throw GeometryError("boundary is not closed at junction " + std::to_string(i));
    Vec2 tin = prev.tangent(prev.length());
    Vec2 tout = cur.tangent(0.0);
    double turn = std::atan2(cross(tin, tout), dot(tin, tout));
    if (std::abs(turn) > pi - 1e-9)
      throw GeometryError("cusp at junction " + std::to_string(i) + ": opening angle outside (0, 2pi)");
    if (std::abs(turn) > 1e-9) corners_.push_back({i, cum_[i], pi - turn, start});
  }
  double a = 0.0;
  for (const auto& arc : arcs_)
    a += 0.5 * integrate_arc(*arc, [&](double s) { return cross(arc->point(s), arc->tangent(s)); }, 0.0, arc->length());
  if (!(a > 0)) throw GeometryError("boundary must be counter-clockwise and enclose positive area");
  area_ = a;
}

std::pair<int, double> CurvilinearPolygon::locate(double s) const {
  double P = perimeter();
  s = std::fmod(s, P);
  if (s < 0) s += P;
  int i = static_cast<int>(std::upper_bound(cum_.begin(), cum_.end(), s) - cum_.begin()) - 1;
  i = std::clamp(i, 0, static_cast<int>(arcs_.size()) - 1);
  return {i, std::min(s - cum_[i], arcs_[i]->length())};
}

Vec2 CurvilinearPolygon::point(double s) const {
  auto [i, sig] = locate(s);
  return arcs_[i]->point(sig);
}

Vec2 CurvilinearPolygon::tangent(double s) const {
  auto [i, sig] = locate(s);
  return arcs_[i]->tangent(sig);
}

double CurvilinearPolygon::curvature(double s) const {
  auto [i, sig] = locate(s);
  return arcs_[i]->curvature(sig);
}

bool CurvilinearPolygon::polygonal() const {
  return std::all_of(arcs_.begin(), arcs_.end(), [](const auto& a) { return a->kind() == "segment"; });
}

// ------------------------------------------------------------ invariants

double curvature_integral(const CurvilinearPolygon& poly) {
  double total = 0.0;
  int idx = 0;
  for (const auto& arc : poly.arcs()) {
    double v = integrate_arc(
        *arc,
        [&](double s) {
          double k = arc->curvature(s);
          if (!std::isfinite(k))
            throw GeometryError("non-finite curvature on arc " + std::to_string(idx) + " at sigma=" + std::to_string(s));
          return k;
        },
        0.0, arc->length());
    total += v;
    ++idx;
  }
  return total;
}

double gauss_bonnet_defect(const CurvilinearPolygon& poly) {
  double sum = curvature_integral(poly);
  for (const auto& c : poly.corners()) sum += pi - c.beta;
  return sum - 2 * pi;
}

// ------------------------------------------------------ tubular coordinates

Vec2 tubular_map(const CurvilinearPolygon& poly, TubularPoint tp, double eps) {
  if (!(eps > 0)) throw UsageError("eps must be positive");
  double s = eps * tp.s;
  double k = poly.curvature(s);
  if (1.0 - eps * tp.t * k <= 0.0) throw GeometryError("point lies beyond the focal distance of the boundary");
  return poly.point(s) + poly.inward_normal(s) * (eps * tp.t);
}

AmbiguousProjection::AmbiguousProjection(TubularPoint a, TubularPoint b)
    : GeometryError("ambiguous projection: two nearest boundary points (s=" + std::to_string(a.s) + ", s=" +
                    std::to_string(b.s) + ")"),
      first(a),
      second(b) {}

TubularPoint inverse_tubular(const CurvilinearPolygon& poly, Vec2 p, double eps, TieBreak tie) {
  if (!(eps > 0)) throw UsageError("eps must be positive");
  struct Cand {
    double s, d;
    Vec2 foot;
    int arc;
    double sigma;
  };
  std::vector<Cand> cands;
  const auto& arcs = poly.arcs();
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
    double sig = arcs[i]->closest(p);
    Vec2 f = arcs[i]->point(sig);
    double s = poly.arc_start(i) + sig;
    if (s >= poly.perimeter()) s -= poly.perimeter();
    cands.push_back({s, (p - f).norm(), f, i, sig});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.d < b.d; });
  const double scale = std::max(1.0, poly.perimeter());
  const double dtol = 1e-10 * scale;
  // collect distinct feet tied with the nearest distance
  std::vector<Cand> tied;
  for (const auto& c : cands) {
    if (c.d > cands[0].d + dtol) break;
    bool dup = false;
    for (auto& t : tied)
      if ((t.foot - c.foot).norm() <= 1e-9 * scale) {
        dup = true;
        if (c.s < t.s) t = c;
      }
    if (!dup) tied.push_back(c);
  }
  std::sort(tied.begin(), tied.end(), [](const Cand& a, const Cand& b) { return a.s < b.s; });
  const Cand& best = tied.front();
  // a foot strictly inside a smooth arc must see p on the inner side
  if (best.sigma > 1e-12 && best.sigma < arcs[best.arc]->length() - 1e-12) {
    Vec2 nu = perp(arcs[best.arc]->tangent(best.sigma));
    if (dot(p - best.foot, nu) < -dtol) throw GeometryError("point lies outside the domain");
  }
  if (tied.size() > 1 && tie == TieBreak::Throw)
    throw AmbiguousProjection({tied[0].s / eps, tied[0].d / eps}, {tied[1].s / eps, tied[1].d / eps});
  return {best.s / eps, best.d / eps};
}

// --------------------------------------------------------------- builtins

CurvilinearPolygon make_disc(double radius, Vec2 center) {
  return CurvilinearPolygon({std::make_shared<CircularArc>(center, radius, 0.0, 2 * pi)}, "disc");
}

CurvilinearPolygon make_polygon(const std::vector<Vec2>& v, std::string name) {
  std::vector<std::shared_ptr<const Arc>> arcs;
  for (size_t i = 0; i < v.size(); ++i) arcs.push_back(std::make_shared<Segment>(v[i], v[(i + 1) % v.size()]));
  return CurvilinearPolygon(std::move(arcs), std::move(name));
}

CurvilinearPolygon make_rectangle(double w, double h) {
  return make_polygon({{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}}, "rectangle");
}

CurvilinearPolygon make_square(double side) {
  auto p = make_rectangle(side, side);
  return CurvilinearPolygon(p.arcs(), "square");
}

CurvilinearPolygon make_stadium(double r, double a) {
  std::vector<std::shared_ptr<const Arc>> arcs{
      std::make_shared<Segment>(Vec2{-a / 2, -r}, Vec2{a / 2, -r}),
      std::make_shared<CircularArc>(Vec2{a / 2, 0}, r, -pi / 2, pi),
      std::make_shared<Segment>(Vec2{a / 2, r}, Vec2{-a / 2, r}),
      std::make_shared<CircularArc>(Vec2{-a / 2, 0}, r, pi / 2, pi),
  };
  return CurvilinearPolygon(std::move(arcs), "stadium");
}

CurvilinearPolygon make_notched_pentagon() {
  return make_polygon({{0, 0}, {2, 0}, {2, 2}, {1, 1}, {0, 2}}, "notched_pentagon");
}

CurvilinearPolygon make_sector_cap(double r, double beta) {
  Vec2 o{0, 0}, a{r, 0}, b{r * std::cos(beta), r * std::sin(beta)};
  std::vector<std::shared_ptr<const Arc>> arcs{
      std::make_shared<Segment>(o, a),
      std::make_shared<CircularArc>(o, r, 0.0, beta),
      std::make_shared<Segment>(b, o),
  };
  return CurvilinearPolygon(std::move(arcs), "sector_cap");
}

CurvilinearPolygon builtin_shape(const std::string& name) {
  if (name == "disc") return make_disc();
  if (name == "square") return make_square();
  if (name == "stadium") return make_stadium(1.0, 2.0);
  if (name == "notched_pentagon" || name == "pentagon") return make_notched_pentagon();
  if (name == "sector_cap") return make_sector_cap(1.0, pi / 2);
  throw UsageError("unknown built-in shape '" + name + "' (disc, square, stadium, notched_pentagon, sector_cap)");
}

}  // namespace glcorner
