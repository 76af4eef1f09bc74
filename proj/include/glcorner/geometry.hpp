#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glcorner/errors.hpp"

namespace glcorner {

struct Vec2 {
  double x = 0.0, y = 0.0;
  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double a) const { return {a * x, a * y}; }
  Vec2 operator/(double a) const { return {x / a, y / a}; }
  double norm() const { return std::hypot(x, y); }
};
inline Vec2 operator*(double a, Vec2 v) { return v * a; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }  // rotation by +pi/2

// A smooth boundary piece parametrized by its own arclength sigma in [0, length()].
class Arc {
 public:
  virtual ~Arc() = default;
  virtual double length() const = 0;
  virtual Vec2 point(double sigma) const = 0;
  virtual Vec2 tangent(double sigma) const = 0;  // unit
  // Signed curvature; positive when the curve turns left (convex for a
  // counter-clockwise boundary).
  virtual double curvature(double sigma) const = 0;
  // Closest point on the arc: returns sigma in [0, length()].
  virtual double closest(Vec2 p) const = 0;
  virtual std::string kind() const = 0;
  // Arclength positions between which the arc is analytic (ends included).
  virtual std::vector<double> breakpoints() const { return {0.0, length()}; }
};

class Segment : public Arc {
 public:
  Segment(Vec2 a, Vec2 b);
  double length() const override { return len_; }
  Vec2 point(double s) const override { return a_ + dir_ * s; }
  Vec2 tangent(double) const override { return dir_; }
  double curvature(double) const override { return 0.0; }
  double closest(Vec2 p) const override;
  std::string kind() const override { return "segment"; }
  Vec2 start() const { return a_; }
  Vec2 end() const { return b_; }

 private:
  Vec2 a_, b_, dir_;
  double len_;
};

// Circular arc around `center`, starting at polar angle `phi0`, sweeping
// `sweep` radians (positive = counter-clockwise).
class CircularArc : public Arc {
 public:
  CircularArc(Vec2 center, double radius, double phi0, double sweep);
  double length() const override { return radius_ * std::abs(sweep_); }
  Vec2 point(double s) const override;
  Vec2 tangent(double s) const override;
  double curvature(double) const override { return sweep_ > 0 ? 1.0 / radius_ : -1.0 / radius_; }
  double closest(Vec2 p) const override;
  std::string kind() const override { return "circular"; }
  Vec2 center() const { return center_; }
  double radius() const { return radius_; }
  double phi0() const { return phi0_; }
  double sweep() const { return sweep_; }

 private:
  double angle(double s) const { return phi0_ + (sweep_ > 0 ? s : -s) / radius_; }
  Vec2 center_;
  double radius_, phi0_, sweep_;
};

// Open natural cubic spline through sample points, chord-length parametrized.
// Curvature comes from the spline derivatives.
class SplineArc : public Arc {
 public:
  explicit SplineArc(std::vector<Vec2> pts);
  double length() const override { return total_; }
  Vec2 point(double s) const override;
  Vec2 tangent(double s) const override;
  double curvature(double s) const override;
  double closest(Vec2 p) const override;
  std::string kind() const override { return "spline"; }
  std::vector<double> breakpoints() const override { return cum_; }
  const std::vector<Vec2>& points() const { return p_; }

 private:
  struct Eval {
    Vec2 p, d1, d2;
  };
  Eval eval_u(double u) const;
  double u_of_sigma(double s) const;
  std::vector<double> u_;            // knot parameters
  std::vector<Vec2> p_, m_;          // values and second derivatives at knots
  std::vector<double> cum_;          // arclength at knots
  double total_ = 0.0;
};

struct Corner {
  int index = 0;       // junction between arc index-1 and arc index
  double s = 0.0;      // arclength position on the boundary
  double beta = 0.0;   // interior opening angle in (0, 2 pi)
  Vec2 vertex;
};

// Closed, counter-clockwise, piecewise-smooth boundary curve.
class CurvilinearPolygon {
 public:
  explicit CurvilinearPolygon(std::vector<std::shared_ptr<const Arc>> arcs, std::string name = "");

  const std::vector<std::shared_ptr<const Arc>>& arcs() const { return arcs_; }
  const std::vector<Corner>& corners() const { return corners_; }
  double perimeter() const { return cum_.back(); }
  double area() const { return area_; }
  const std::string& name() const { return name_; }
  // Arclength at the start of arc i (i = arcs().size() gives the perimeter).
  double arc_start(int i) const { return cum_[i]; }
  // Locate a global arclength (wrapped into [0, perimeter)).
  std::pair<int, double> locate(double s) const;
  Vec2 point(double s) const;
  Vec2 tangent(double s) const;
  Vec2 inward_normal(double s) const { return perp(tangent(s)); }
  double curvature(double s) const;
  bool smooth() const { return corners_.empty(); }
  bool polygonal() const;

 private:
  std::vector<std::shared_ptr<const Arc>> arcs_;
  std::vector<double> cum_;
  std::vector<Corner> corners_;
  double area_ = 0.0;
  std::string name_;
};

// Boundary coordinates: s along the boundary, t along the inward normal,
// both in units of eps.
struct TubularPoint {
  double s = 0.0;
  double t = 0.0;
};

// Lebesgue-sense integral of the signed curvature over the smooth parts.
double curvature_integral(const CurvilinearPolygon& poly);
// int k ds + sum (pi - beta_j) - 2 pi; zero for a simple closed curve.
double gauss_bonnet_defect(const CurvilinearPolygon& poly);

Vec2 tubular_map(const CurvilinearPolygon& poly, TubularPoint tp, double eps);

class AmbiguousProjection : public GeometryError {
 public:
  AmbiguousProjection(TubularPoint a, TubularPoint b);
  TubularPoint first, second;
};

enum class TieBreak { Throw, SmallestS };

// Nearest-boundary-point coordinates. Ties between distinct foot points
// raise AmbiguousProjection unless SmallestS is requested.
TubularPoint inverse_tubular(const CurvilinearPolygon& poly, Vec2 p, double eps,
                             TieBreak tie = TieBreak::Throw);

// Built-in shapes.
CurvilinearPolygon make_disc(double radius = 1.0, Vec2 center = {0, 0});
CurvilinearPolygon make_rectangle(double w, double h);
CurvilinearPolygon make_square(double side = 2.0);
CurvilinearPolygon make_stadium(double radius, double straight);
CurvilinearPolygon make_polygon(const std::vector<Vec2>& vertices, std::string name = "polygon");
// Square with a notch: one reflex corner of angle 3 pi / 2.
CurvilinearPolygon make_notched_pentagon();
// Circular sector of opening beta (corners beta, pi/2, pi/2).
CurvilinearPolygon make_sector_cap(double radius, double beta);
CurvilinearPolygon builtin_shape(const std::string& name);

// JSON polygon file: {"name": ..., "arcs": [{"type": "segment", "from": [x,y], "to": [x,y]},
// {"type": "arc", "center": [x,y], "radius": r, "start": phi0, "sweep": dphi},
// {"type": "spline", "points": [[x,y], ...]}]}
CurvilinearPolygon load_polygon(const std::string& path);
CurvilinearPolygon polygon_from_json_text(const std::string& text);
std::string polygon_to_json_text(const CurvilinearPolygon& poly);

}  // namespace glcorner
