#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "cylab/vec.hpp"

namespace cylab {

// Unit vector with canonical sign: the first nonzero coordinate is positive.
class Direction {
 public:
  static Direction from_raw(const Vec& raw);
  // Wraps a vector that is already unit length and canonically signed.
  static Direction trusted(const Vec& unit) { return Direction(unit); }

  const Vec& vec() const { return v_; }
  int dim() const { return v_.dim(); }
  double operator[](int i) const { return v_[i]; }

 private:
  explicit Direction(const Vec& v) : v_(v) {}
  Vec v_;
};

// Line {anchor + t * dir}; the anchor is the point closest to the origin.
struct Line {
  Direction dir;
  Vec anchor;

  int dim() const { return anchor.dim(); }
  Vec point_at(double t) const { return anchor + t * dir.vec(); }
};

struct Cylinder {
  Line axis;
  double radius = 1.0;
};

struct Ball {
  Vec center;
  double radius = 1.0;
};

// Closed axis-parallel cube center + [-side/2, side/2]^d.
struct AxisBox {
  Vec center;
  double side = 1.0;

  Vec lower() const;
  Vec upper() const;
  bool contains(const Vec& x) const;
};

using Body = std::variant<Ball, Cylinder, AxisBox>;
bool hits(const Line& line, const Body& body);

Cylinder make_cylinder(const Line& axis, double radius);
Ball make_ball(const Vec& center, double radius);
AxisBox make_box(const Vec& center, double side);

// Orthogonal projection onto the complement of dir.
Vec complement_projection(const Direction& dir, const Vec& x);

// Line through point with direction raw_dir, in canonical form.
Line canonicalize(const Vec& point, const Vec& raw_dir);
Line line_through(const Vec& a, const Vec& b);

double dist_point_line(const Vec& x, const Line& line);
double dist_line_line(const Line& a, const Line& b);

bool hits(const Line& line, const Ball& ball);
bool hits(const Line& line, const Cylinder& cyl);
bool hits(const Line& line, const AxisBox& box);
bool cylinders_intersect(const Cylinder& a, const Cylinder& b);

// Parameter interval [t0, t1] of line inside the closed box, if nonempty.
std::optional<std::pair<double, double>> clip_to_box(const Line& line, const AxisBox& box);

// Parameter interval where the line is within distance radius of axis.
// Returns nullopt when empty; an unbounded interval uses +-infinity.
std::optional<std::pair<double, double>> within_distance_interval(const Line& line,
                                                                  const Line& axis,
                                                                  double radius);

// Orthonormal basis of dir^perp, of size d-1.
std::vector<Vec> orthobasis_complement(const Direction& dir);

// Squared line-line distance on raw coordinate arrays. Directions must be
// unit vectors and anchors orthogonal to their direction.
double line_distance_sq_raw(const double* d1, const double* a1, const double* d2,
                            const double* a2, int dim);
double point_line_distance_sq_raw(const double* x, const double* dir, const double* anchor,
                                  int dim);

}  // namespace cylab
