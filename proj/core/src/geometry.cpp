#include "cylab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cylab/errors.hpp"

namespace cylab {

namespace {

constexpr double kParallelTol = 1e-12;

void require_dim(int d) {
  if (d < 2) throw InvalidInput("dimension must be at least 2");
}

void require_same(int a, int b) {
  if (a != b) throw InvalidInput("dimension mismatch");
}

}  // namespace

Direction Direction::from_raw(const Vec& raw) {
  require_dim(raw.dim());
  if (!all_finite(raw)) throw InvalidInput("direction has non-finite coordinates");
  const double n = norm(raw);
  if (!(n > 0.0)) throw InvalidInput("zero direction vector");
  Vec v = raw / n;
  for (int i = 0; i < v.dim(); ++i) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0) v *= -1.0;
      break;
    }
  }
  return Direction(v);
}

Vec AxisBox::lower() const {
  Vec v = center;
  for (int i = 0; i < v.dim(); ++i) v[i] -= 0.5 * side;
  return v;
}

Vec AxisBox::upper() const {
  Vec v = center;
  for (int i = 0; i < v.dim(); ++i) v[i] += 0.5 * side;
  return v;
}

bool AxisBox::contains(const Vec& x) const {
  require_same(x.dim(), center.dim());
  for (int i = 0; i < x.dim(); ++i) {
    if (std::abs(x[i] - center[i]) > 0.5 * side) return false;
  }
  return true;
}

Cylinder make_cylinder(const Line& axis, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidInput("cylinder radius must be positive");
  return Cylinder{axis, radius};
}

Ball make_ball(const Vec& center, double radius) {
  require_dim(center.dim());
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidInput("ball radius must be nonnegative");
  if (!all_finite(center)) throw InvalidInput("ball center not finite");
  return Ball{center, radius};
}

AxisBox make_box(const Vec& center, double side) {
  require_dim(center.dim());
  if (!(side > 0.0) || !std::isfinite(side)) throw InvalidInput("box side must be positive");
  return AxisBox{center, side};
}

Vec complement_projection(const Direction& dir, const Vec& x) {
  require_same(dir.dim(), x.dim());
  Vec y = x - dot(x, dir.vec()) * dir.vec();
  // Second pass removes the residual component left by rounding.
  y -= dot(y, dir.vec()) * dir.vec();
  return y;
}

Line canonicalize(const Vec& point, const Vec& raw_dir) {
  require_same(point.dim(), raw_dir.dim());
  if (!all_finite(point)) throw InvalidInput("line point not finite");
  Direction dir = Direction::from_raw(raw_dir);
  return Line{dir, complement_projection(dir, point)};
}

Line line_through(const Vec& a, const Vec& b) { return canonicalize(a, b - a); }

double point_line_distance_sq_raw(const double* x, const double* dir, const double* anchor,
                                  int dim) {
  double w[kMaxDim];
  double p = 0.0;
  for (int i = 0; i < dim; ++i) {
    w[i] = x[i] - anchor[i];
    p += w[i] * dir[i];
  }
  double s = 0.0;
  for (int i = 0; i < dim; ++i) {
    const double r = w[i] - p * dir[i];
    s += r * r;
  }
  return s;
}

double line_distance_sq_raw(const double* d1, const double* a1, const double* d2,
                            const double* a2, int dim) {
  double delta[kMaxDim];
  double c = 0.0, p = 0.0, q = 0.0;
  for (int i = 0; i < dim; ++i) {
    delta[i] = a2[i] - a1[i];
    c += d1[i] * d2[i];
    p += delta[i] * d1[i];
    q += delta[i] * d2[i];
  }
  const double g = 1.0 - c * c;
  double s = 0.0;
  if (g <= kParallelTol) {
    for (int i = 0; i < dim; ++i) {
      const double r = delta[i] - p * d1[i];
      s += r * r;
    }
    return s;
  }
  // Closest points a1 + t*d1 and a2 + u*d2.
  const double t = (p - c * q) / g;
  const double u = (c * p - q) / g;
  for (int i = 0; i < dim; ++i) {
    const double r = delta[i] + u * d2[i] - t * d1[i];
    s += r * r;
  }
  return s;
}

double dist_point_line(const Vec& x, const Line& line) {
  require_same(x.dim(), line.dim());
  return std::sqrt(point_line_distance_sq_raw(x.data(), line.dir.vec().data(),
                                              line.anchor.data(), x.dim()));
}

double dist_line_line(const Line& a, const Line& b) {
  require_same(a.dim(), b.dim());
  return std::sqrt(line_distance_sq_raw(a.dir.vec().data(), a.anchor.data(),
                                        b.dir.vec().data(), b.anchor.data(), a.dim()));
}

bool hits(const Line& line, const Ball& ball) {
  return dist_point_line(ball.center, line) <= ball.radius;
}

bool hits(const Line& line, const Cylinder& cyl) {
  return dist_line_line(line, cyl.axis) <= cyl.radius;
}

std::optional<std::pair<double, double>> clip_to_box(const Line& line, const AxisBox& box) {
  require_same(line.dim(), box.center.dim());
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  const double h = 0.5 * box.side;
  for (int i = 0; i < line.dim(); ++i) {
    const double k = line.dir[i];
    const double lo = box.center[i] - h - line.anchor[i];
    const double hi = box.center[i] + h - line.anchor[i];
    if (k == 0.0) {
      if (lo > 0.0 || hi < 0.0) return std::nullopt;
      continue;
    }
    double ta = lo / k, tb = hi / k;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

bool hits(const Line& line, const AxisBox& box) { return clip_to_box(line, box).has_value(); }

bool hits(const Line& line, const Body& body) {
  return std::visit([&](const auto& b) { return hits(line, b); }, body);
}

bool cylinders_intersect(const Cylinder& a, const Cylinder& b) {
  return dist_line_line(a.axis, b.axis) <= a.radius + b.radius;
}

std::optional<std::pair<double, double>> within_distance_interval(const Line& line,
                                                                  const Line& axis,
                                                                  double radius) {
  require_same(line.dim(), axis.dim());
  // |P(anchor - axis.anchor) + t P(dir)|^2 <= radius^2, P = projection off axis.
  const Vec w = complement_projection(axis.dir, line.anchor - axis.anchor);
  const Vec k = complement_projection(axis.dir, line.dir.vec());
  const double A = norm_sq(k);
  const double B = 2.0 * dot(w, k);
  const double C = norm_sq(w) - radius * radius;
  const double inf = std::numeric_limits<double>::infinity();
  if (A <= 1e-24) {
    if (C <= 0.0) return std::make_pair(-inf, inf);
    return std::nullopt;
  }
  const double disc = B * B - 4.0 * A * C;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  // Stable roots.
  const double qq = -0.5 * (B + std::copysign(sq, B));
  double r1, r2;
  if (qq != 0.0) {
    r1 = qq / A;
    r2 = C / qq;
  } else {
    r1 = r2 = 0.0;
  }
  if (r1 > r2) std::swap(r1, r2);
  return std::make_pair(r1, r2);
}

std::vector<Vec> orthobasis_complement(const Direction& dir) {
  const int d = dir.dim();
  int skip = 0;
  for (int i = 1; i < d; ++i) {
    if (std::abs(dir[i]) > std::abs(dir[skip])) skip = i;
  }
  std::vector<Vec> basis;
  basis.reserve(d - 1);
  for (int j = 0; j < d; ++j) {
    if (j == skip) continue;
    Vec v = Vec::unit(d, j);
    for (int pass = 0; pass < 2; ++pass) {
      v -= dot(v, dir.vec()) * dir.vec();
      for (const Vec& b : basis) v -= dot(v, b) * b;
    }
    v /= norm(v);
    basis.push_back(v);
  }
  return basis;
}

}  // namespace cylab
