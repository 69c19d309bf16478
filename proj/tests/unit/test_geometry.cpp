#include <cmath>
#include <vector>

#include "cylab/errors.hpp"
#include "cylab/geometry.hpp"
#include "cylab/rng.hpp"
#include "doctest.h"

using namespace cylab;

namespace {

Line axis_line(int d, int axis, const Vec& through) {
  return canonicalize(through, Vec::unit(d, axis));
}

Vec v3(double a, double b, double c) { return Vec{a, b, c}; }

Line random_line(CounterRng& rng, int d, double spread) {
  return canonicalize(uniform_in_ball(rng, d, spread), uniform_unit_vector(rng, d));
}

// Golden-section search for min_t |x - (a + t v)|.
double golden_distance(const Vec& x, const Line& l) {
  double lo = -1e3, hi = 1e3;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = [&](double t) { return norm(x - l.point_at(t)); };
  double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  for (int i = 0; i < 200; ++i) {
    if (f(c) < f(d)) hi = d;
    else lo = c;
    c = hi - g * (hi - lo);
    d = lo + g * (hi - lo);
  }
  return f(0.5 * (lo + hi));
}

Vec cross(const Vec& a, const Vec& b) {
  return v3(a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]);
}

// Composition of random Givens rotations acting on a vector.
struct Rotation {
  std::vector<std::pair<int, int>> planes;
  std::vector<double> angles;
  Vec apply(Vec x) const {
    for (std::size_t k = 0; k < planes.size(); ++k) {
      const auto [i, j] = planes[k];
      const double c = std::cos(angles[k]), s = std::sin(angles[k]);
      const double xi = x[i], xj = x[j];
      x[i] = c * xi - s * xj;
      x[j] = s * xi + c * xj;
    }
    return x;
  }
};

Rotation random_rotation(CounterRng& rng, int d) {
  Rotation r;
  for (int k = 0; k < 3 * d; ++k) {
    const int i = static_cast<int>(rng.below(d));
    int j = i;
    while (j == i) j = static_cast<int>(rng.below(d));
    r.planes.emplace_back(i, j);
    r.angles.push_back(2.0 * M_PI * rng.uniform());
  }
  return r;
}

}  // namespace

TEST_CASE("complement projection") {
  const Vec p = complement_projection(Direction::from_raw(Vec::unit(3, 0)), v3(5, 2, 3));
  CHECK(p == v3(0, 2, 3));

  CounterRng rng(11, 0);
  for (int k = 0; k < 100; ++k) {
    const Direction l = Direction::from_raw(uniform_unit_vector(rng, 3));
    CHECK(norm(complement_projection(l, l.vec())) < 1e-12);
    const Vec x = uniform_in_ball(rng, 3, 10.0);
    // Explicit matrix I - l l^T written entry by entry.
    const double l1 = l[0], l2 = l[1], l3 = l[2];
    const Vec m = v3((l2 * l2 + l3 * l3) * x[0] - l1 * l2 * x[1] - l1 * l3 * x[2],
                     -l1 * l2 * x[0] + (l1 * l1 + l3 * l3) * x[1] - l2 * l3 * x[2],
                     -l1 * l3 * x[0] - l2 * l3 * x[1] + (l1 * l1 + l2 * l2) * x[2]);
    const Vec got = complement_projection(l, x);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(got[i] - m[i]) < 1e-12);
    CHECK(norm(complement_projection(l, got) - got) < 1e-12);
  }
}

TEST_CASE("canonicalize") {
  Line a = canonicalize(v3(3, 0, 0), Vec::unit(3, 0));
  CHECK(a.dir.vec() == Vec::unit(3, 0));
  CHECK(norm(a.anchor) == 0.0);
  Line b = canonicalize(v3(0, 0, 0), v3(0, -2, 0));
  CHECK(b.dir.vec() == v3(0, 1, 0));
  Line c = canonicalize(v3(1, 2, 0), v3(1, 0, 0));
  CHECK(c.anchor == v3(0, 2, 0));

  CounterRng rng(12, 0);
  for (int k = 0; k < 50; ++k) {
    const Vec p = uniform_in_ball(rng, 4, 5.0);
    const Vec dir = uniform_unit_vector(rng, 4);
    const Line ref = canonicalize(p, dir);
    for (double t : {-1e3, 0.0, 1e3}) {
      const Line l = canonicalize(p + t * ref.dir.vec(), dir);
      CHECK(l.dir.vec() == ref.dir.vec());
      CHECK(norm(l.anchor - ref.anchor) < 1e-9);
    }
    CHECK(std::abs(dot(ref.anchor, ref.dir.vec())) < 1e-12);
  }
  CHECK_THROWS_AS(canonicalize(v3(0, 0, 0), v3(0, 0, 0)), InvalidInput);
}

TEST_CASE("point and line distances") {
  const Line e1 = axis_line(3, 0, Vec(3));
  CHECK(dist_point_line(v3(0, 5, 0), e1) == doctest::Approx(5.0));
  CHECK(dist_point_line(v3(7, 0, 0), e1) == 0.0);
  CHECK(dist_line_line(e1, axis_line(3, 0, v3(0, 0, 3))) == doctest::Approx(3.0));
  CHECK(dist_line_line(e1, axis_line(3, 1, Vec(3))) == doctest::Approx(0.0).epsilon(1e-12));

  CounterRng rng(13, 0);
  for (int k = 0; k < 100; ++k) {
    const Line l = random_line(rng, 3, 5.0);
    const Vec x = uniform_in_ball(rng, 3, 8.0);
    CHECK(dist_point_line(x, l) == doctest::Approx(golden_distance(x, l)).epsilon(1e-9));

    const Line m = random_line(rng, 3, 5.0);
    const Vec n = cross(l.dir.vec(), m.dir.vec());
    const double skew = std::abs(dot(m.anchor - l.anchor, n)) / norm(n);
    CHECK(dist_line_line(l, m) == doctest::Approx(skew).epsilon(1e-9));
    CHECK(dist_line_line(l, m) == doctest::Approx(dist_line_line(m, l)).epsilon(1e-12));
  }
}

TEST_CASE("distance zero iff thin cylinder is hit") {
  CounterRng rng(14, 0);
  for (int k = 0; k < 200; ++k) {
    const Line l = random_line(rng, 3, 3.0);
    // Force an intersection half of the time.
    Line m = random_line(rng, 3, 3.0);
    if (k % 2 == 0) m = canonicalize(l.point_at(2.0 * rng.uniform() - 1.0), m.dir.vec());
    const bool zero = dist_line_line(l, m) <= 1e-12;
    CHECK(zero == hits(l, make_cylinder(m, 1e-9)));
  }
}

TEST_CASE("hits") {
  const Line e1 = axis_line(3, 0, Vec(3));
  CHECK_FALSE(hits(e1, make_ball(v3(0, 0, 2), 1.0)));
  CHECK(hits(e1, make_ball(v3(0, 0, 1), 1.0)));
  CHECK(hits(e1, make_cylinder(axis_line(3, 1, Vec(3)), 1.0)));

  CounterRng rng(15, 0);
  int agree = 0, total = 0;
  for (int k = 0; k < 300; ++k) {
    const Line l = random_line(rng, 3, 3.0);
    const AxisBox box = make_box(uniform_in_ball(rng, 3, 2.0), 1.0 + rng.uniform());
    const bool h = hits(l, box);
    // Dense sampling along the line over the relevant parameter range.
    bool inside = false;
    double best_margin = 0.0;
    for (int i = 0; i <= 100000 && !inside; ++i) {
      const Vec x = l.point_at(-8.0 + 16.0 * i / 100000.0);
      inside = box.contains(x);
      double margin = 0.0;
      for (int j = 0; j < 3; ++j) margin = std::max(margin, std::abs(x[j] - box.center[j]) - 0.5 * box.side);
      best_margin = i == 0 ? margin : std::min(best_margin, margin);
    }
    if (!inside && best_margin < 1e-3) continue;  // grazing lines
    ++total;
    agree += h == inside;
  }
  CHECK(total > 250);
  CHECK(agree == total);
}

TEST_CASE("hits is invariant under rigid motions") {
  CounterRng rng(16, 0);
  int tested = 0;
  for (int k = 0; k < 10000; ++k) {
    const int d = 3 + static_cast<int>(rng.below(3));
    const Line l = random_line(rng, d, 3.0);
    const Rotation rot = random_rotation(rng, d);
    const Vec shift = uniform_in_ball(rng, d, 5.0);
    auto move = [&](const Vec& x) { return rot.apply(x) + shift; };
    const Line lm = canonicalize(move(l.anchor), rot.apply(l.dir.vec()));
    if (k % 2 == 0) {
      const Ball b = make_ball(uniform_in_ball(rng, d, 3.0), 0.5 + rng.uniform());
      if (std::abs(dist_point_line(b.center, l) - b.radius) < 1e-9) continue;
      CHECK(hits(l, b) == hits(lm, make_ball(move(b.center), b.radius)));
    } else {
      const Line axis = random_line(rng, d, 3.0);
      const Cylinder c = make_cylinder(axis, 0.5 + rng.uniform());
      if (std::abs(dist_line_line(l, axis) - c.radius) < 1e-9) continue;
      const Cylinder cm = make_cylinder(canonicalize(move(axis.anchor), rot.apply(axis.dir.vec())), c.radius);
      CHECK(hits(l, c) == hits(lm, cm));
    }
    ++tested;
  }
  CHECK(tested > 9900);
}

TEST_CASE("cylinders intersect") {
  const Line e1 = axis_line(3, 0, Vec(3));
  CHECK_FALSE(cylinders_intersect(make_cylinder(e1, 1.0), make_cylinder(axis_line(3, 0, v3(0, 3, 0)), 1.0)));
  CHECK(cylinders_intersect(make_cylinder(e1, 1.0), make_cylinder(axis_line(3, 0, v3(0, 2, 0)), 1.0)));

  CounterRng rng(17, 0);
  for (int d = 3; d <= 6; ++d) {
    for (int k = 0; k < 200; ++k) {
      const AxisBox box = make_box(uniform_in_ball(rng, d, 10.0), 1.0);
      auto point_in_box = [&] {
        Vec x = box.lower();
        for (int j = 0; j < d; ++j) x[j] += rng.uniform();
        return x;
      };
      const Line a = canonicalize(point_in_box(), uniform_unit_vector(rng, d));
      const Line b = canonicalize(point_in_box(), uniform_unit_vector(rng, d));
      CHECK(cylinders_intersect(make_cylinder(a, std::sqrt(d)), make_cylinder(b, std::sqrt(d))));
    }
  }
}

TEST_CASE("orthonormal complement") {
  const auto e = orthobasis_complement(Direction::from_raw(Vec::unit(4, 0)));
  REQUIRE(e.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(norm(e[i] - Vec::unit(4, i + 1)) < 1e-12);

  CounterRng rng(18, 0);
  for (int d = 2; d <= 8; ++d) {
    for (int k = 0; k < 20; ++k) {
      const Direction dir = Direction::from_raw(uniform_unit_vector(rng, d));
      const auto b = orthobasis_complement(dir);
      REQUIRE(static_cast<int>(b.size()) == d - 1);
      for (int i = 0; i < d - 1; ++i) {
        CHECK(std::abs(dot(b[i], dir.vec())) < 1e-12);
        for (int j = 0; j < d - 1; ++j) CHECK(std::abs(dot(b[i], b[j]) - (i == j ? 1.0 : 0.0)) < 1e-12);
      }
      const Vec x = uniform_in_ball(rng, d, 4.0);
      Vec back = dot(x, dir.vec()) * dir.vec();
      for (const Vec& v : b) back += dot(x, v) * v;
      CHECK(norm(back - x) < 1e-12);
    }
  }
}

TEST_CASE("clip to box and distance intervals agree with sampling") {
  CounterRng rng(19, 0);
  for (int k = 0; k < 200; ++k) {
    const Line l = random_line(rng, 4, 2.0);
    const AxisBox box = make_box(uniform_in_ball(rng, 4, 1.0), 2.0);
    const auto clip = clip_to_box(l, box);
    const Line axis = random_line(rng, 4, 2.0);
    const auto within = within_distance_interval(l, axis, 1.5);
    for (int i = 0; i <= 2000; ++i) {
      const double t = -10.0 + 20.0 * i / 2000.0;
      const Vec x = l.point_at(t);
      const double margin = 1e-9;
      if (clip && t > clip->first + margin && t < clip->second - margin) CHECK(box.contains(x));
      if (!clip || t < clip->first - margin || t > clip->second + margin) CHECK_FALSE(box.contains(x));
      const double dist = dist_point_line(x, axis);
      if (std::abs(dist - 1.5) < 1e-7) continue;
      const bool in = within && t >= within->first && t <= within->second;
      CHECK(in == (dist <= 1.5));
    }
  }
}
