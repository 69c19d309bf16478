#include <cmath>
#include <vector>

#include "cylab/errors.hpp"
#include "cylab/experiment.hpp"
#include "cylab/measure.hpp"
#include "cylab/rng.hpp"
#include "cylab/special.hpp"
#include "doctest.h"

using namespace cylab;

namespace {

Vec on_axis(int d, double x) {
  Vec v(d);
  v[0] = x;
  return v;
}

Line axis_line(int d, int axis, const Vec& through) { return canonicalize(through, Vec::unit(d, axis)); }

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) pts.emplace_back(xs[i], ys[i]);
  return fit_power_law(pts).exponent;
}

}  // namespace

TEST_CASE("single ball measure") {
  CHECK(ball_hit_measure(3, 1.0) == doctest::Approx(M_PI));
  CHECK(ball_hit_measure(3, 2.0) == doctest::Approx(4.0 * M_PI));
  CHECK(ball_hit_measure(4, 1.0) == doctest::Approx(4.0 * M_PI / 3.0));
  CHECK(ball_hit_measure(5, 0.0) == 0.0);
}

TEST_CASE("ball pair measure sandwich and decay") {
  for (int d = 3; d <= 6; ++d) {
    const BallPairConstants c = ball_pair_bound_constants(d);
    double prev = INFINITY;
    for (double r = 4.0; r <= 128.0; r *= std::sqrt(2.0)) {
      const double v = ball_pair_hit_measure(d, r).value;
      CHECK(v <= prev);
      prev = v;
      const double lo = c.c3 * std::pow(r, 1.0 - d);
      CHECK(v >= lo * (1.0 - 1e-9));
      CHECK(v <= (lo + c.c4 * std::pow(r, -1.0 - d)) * (1.0 + 1e-9));
    }
  }
  for (int d : {3, 4}) {
    std::vector<double> rs{8, 16, 32, 64}, vs;
    for (double r : rs) vs.push_back(ball_pair_hit_measure(d, r).value);
    CHECK(std::abs(slope(rs, vs) + (d - 1)) < 0.02);
  }
  CHECK(ball_pair_hit_measure(3, 8.0).value == ball_pair_hit_measure(3, 8.0).value);
}

TEST_CASE("ball pair quadrature at short range") {
  // The lens formula also holds when the balls are close or overlap.
  for (double r : {0.0, 1.5, 3.0}) {
    const Ball a{on_axis(3, 0.0), 1.0}, b{on_axis(3, r), 1.0};
    const MeasureEstimate mc = hit_measure_mc({a, b}, a, 1000000, 4);
    const double q = ball_pair_hit_measure(3, r).value;
    CHECK(std::abs(mc.value - q) < 3.0 * mc.std_error + 1e-12);
  }
  CHECK(ball_pair_hit_measure(3, 0.0).value == doctest::Approx(M_PI).epsilon(1e-9));
}

TEST_CASE("ball pair constants for d = 3") {
  // For d = 3: C1 = 2, C2 = 4, and the leading coefficient is pi / 2.
  const BallPairConstants c = ball_pair_bound_constants(3);
  CHECK(c.c1 == doctest::Approx(2.0));
  CHECK(c.c2 == doctest::Approx(4.0));
  CHECK(c.c3 == doctest::Approx(M_PI / 2.0));
}

TEST_CASE("ball pair quadrature against Monte Carlo") {
  const Ball a{on_axis(3, 0.0), 1.0}, b{on_axis(3, 8.0), 1.0};
  const MeasureEstimate mc = hit_measure_mc({a, b}, a, 10000000, 3);
  const double q = ball_pair_hit_measure(3, 8.0).value;
  CHECK(std::abs(mc.value - q) < 3.0 * mc.std_error);
}

TEST_CASE("projected rhombus area") {
  const Line e1 = axis_line(3, 0, Vec(3)), e2 = axis_line(3, 1, Vec(3));
  const Direction e3 = Direction::from_raw(Vec::unit(3, 2));
  const ProjectedArea pa = cylinder_pair_projected_area(e1, e2, e3);
  CHECK(pa.kind == ProjectedArea::Kind::finite);
  CHECK(pa.area == doctest::Approx(4.0));
  CHECK(cylinder_pair_projected_area(e1, e2, Direction::from_raw(Vec::unit(3, 0))).kind ==
        ProjectedArea::Kind::degenerate);
  CHECK(cylinder_pair_projected_area(e1, axis_line(3, 0, Vec{0, 3, 0}), e3).kind == ProjectedArea::Kind::divergent);

  CounterRng rng(31, 0);
  for (int k = 0; k < 200; ++k) {
    const Line l1 = canonicalize(uniform_in_ball(rng, 3, 4.0), uniform_unit_vector(rng, 3));
    const Line l2 = canonicalize(uniform_in_ball(rng, 3, 4.0), uniform_unit_vector(rng, 3));
    const Direction view = Direction::from_raw(uniform_unit_vector(rng, 3));
    const ProjectedArea p = cylinder_pair_projected_area(l1, l2, view);
    REQUIRE(p.kind == ProjectedArea::Kind::finite);
    // Angle of the projected axes from explicit in-plane coordinates.
    const Vec u1 = complement_projection(view, l1.dir.vec()), u2 = complement_projection(view, l2.dir.vec());
    const double cosang = dot(u1, u2) / (norm(u1) * norm(u2));
    const double sine = std::sqrt(std::max(0.0, 1.0 - cosang * cosang));
    CHECK(p.area == doctest::Approx(4.0 / sine).epsilon(1e-9));
    CHECK(projected_axis_sine(l1.dir, l2.dir, view) == doctest::Approx(sine).epsilon(1e-9));
    const Line moved = canonicalize(l2.anchor + uniform_in_ball(rng, 3, 20.0), l2.dir.vec());
    CHECK(cylinder_pair_projected_area(l1, moved, view).area == doctest::Approx(p.area).epsilon(1e-12));
  }
}

TEST_CASE("projected area against planar Monte Carlo") {
  CounterRng rng(32, 0);
  for (int k = 0; k < 5; ++k) {
    const Line l1 = canonicalize(uniform_in_ball(rng, 3, 2.0), uniform_unit_vector(rng, 3));
    const Line l2 = canonicalize(uniform_in_ball(rng, 3, 2.0), uniform_unit_vector(rng, 3));
    const Direction view = Direction::from_raw(uniform_unit_vector(rng, 3));
    if (projected_axis_sine(l1.dir, l2.dir, view) < 0.3) continue;
    const double area = cylinder_pair_projected_area(l1, l2, view).area;
    // Sample points of the view plane through the origin; a point is in the
    // projection of c(L) iff the line through it along view meets c(L).
    const auto basis = orthobasis_complement(view);
    const double h = 30.0;
    const int n = 1000000;
    int hit = 0;
    for (int i = 0; i < n; ++i) {
      const Vec x = (h * (2.0 * rng.uniform() - 1.0)) * basis[0] + (h * (2.0 * rng.uniform() - 1.0)) * basis[1];
      const Line probe{view, x};
      hit += hits(probe, make_cylinder(l1, 1.0)) && hits(probe, make_cylinder(l2, 1.0));
    }
    const double p = static_cast<double>(hit) / n;
    const double mc = 4.0 * h * h * p;
    CHECK(std::abs(mc - area) < 0.01 * area + 3.0 * 4.0 * h * h * std::sqrt(p * (1 - p) / n));
  }
}

TEST_CASE("truncated cylinder pair measure") {
  const Line e1 = axis_line(3, 0, Vec(3)), e2 = axis_line(3, 1, Vec(3));
  const double a = cylinder_pair_truncated_measure(e1, e2, 0.1).value;
  const double b = cylinder_pair_truncated_measure(e1, e2, 0.01).value;
  CHECK(b > a);
  CHECK(a > 0.0);
  const double shifted = cylinder_pair_truncated_measure(e1, axis_line(3, 1, Vec{0, 0, 7}), 0.1).value;
  CHECK(std::abs(shifted - a) < 1e-9 * a);
  CHECK_THROWS_AS(cylinder_pair_truncated_measure(e1, e2, 0.0), InvalidInput);
}

TEST_CASE("truncated measure against direct angular Monte Carlo") {
  // Average of 4 / sine over uniform directions, restricted to sine >= eps.
  const Line e1 = axis_line(3, 0, Vec(3));
  const Line tilted = canonicalize(Vec(3), Vec{0.6, 0.8, 0.0});
  const double eps = 0.2;
  CounterRng rng(33, 0);
  const int n = 2000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Direction v = Direction::from_raw(uniform_unit_vector(rng, 3));
    const double sine = projected_axis_sine(e1.dir, tilted.dir, v);
    const double f = sine >= eps ? 4.0 / sine : 0.0;
    s += f;
    s2 += f * f;
  }
  const double mean = s / n, se = std::sqrt((s2 / n - mean * mean) / n);
  const double q = cylinder_pair_truncated_measure(e1, tilted, eps).value;
  CHECK(std::abs(q - mean) < 4.0 * se);
}

TEST_CASE("hit measure Monte Carlo") {
  const Ball window{Vec(3), 10.0};
  const MeasureEstimate one = hit_measure_mc({Ball{Vec(3), 1.0}}, window, 2000000, 5);
  CHECK(std::abs(one.value - M_PI) < 3.0 * one.std_error);
  const MeasureEstimate self = hit_measure_mc({window}, window, 1000, 5);
  CHECK(self.value == doctest::Approx(ball_hit_measure(3, 10.0)).epsilon(1e-12));
  CHECK(self.std_error == 0.0);
}

TEST_CASE("ball cylinder bounds and Monte Carlo") {
  for (int d = 3; d <= 5; ++d) {
    for (double r : {1.0, 2.0, 3.0, 8.0, 16.0, 32.0, 64.0}) {
      const Bounds b = ball_cylinder_bounds(d, r);
      CHECK(b.lower > 0.0);
      CHECK(b.lower < b.upper);
    }
  }
  std::vector<double> rs{8, 16, 32, 64}, lo, hi;
  for (double r : rs) {
    const Bounds b = ball_cylinder_bounds(4, r);
    lo.push_back(b.lower);
    hi.push_back(b.upper);
    const MeasureEstimate mc = ball_cylinder_measure_mc(4, r, 400000, 7);
    CHECK(mc.value >= b.lower - 3.0 * mc.std_error);
    CHECK(mc.value <= b.upper + 3.0 * mc.std_error);
  }
  CHECK(std::abs(slope(rs, lo) + 2.0) < 0.05);
  CHECK(std::abs(slope(rs, hi) + 2.0) < 0.05);
}

TEST_CASE("ball cylinder importance sampling against plain hit counting") {
  // Unit ball at r e_1 and unit cylinder around the e_2 axis; plain Monte
  // Carlo over lines hitting the ball.
  const int d = 4;
  const double r = 8.0;
  const Ball ball{on_axis(d, r), 1.0};
  const Cylinder cyl = make_cylinder(axis_line(d, 1, Vec(d)), 1.0);
  const MeasureEstimate plain = hit_measure_mc({ball, cyl}, ball, 4000000, 9);
  const MeasureEstimate is = ball_cylinder_measure_mc(d, r, 400000, 9);
  CHECK(std::abs(plain.value - is.value) < 3.0 * std::hypot(plain.std_error, is.std_error));

  std::vector<double> rs{8, 16, 32}, vs;
  for (double x : rs) vs.push_back(hit_measure_mc({Ball{on_axis(d, x), 1.0}, cyl}, Ball{on_axis(d, x), 1.0}, 2000000, 10).value);
  CHECK(std::abs(slope(rs, vs) + (d - 2)) < 0.15);
}
