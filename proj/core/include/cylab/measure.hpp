#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cylab/geometry.hpp"

namespace cylab {

enum class Method { closed_form, quadrature, monte_carlo };
std::string to_string(Method m);

struct MeasureEstimate {
  double value = 0.0;
  double std_error = 0.0;
  Method method = Method::closed_form;
  std::uint64_t samples = 0;
};

// mu(L_{B(x, r)}) = kappa_{d-1} r^{d-1}.
double ball_hit_measure(int d, double r);

// mu(L_{B(0,1)} cap L_{B(r e_1, 1)}) by one-dimensional quadrature.
MeasureEstimate ball_pair_hit_measure(int d, double r);

// Constants of C3 r^{1-d} <= mu <= C3 r^{1-d} + C4 r^{-1-d} for r >= 4.
struct BallPairConstants {
  double c1, c2, c3, c4;
};
BallPairConstants ball_pair_bound_constants(int d);

// Area of the projection of c(L1) cap c(L2) onto dir^perp, unit radii, d = 3.
struct ProjectedArea {
  enum class Kind { finite, divergent, degenerate };
  Kind kind = Kind::finite;
  double area = 0.0;
};
ProjectedArea cylinder_pair_projected_area(const Line& l1, const Line& l2, const Direction& dir);

// Sine of the angle between the projections of the two axes onto dir^perp.
double projected_axis_sine(const Direction& d1, const Direction& d2, const Direction& dir);

// Integral of the projected area over directions with projected sine >= eps.
MeasureEstimate cylinder_pair_truncated_measure(const Line& l1, const Line& l2, double eps);

// Monte Carlo estimate of mu(cap_i L_{body_i} cap L_window).
MeasureEstimate hit_measure_mc(const std::vector<Body>& bodies, const Ball& window,
                               std::uint64_t n, std::uint64_t seed);

// mu(L_{B(r e_1, 1)} cap L_c) for the unit cylinder around the e_2 axis,
// estimated with directions importance-sampled towards the cylinder.
MeasureEstimate ball_cylinder_measure_mc(int d, double r, std::uint64_t n, std::uint64_t seed);

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};
// Rigorous lower and upper bounds for the ball-cylinder measure above.
Bounds ball_cylinder_bounds(int d, double r);

}  // namespace cylab
