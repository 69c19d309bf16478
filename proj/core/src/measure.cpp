#include "cylab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cylab/errors.hpp"
#include "cylab/lineproc.hpp"
#include "cylab/quadrature.hpp"
#include "cylab/rng.hpp"
#include "cylab/special.hpp"

namespace cylab {

std::string to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

namespace {

void require_measure_dim(int d) {
  if (d < 2 || d > kMaxDim) throw InvalidInput("dimension outside [2, 16]");
}

// Distribution function of 1 - l_1^2 for a uniform direction l.
double perp_cdf(int d, double x) {
  return reg_inc_beta(std::clamp(x, 0.0, 1.0), 0.5 * (d - 1), 0.5);
}

}  // namespace

double ball_hit_measure(int d, double r) {
  require_measure_dim(d);
  if (!(r >= 0.0)) throw InvalidInput("radius must be nonnegative");
  return kappa(d - 1) * std::pow(r, d - 1);
}

MeasureEstimate ball_pair_hit_measure(int d, double r) {
  require_measure_dim(d);
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("distance must be finite and nonnegative");
  // For a direction making angle phi with the axis through both centers, the
  // projected unit disks have centers r sin(phi) apart and overlap in a lens
  // of (d-1)-volume kappa_{d-1} I_{1 - r^2 sin^2(phi) / 4}(d/2, 1/2).
  // The density of phi is 2 sin^{d-2}(phi) / B(1/2, (d-1)/2) on [0, pi/2].
  const double phi_max = r <= 2.0 ? 0.5 * std::numbers::pi : std::asin(2.0 / r);
  const double a = 0.5 * d;
  auto integrand = [&](double phi) {
    const double s = std::sin(phi);
    const double x = 1.0 - 0.25 * r * r * s * s;
    const double lens = x <= 0.0 ? 0.0 : reg_inc_beta(std::min(x, 1.0), a, 0.5);
    return lens * 2.0 * std::pow(s, d - 2);
  };
  QuadratureOptions opt;
  opt.rel_tol = 1e-11;
  const double integral = adaptive_simpson(integrand, 0.0, phi_max, opt);
  MeasureEstimate est;
  est.value = kappa(d - 1) * integral / beta_fn(0.5, 0.5 * (d - 1));
  est.method = Method::quadrature;
  return est;
}

BallPairConstants ball_pair_bound_constants(int d) {
  require_measure_dim(d);
  if (d < 3) throw InvalidInput("ball pair bound constants need d >= 3");
  const double bperp = beta_fn(0.5 * (d - 1), 0.5);
  const double bhalf = beta_fn(0.5 * d, 0.5);
  BallPairConstants c{};
  c.c1 = 2.0 * std::pow(4.0, 0.5 * (d - 1)) / ((d - 1) * bperp);
  c.c2 = 2.0 * std::pow(4.0, 0.5 * (d + 1)) / ((d + 1) * bperp);
  c.c3 = c.c1 * kappa(d - 1) * beta_fn(0.5 * d, 0.5 * d) / bhalf;
  c.c4 = c.c2 * kappa(d - 1) * beta_fn(0.5 * d, 0.5 * d + 1.0) / bhalf;
  return c;
}

double projected_axis_sine(const Direction& d1, const Direction& d2, const Direction& dir) {
  if (d1.dim() != 3 || d2.dim() != 3 || dir.dim() != 3) throw InvalidInput("projected area needs d = 3");
  const Vec v1 = complement_projection(dir, d1.vec());
  const Vec v2 = complement_projection(dir, d2.vec());
  const double cx = v1[1] * v2[2] - v1[2] * v2[1];
  const double cy = v1[2] * v2[0] - v1[0] * v2[2];
  const double cz = v1[0] * v2[1] - v1[1] * v2[0];
  const double n1 = norm(v1), n2 = norm(v2);
  if (n1 == 0.0 || n2 == 0.0) return 0.0;
  return std::sqrt(cx * cx + cy * cy + cz * cz) / (n1 * n2);
}

ProjectedArea cylinder_pair_projected_area(const Line& l1, const Line& l2, const Direction& dir) {
  if (l1.dim() != 3 || l2.dim() != 3 || dir.dim() != 3) throw InvalidInput("projected area needs d = 3");
  const Vec v1 = complement_projection(dir, l1.dir.vec());
  const Vec v2 = complement_projection(dir, l2.dir.vec());
  const double n1 = norm(v1), n2 = norm(v2);
  ProjectedArea out;
  if (n1 < 1e-12 || n2 < 1e-12) {
    // The view is along one of the axes; its projection is a disk, not a strip.
    out.kind = ProjectedArea::Kind::degenerate;
    out.area = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double cx = v1[1] * v2[2] - v1[2] * v2[1];
  const double cy = v1[2] * v2[0] - v1[0] * v2[2];
  const double cz = v1[0] * v2[1] - v1[1] * v2[0];
  const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  if (cross <= 1e-12 * n1 * n2) {
    out.kind = ProjectedArea::Kind::divergent;
    out.area = std::numeric_limits<double>::infinity();
    return out;
  }
  out.area = 4.0 * n1 * n2 / cross;
  return out;
}

MeasureEstimate cylinder_pair_truncated_measure(const Line& l1, const Line& l2, double eps) {
  if (l1.dim() != 3 || l2.dim() != 3) throw InvalidInput("truncated measure needs d = 3");
  if (!(eps > 0.0 && eps <= 1.0)) throw InvalidInput("eps must lie in (0, 1]");
  MeasureEstimate est;
  est.method = Method::quadrature;
  const Vec& a = l1.dir.vec();
  const double cb = std::clamp(dot(a, l2.dir.vec()), -1.0, 1.0);
  const double sb2 = 1.0 - cb * cb;
  if (sb2 <= 1e-24) return est;  // parallel axes: projections never cross
  const double sb = std::sqrt(sb2);
  const double beta = std::acos(cb);
  const double e2 = eps * eps;

  // Directions l = s n + sqrt(1 - s^2)(cos(phi) a + sin(phi) b) with n normal to
  // both axes. Then the projected sine is s sin(beta) / sqrt((1 - cA)(1 - cB)),
  // c = 1 - s^2, A = cos^2 phi, B = cos^2(phi - beta), and the constraint
  // becomes a convex quadratic inequality Q(c) <= 0.
  auto inner = [&](double phi) {
    const double A = std::cos(phi) * std::cos(phi);
    const double B = std::cos(phi - beta) * std::cos(phi - beta);
    const double qa = e2 * A * B;
    const double qb = sb2 - e2 * (A + B);
    const double qc = e2 - sb2;
    double clo, chi;
    if (qa <= 1e-300) {
      if (qb == 0.0) {
        if (qc > 0.0) return 0.0;
        clo = 0.0;
        chi = 1.0;
      } else if (qb > 0.0) {
        clo = 0.0;
        chi = -qc / qb;
      } else {
        clo = -qc / qb;
        chi = 1.0;
      }
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc < 0.0) return 0.0;
      const double sq = std::sqrt(disc);
      const double t = -0.5 * (qb + std::copysign(sq, qb));
      double r1 = t / qa;
      double r2 = t != 0.0 ? qc / t : 0.0;
      if (r1 > r2) std::swap(r1, r2);
      clo = r1;
      chi = r2;
    }
    clo = std::max(clo, 0.0);
    chi = std::min(chi, 1.0);
    if (clo >= chi) return 0.0;
    const double s_lo = std::max(std::sqrt(1.0 - chi), 1e-30);
    const double s_hi = std::sqrt(1.0 - clo);
    if (s_lo >= s_hi) return 0.0;
    // In tau = log s the integrand s * (4 / sine) is smooth and bounded.
    auto f = [&](double tau) {
      const double s = std::exp(tau);
      const double c = 1.0 - s * s;
      return 4.0 * std::sqrt((1.0 - c * A) * (1.0 - c * B)) / sb;
    };
    QuadratureOptions opt;
    opt.rel_tol = 1e-11;
    return adaptive_simpson(f, std::log(s_lo), std::log(s_hi), opt);
  };
  // phi = a + (b - a)(3t^2 - 2t^3) flattens the phi log(phi) behavior of the
  // inner integral next to the breakpoints, where a projected axis vanishes.
  auto smoothed = [&](double a, double b) {
    return [&, a, b](double t) {
      const double phi = a + (b - a) * t * t * (3.0 - 2.0 * t);
      return inner(phi) * 6.0 * (b - a) * t * (1.0 - t);
    };
  };
  QuadratureOptions opt;
  opt.rel_tol = 1e-9;
  const double total = adaptive_simpson(smoothed(0.0, beta), 0.0, 1.0, opt) +
                       adaptive_simpson(smoothed(beta, std::numbers::pi), 0.0, 1.0, opt);
  est.value = total / std::numbers::pi;
  return est;
}

MeasureEstimate hit_measure_mc(const std::vector<Body>& bodies, const Ball& window,
                               std::uint64_t n, std::uint64_t seed) {
  if (bodies.empty()) throw InvalidInput("at least one body is required");
  if (n == 0) throw InvalidInput("sample count must be positive");
  const int d = window.center.dim();
  require_measure_dim(d);
  if (!(window.radius > 0.0)) throw InvalidInput("window radius must be positive");
  for (const Body& b : bodies) {
    const int bd = std::visit(
        [](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Cylinder>) return x.axis.dim();
          else return x.center.dim();
        },
        b);
    if (bd != d) throw InvalidInput("body dimension mismatch");
  }
  CounterRng rng(seed, stream_id(0, 0x6d63));
  std::uint64_t hit_count = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Line line = random_line_hitting_ball(rng, window);
    bool all = true;
    for (const Body& b : bodies) {
      if (!hits(line, b)) {
        all = false;
        break;
      }
    }
    if (all) ++hit_count;
  }
  const double mw = ball_hit_measure(d, window.radius);
  const double p = static_cast<double>(hit_count) / static_cast<double>(n);
  MeasureEstimate est;
  est.value = mw * p;
  est.std_error = mw * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  est.method = Method::monte_carlo;
  est.samples = n;
  return est;
}

MeasureEstimate ball_cylinder_measure_mc(int d, double r, std::uint64_t n, std::uint64_t seed) {
  require_measure_dim(d);
  if (d < 3) throw InvalidInput("ball-cylinder estimate needs d >= 3");
  if (!(r >= 1.0) || !std::isfinite(r)) throw OutOfDomain("ball-cylinder distance must be >= 1");
  if (n == 0) throw InvalidInput("sample count must be positive");
  const Ball ball{r * Vec::unit(d, 0), 1.0};
  const Line axis{Direction::from_raw(Vec::unit(d, 1)), Vec(d)};
  // A line through the ball that meets the cylinder has |(l_3..l_d)| <= 2 / (r - 2)
  // when r > 4. Half of the directions are drawn from that band, half
  // uniformly; cap measure on the sphere projects to Lebesgue measure on the
  // ball of the last d - 2 coordinates, which makes the weights exact.
  const double w = r > 4.0 ? 2.0 / (r - 2.0) : 1.0;
  const double band_ratio = std::pow(w, -(d - 2));
  const double w_in = 1.0 / (0.5 + 0.5 * band_ratio);
  const double w_out = 2.0;
  CounterRng rng(seed, stream_id(0, 0x6263));
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const bool from_band = rng.uniform() < 0.5;
    const Vec y = uniform_in_ball(rng, d - 2, from_band ? w : 1.0);
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    const double ny = norm_sq(y);
    const double rho = std::sqrt(std::max(0.0, 1.0 - ny));
    Vec l(d);
    l[0] = rho * std::cos(phi);
    l[1] = rho * std::sin(phi);
    for (int j = 2; j < d; ++j) l[j] = y[j - 2];
    const Direction dir = Direction::from_raw(l);
    const std::vector<Vec> basis = orthobasis_complement(dir);
    const Vec off = uniform_in_ball(rng, d - 1, 1.0);
    Vec anchor = complement_projection(dir, ball.center);
    for (int j = 0; j < d - 1; ++j) anchor += off[j] * basis[j];
    const Line line{dir, anchor};
    if (dist_line_line(line, axis) <= 1.0) {
      const double wt = ny <= w * w ? w_in : w_out;
      sum += wt;
      sum_sq += wt * wt;
    }
  }
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, sum_sq / nn - mean * mean);
  const double k = kappa(d - 1);
  MeasureEstimate est;
  est.value = k * mean;
  est.std_error = k * std::sqrt(var / nn);
  est.method = Method::monte_carlo;
  est.samples = n;
  return est;
}

Bounds ball_cylinder_bounds(int d, double r) {
  require_measure_dim(d);
  if (d < 3) throw InvalidInput("ball-cylinder bounds need d >= 3");
  if (!(r >= 1.0) || !std::isfinite(r)) throw OutOfDomain("ball-cylinder distance must be >= 1");
  const double k = kappa(d - 1);
  // Upper: the cylinder is covered by B((0,i,0..), 2), i in Z. A line hitting
  // the unit ball and B_i has its projected unit disk within 3 of the
  // projected center of B_i, so each term is at most kappa_{d-1} times the
  // direction probability.
  const long T = static_cast<long>(std::ceil(std::max(1000.0, 50.0 * r)));
  double upper = 0.0;
  for (long i = -T; i <= T; ++i) {
    const double rho2 = r * r + static_cast<double>(i) * static_cast<double>(i);
    upper += k * perp_cdf(d, 9.0 / rho2);
  }
  // Tail |i| > T: I_x((d-1)/2, 1/2) <= (1 - x)^{-1/2} 2 x^{(d-1)/2} / ((d-1) B).
  const double bperp = beta_fn(0.5 * (d - 1), 0.5);
  const double xt = 9.0 / (static_cast<double>(T) * static_cast<double>(T));
  const double pref = 2.0 * k * 2.0 / ((d - 1) * bperp) / std::sqrt(1.0 - xt) *
                      std::pow(9.0, 0.5 * (d - 1));
  upper += pref * std::pow(static_cast<double>(T), -(d - 2)) / (d - 2);

  // Lower: disjoint line families through D_i = B((0,i,0..), 1/8), |i| <= floor(r).
  // A line through D_i and the unit ball has |k_1 / k_2| >= (r - 9/8) / (r + 9/8),
  // a line through D_i and D_j has |k_1 / k_2| <= 1/3, so for r > 9/4 no line
  // meets two of the families. Each term counts lines whose projected D_i
  // lies inside the projected unit disk.
  const double small = std::pow(0.125, d - 1);
  double lower = 0.0;
  if (r > 2.25) {
    const long M = static_cast<long>(std::floor(r));
    for (long i = -M; i <= M; ++i) {
      const double rho2 = r * r + static_cast<double>(i) * static_cast<double>(i);
      lower += k * small * perp_cdf(d, (0.875 * 0.875) / rho2);
    }
  } else {
    lower = k * small * perp_cdf(d, (0.875 * 0.875) / (r * r));
  }
  return Bounds{lower, upper};
}

}  // namespace cylab
