#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cylab/connectivity.hpp"
#include "cylab/errors.hpp"
#include "cylab/lineproc.hpp"
#include "cylab/measure.hpp"
#include "cylab/parallel.hpp"
#include "cylab/special.hpp"
#include "experiments.hpp"

namespace cylab::detail {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec on_axis(int d, double x) {
  Vec v(d);
  v[0] = x;
  return v;
}

void add_fit(ExperimentOutput& out, const std::string& name, const std::vector<std::pair<double, double>>& pts) {
  std::vector<std::pair<double, double>> pos;
  for (const auto& p : pts) {
    if (p.first > 0.0 && p.second > 0.0) pos.push_back(p);
  }
  if (pos.size() < 2) {
    out.summary.emplace_back(name + "_exponent", kNaN);
    out.summary.emplace_back(name + "_stderr", kNaN);
    return;
  }
  const FitResult f = fit_power_law(pos);
  out.summary.emplace_back(name + "_exponent", f.exponent);
  out.summary.emplace_back(name + "_intercept", f.intercept);
  out.summary.emplace_back(name + "_stderr", f.std_error);
  out.summary.emplace_back(name + "_points", static_cast<double>(f.points));
}

}  // namespace

ExperimentOutput run_normalization(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"rho", "replica", "count"};
  for (std::size_t g = 0; g < cfg.rho_list.size(); ++g) {
    const double rho = cfg.rho_list[g];
    const Window w{Ball{Vec(cfg.d), rho}};
    std::vector<double> counts(cfg.replicas);
    parallel_for(cfg.replicas, cfg.threads, [&](std::size_t i) {
      counts[i] = static_cast<double>(sample_line_process(cfg.u, w, cfg.seed, g * cfg.replicas + i).size());
    });
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      out.rows.push_back({rho, static_cast<double>(i), counts[i]});
      sum += counts[i];
      sq += counts[i] * counts[i];
    }
    const double n = static_cast<double>(counts.size());
    const double mean = sum / n;
    const double var = n > 1 ? (sq - n * mean * mean) / (n - 1) : 0.0;
    const double expected = expected_line_count(cfg.d, cfg.u, rho);
    out.summary.emplace_back(tagged("mean", "rho", rho), mean);
    out.summary.emplace_back(tagged("stderr", "rho", rho), std::sqrt(std::max(var, 0.0) / n));
    out.summary.emplace_back(tagged("expected", "rho", rho), expected);
    out.summary.emplace_back(tagged("rel_error", "rho", rho), std::abs(mean - expected) / expected);
  }
  out.summary.emplace_back("kappa_d_minus_1", kappa(cfg.d - 1));
  return out;
}

ExperimentOutput run_rhombus(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"config", "sine", "formula", "mc", "mc_stderr", "rel_error"};
  const std::size_t n = cfg.replicas;
  std::vector<std::vector<double>> rows(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    CounterRng rng(cfg.seed, stream_id(i, 0x7268));
    Line l1 = canonicalize(uniform_in_ball(rng, 3, 5.0), uniform_unit_vector(rng, 3));
    Line l2 = canonicalize(uniform_in_ball(rng, 3, 5.0), uniform_unit_vector(rng, 3));
    Direction view = Direction::from_raw(uniform_unit_vector(rng, 3));
    // Redraw near-parallel projections whose rhombus would dwarf the sampling box.
    while (projected_axis_sine(l1.dir, l2.dir, view) < 0.2) {
      l1 = canonicalize(uniform_in_ball(rng, 3, 5.0), uniform_unit_vector(rng, 3));
      l2 = canonicalize(uniform_in_ball(rng, 3, 5.0), uniform_unit_vector(rng, 3));
      view = Direction::from_raw(uniform_unit_vector(rng, 3));
    }
    const ProjectedArea pa = cylinder_pair_projected_area(l1, l2, view);
    if (pa.kind != ProjectedArea::Kind::finite) throw NumericFailure("unexpected non-finite projected area");
    // Monte Carlo in the projection plane: both cylinders become strips of half-width 1.
    const std::vector<Vec> e = orthobasis_complement(view);
    auto proj = [&](const Vec& v) { return std::pair<double, double>{dot(v, e[0]), dot(v, e[1])}; };
    auto [a1x, a1y] = proj(l1.anchor);
    auto [a2x, a2y] = proj(l2.anchor);
    auto [v1x, v1y] = proj(l1.dir.vec());
    auto [v2x, v2y] = proj(l2.dir.vec());
    const double n1 = std::hypot(v1x, v1y), n2 = std::hypot(v2x, v2y);
    v1x /= n1, v1y /= n1, v2x /= n2, v2y /= n2;
    const double cr = v1x * v2y - v1y * v2x;
    const double sine = std::abs(cr);
    // Crossing point of the projected axes.
    const double t = ((a2x - a1x) * v2y - (a2y - a1y) * v2x) / cr;
    const double cx = a1x + t * v1x, cy = a1y + t * v1y;
    const double h = 1.01 * 2.0 / sine;
    std::uint64_t hit = 0;
    for (std::uint64_t k = 0; k < cfg.samples; ++k) {
      const double px = cx + h * (2.0 * rng.uniform() - 1.0);
      const double py = cy + h * (2.0 * rng.uniform() - 1.0);
      const double d1 = std::abs((px - a1x) * v1y - (py - a1y) * v1x);
      const double d2 = std::abs((px - a2x) * v2y - (py - a2y) * v2x);
      if (d1 <= 1.0 && d2 <= 1.0) ++hit;
    }
    const double area = 4.0 * h * h;
    const double p = static_cast<double>(hit) / static_cast<double>(cfg.samples);
    const double mc = area * p;
    const double se = area * std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.samples));
    rows[i] = {static_cast<double>(i), sine, pa.area, mc, se, std::abs(mc - pa.area) / pa.area};
  });
  double worst = 0.0;
  for (auto& r : rows) {
    worst = std::max(worst, r[5]);
    out.rows.push_back(std::move(r));
  }
  out.summary.emplace_back("max_rel_error", worst);
  return out;
}

ExperimentOutput run_divergence(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"k", "eps", "value", "increment"};
  const Line l1{Direction::from_raw(Vec::unit(3, 0)), Vec(3)};
  const Line l2{Direction::from_raw(Vec::unit(3, 1)), Vec(3)};
  const std::size_t n = static_cast<std::size_t>(cfg.n);
  std::vector<double> vals(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    vals[i] = cylinder_pair_truncated_measure(l1, l2, std::pow(10.0, -static_cast<double>(i + 1))).value;
  });
  double min_inc = std::numeric_limits<double>::infinity(), max_inc = -min_inc;
  for (std::size_t i = 0; i < n; ++i) {
    const double inc = i == 0 ? kNaN : vals[i] - vals[i - 1];
    if (i > 0) {
      min_inc = std::min(min_inc, inc);
      max_inc = std::max(max_inc, inc);
    }
    out.rows.push_back({static_cast<double>(i + 1), std::pow(10.0, -static_cast<double>(i + 1)), vals[i], inc});
  }
  out.summary.emplace_back("min_increment", n > 1 ? min_inc : kNaN);
  out.summary.emplace_back("max_increment", n > 1 ? max_inc : kNaN);
  out.summary.emplace_back("asymptotic_increment", 8.0 / (2.0 * std::numbers::pi) * std::log(10.0));
  return out;
}

ExperimentOutput run_ball_pair(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"r", "quadrature", "mc", "mc_stderr", "lower", "upper"};
  const int d = cfg.d;
  const BallPairConstants c = ball_pair_bound_constants(d);
  const std::size_t n = cfg.r_list.size();
  std::vector<std::vector<double>> rows(n);
  parallel_for(n, cfg.threads, [&](std::size_t g) {
    const double r = cfg.r_list[g];
    const MeasureEstimate q = ball_pair_hit_measure(d, r);
    const Ball bx{on_axis(d, 0.0), 1.0}, by{on_axis(d, r), 1.0};
    const MeasureEstimate mc = hit_measure_mc({bx, by}, bx, cfg.samples, stream_id(cfg.seed, 0x100 + g));
    const double lower = c.c3 * std::pow(r, 1.0 - d);
    rows[g] = {r, q.value, mc.value, mc.std_error, lower, lower + c.c4 * std::pow(r, -1.0 - d)};
  });
  std::vector<std::pair<double, double>> pq, pm;
  for (auto& row : rows) {
    pq.emplace_back(row[0], row[1]);
    pm.emplace_back(row[0], row[2]);
    out.rows.push_back(std::move(row));
  }
  out.summary.emplace_back("C1", c.c1);
  out.summary.emplace_back("C2", c.c2);
  out.summary.emplace_back("C3", c.c3);
  out.summary.emplace_back("C4", c.c4);
  out.summary.emplace_back("kappa_d_minus_1", kappa(d - 1));
  add_fit(out, "quadrature", pq);
  add_fit(out, "mc", pm);
  return out;
}

ExperimentOutput run_ball_cyl(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"r", "mc", "mc_stderr", "lower", "upper"};
  const int d = cfg.d;
  const std::size_t n = cfg.r_list.size();
  std::vector<std::vector<double>> rows(n);
  parallel_for(n, cfg.threads, [&](std::size_t g) {
    const double r = cfg.r_list[g];
    const MeasureEstimate mc = ball_cylinder_measure_mc(d, r, cfg.samples, stream_id(cfg.seed, 0x200 + g));
    const Bounds b = ball_cylinder_bounds(d, r);
    rows[g] = {r, mc.value, mc.std_error, b.lower, b.upper};
  });
  std::vector<std::pair<double, double>> pts;
  std::size_t inside = 0;
  for (auto& row : rows) {
    pts.emplace_back(row[0], row[1]);
    if (row[3] <= row[1] && row[1] <= row[4]) ++inside;
    out.rows.push_back(std::move(row));
  }
  out.summary.emplace_back("kappa_d_minus_1", kappa(d - 1));
  out.summary.emplace_back("points_within_bounds", static_cast<double>(inside));
  add_fit(out, "mc", pts);
  return out;
}

ExperimentOutput run_covariance(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"r", "exact", "scaled", "empirical", "empirical_stderr"};
  const int d = cfg.d;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t g = 0; g < cfg.r_list.size(); ++g) {
    const double r = cfg.r_list[g];
    const double exact = vacancy_covariance_exact(d, cfg.u, r);
    const double scaled = std::pow(r, d - 1.0) * exact;
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
    const Vec x = on_axis(d, -0.5 * r), y = on_axis(d, 0.5 * r);
    const std::vector<Ball> balls{Ball{x, 1.0}, Ball{y, 1.0}};
    std::vector<unsigned char> ix(cfg.replicas), iy(cfg.replicas);
    parallel_for(cfg.replicas, cfg.threads, [&](std::size_t i) {
      const LineSample s = sample_line_process_union(cfg.u, balls, cfg.seed, g * cfg.replicas + i);
      bool vx = true, vy = true;
      for (std::size_t k = 0; k < s.size(); ++k) {
        const Line l = s.line(k);
        if (dist_point_line(x, l) <= 1.0) vx = false;
        if (dist_point_line(y, l) <= 1.0) vy = false;
      }
      ix[i] = vx;
      iy[i] = vy;
    });
    const double n = static_cast<double>(cfg.replicas);
    double a = 0.0, b = 0.0, c = 0.0;
    for (std::size_t i = 0; i < cfg.replicas; ++i) {
      a += ix[i];
      b += iy[i];
      c += ix[i] * iy[i];
    }
    a /= n, b /= n, c /= n;
    const double cov = c - a * b;
    // Influence-function standard error of the plug-in covariance.
    double s2 = 0.0;
    for (std::size_t i = 0; i < cfg.replicas; ++i) {
      const double psi = ix[i] * iy[i] - b * ix[i] - a * iy[i] - (c - 2.0 * a * b);
      s2 += psi * psi;
    }
    const double se = cfg.replicas > 1 ? std::sqrt(s2 / (n - 1.0) / n) : kNaN;
    out.rows.push_back({r, exact, scaled, cov, se});
  }
  out.summary.emplace_back("vacancy_probability", vacancy_probability(d, cfg.u));
  out.summary.emplace_back("min_scaled", lo);
  out.summary.emplace_back("max_scaled", hi);
  return out;
}

ExperimentOutput run_lattice_sum(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"distance", "trunc", "value", "stderr", "exact", "scaled"};
  const int d = cfg.d, n = cfg.n;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t g = 0; g < cfg.r_list.size(); ++g) {
    const double r = cfg.r_list[g];
    LatticePoint z0(d, 0), zn(d, 0);
    zn[0] = static_cast<long>(r);
    const double trunc = 2.0 * r;
    const LatticeSum s = lattice_conv_sum(d, n, z0, zn, trunc, stream_id(cfg.seed, 0x300 + g), cfg.samples);
    const double scaled = s.value * std::pow(r, static_cast<double>(d - n));
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
    out.rows.push_back({r, trunc, s.value, s.std_error, s.exact ? 1.0 : 0.0, scaled});
  }
  out.summary.emplace_back("min_scaled", lo);
  out.summary.emplace_back("max_scaled", hi);
  out.summary.emplace_back("scaled_ratio", hi / lo);
  return out;
}

}  // namespace cylab::detail
