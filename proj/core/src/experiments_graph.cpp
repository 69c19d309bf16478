#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cylab/connectivity.hpp"
#include "cylab/errors.hpp"
#include "cylab/lineproc.hpp"
#include "cylab/measure.hpp"
#include "cylab/parallel.hpp"
#include "experiments.hpp"

namespace cylab::detail {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec on_axis(int d, double x) {
  Vec v(d);
  v[0] = x;
  return v;
}

// Censored diameter over the core lines. Pairs at distance at most one are
// settled from the core neighbor sets alone; the full graph is only built
// when some pair is farther apart.
int core_diameter(const LineSample& s, const std::vector<std::size_t>& core, double radius) {
  const std::size_t k = core.size();
  if (k < 2) return -1;
  const std::size_t words = (s.size() + 63) / 64;
  std::vector<std::uint64_t> bits(k * words, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t w : neighbors_in_sample(s, core[i], radius)) bits[i * words + w / 64] |= 1ull << (w % 64);
  }
  int best = -1;
  bool settled = true;
  for (std::size_t i = 0; i < k && settled; ++i) {
    const std::uint64_t* bi = &bits[i * words];
    for (std::size_t j = i + 1; j < k; ++j) {
      const std::size_t b = core[j];
      if ((bi[b / 64] >> (b % 64)) & 1ull) {
        best = std::max(best, 0);
        continue;
      }
      const std::uint64_t* bj = &bits[j * words];
      bool common = false;
      for (std::size_t w = 0; w < words && !common; ++w) common = (bi[w] & bj[w]) != 0;
      if (!common) {
        settled = false;
        break;
      }
      best = std::max(best, 1);
    }
  }
  if (settled) return best;
  const IntersectionGraph g = build_graph(s, radius);
  const auto dm = censored_diameter(g, core);
  return dm ? *dm : -1;
}

}  // namespace

ExperimentOutput run_chain_decay(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"r", "hits", "replicas", "frequency", "stderr", "closed_form"};
  const int d = cfg.d;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t g = 0; g < cfg.r_list.size(); ++g) {
    const double r = cfg.r_list[g];
    const Vec x = on_axis(d, -0.5 * r), y = on_axis(d, 0.5 * r);
    std::vector<unsigned char> hit(cfg.replicas, 0);
    parallel_for(cfg.replicas, cfg.threads, [&](std::size_t i) {
      const std::uint64_t rep = g * cfg.replicas + i;
      if (cfg.n <= 2) {
        const std::vector<Ball> balls{Ball{x, 1.0}, Ball{y, 1.0}};
        hit[i] = chain_event(x, y, cfg.n, sample_line_process_union(cfg.u, balls, cfg.seed, rep), 1.0);
      } else {
        const Window w{Ball{Vec(d), 2.0 * r + 20.0}};
        hit[i] = chain_event(x, y, cfg.n, sample_line_process(cfg.u, w, cfg.seed, rep), 1.0);
      }
    });
    std::uint64_t h = 0;
    for (unsigned char v : hit) h += v;
    const double n = static_cast<double>(cfg.replicas);
    const double f = static_cast<double>(h) / n;
    const double closed = (cfg.n == 1 && r >= 4.0) ? -std::expm1(-cfg.u * ball_pair_hit_measure(d, r).value) : kNaN;
    out.rows.push_back({r, static_cast<double>(h), n, f, std::sqrt(f * (1.0 - f) / n), closed});
    if (h > 0) pts.emplace_back(r, f);
  }
  if (pts.size() >= 2) {
    const FitResult fit = fit_power_law(pts);
    out.summary.emplace_back("exponent", fit.exponent);
    out.summary.emplace_back("exponent_stderr", fit.std_error);
    out.summary.emplace_back("points", static_cast<double>(fit.points));
  } else {
    out.summary.emplace_back("exponent", kNaN);
    out.summary.emplace_back("exponent_stderr", kNaN);
    out.summary.emplace_back("points", static_cast<double>(pts.size()));
  }
  out.summary.emplace_back("predicted_exponent", -(static_cast<double>(d) - cfg.n));
  return out;
}

ExperimentOutput run_diameter3d(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"rho", "replica", "lines", "core", "diameter", "connecting"};
  const Cylinder c1 = make_cylinder(Line{Direction::from_raw(Vec::unit(3, 0)), Vec(3)}, 1.0);
  const Cylinder c2 = make_cylinder(Line{Direction::from_raw(Vec::unit(3, 1)), Vec(3)}, 1.0);
  std::vector<double> means;
  for (std::size_t g = 0; g < cfg.rho_list.size(); ++g) {
    const double rho = cfg.rho_list[g];
    std::vector<std::vector<double>> rows(cfg.replicas);
    parallel_for(cfg.replicas, cfg.threads, [&](std::size_t i) {
      const LineSample s = sample_line_process(cfg.u, Window{Ball{Vec(3), rho}}, cfg.seed, g * cfg.replicas + i);
      const auto core = lines_hitting(s, Ball{Vec(3), 0.25 * rho});
      const int diam = core_diameter(s, core, 1.0);
      rows[i] = {rho, static_cast<double>(i), static_cast<double>(s.size()), static_cast<double>(core.size()),
                 static_cast<double>(diam), static_cast<double>(connecting_line_count(s, c1, c2))};
    });
    double ones = 0.0, sum = 0.0, sq = 0.0;
    for (auto& row : rows) {
      ones += row[4] == 1.0;
      sum += row[5];
      sq += row[5] * row[5];
      out.rows.push_back(std::move(row));
    }
    const double n = static_cast<double>(cfg.replicas);
    const double mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sq - n * mean * mean) / (n - 1)) : 0.0;
    means.push_back(mean);
    out.summary.emplace_back(tagged("fraction_diameter_one", "rho", rho), ones / n);
    out.summary.emplace_back(tagged("mean_connecting", "rho", rho), mean);
    out.summary.emplace_back(tagged("connecting_stderr", "rho", rho), std::sqrt(var / n));
  }
  if (means.size() >= 2) out.summary.emplace_back("connecting_growth", means.back() / means.front());
  return out;
}

ExperimentOutput run_diameter4d(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"rho", "replica", "lines", "core", "pairs", "le2", "eq2"};
  const std::uint64_t pairs_per = cfg.samples;
  for (std::size_t g = 0; g < cfg.rho_list.size(); ++g) {
    const double rho = cfg.rho_list[g];
    std::vector<std::vector<double>> rows(cfg.replicas);
    parallel_for(cfg.replicas, cfg.threads, [&](std::size_t i) {
      const std::uint64_t rep = g * cfg.replicas + i;
      const LineSample s = sample_line_process(cfg.u, Window{Ball{Vec(4), rho}}, cfg.seed, rep);
      const auto core = lines_hitting(s, Ball{Vec(4), 0.25 * rho});
      std::uint64_t pairs = 0, le2 = 0, eq2 = 0;
      if (core.size() >= 2) {
        CounterRng rng(cfg.seed, stream_id(rep, 0x7061));
        std::map<std::size_t, std::vector<std::size_t>> nbr;
        auto neighbors = [&](std::size_t v) -> const std::vector<std::size_t>& {
          auto it = nbr.find(v);
          if (it == nbr.end()) it = nbr.emplace(v, neighbors_in_sample(s, v, 1.0)).first;
          return it->second;
        };
        for (std::uint64_t k = 0; k < pairs_per; ++k) {
          const std::size_t a = core[rng.below(core.size())];
          std::size_t b = a;
          while (b == a) b = core[rng.below(core.size())];
          const auto c = cdist_up_to_two(s, a, b, neighbors(a), neighbors(b), 1.0);
          ++pairs;
          if (c) {
            ++le2;
            if (*c == 2) ++eq2;
          }
        }
      }
      rows[i] = {rho, static_cast<double>(i), static_cast<double>(s.size()), static_cast<double>(core.size()),
                 static_cast<double>(pairs), static_cast<double>(le2), static_cast<double>(eq2)};
    });
    double pairs = 0.0, le2 = 0.0, eq2 = 0.0;
    for (auto& row : rows) {
      pairs += row[4];
      le2 += row[5];
      eq2 += row[6];
      out.rows.push_back(std::move(row));
    }
    out.summary.emplace_back(tagged("pairs", "rho", rho), pairs);
    out.summary.emplace_back(tagged("fraction_le2", "rho", rho), pairs > 0 ? le2 / pairs : kNaN);
    out.summary.emplace_back(tagged("count_eq2", "rho", rho), eq2);
  }
  return out;
}

}  // namespace cylab::detail
