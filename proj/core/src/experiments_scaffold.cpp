#include <cmath>

#include "cylab/errors.hpp"
#include "cylab/scaffold.hpp"
#include "experiments.hpp"

namespace cylab::detail {

namespace {

Scaffold scaffold_for(const ExperimentConfig& cfg, int level) {
  return build_scaffold(cfg.d, cfg.R, level, default_offset(cfg.d, cfg.R), default_dir2(cfg.d));
}

void scaffold_constants(ExperimentOutput& out, const Scaffold& s) {
  out.summary.emplace_back("N", s.N);
  out.summary.emplace_back("radius", s.radius);
  out.summary.emplace_back("box_side", s.boxes.front().side);
  out.summary.emplace_back("piece_lo", s.piece1.lo);
  out.summary.emplace_back("piece_hi", s.piece1.hi);
}

}  // namespace

ExperimentOutput run_scaffold_audit(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"d", "R", "m", "n", "samples", "violations", "slope_samples", "max_slope_piece_piece",
                 "min_slope_piece_box"};
  const Scaffold a = scaffold_for(cfg, cfg.m);
  const Scaffold b = scaffold_for(cfg, cfg.n);
  const DisjointnessReport rep = verify_disjointness(a, b, cfg.samples, cfg.seed);
  out.rows.push_back({static_cast<double>(cfg.d), cfg.R, static_cast<double>(cfg.m), static_cast<double>(cfg.n),
                      static_cast<double>(rep.samples), static_cast<double>(rep.violations),
                      static_cast<double>(rep.slope_samples), rep.max_slope_piece_piece, rep.min_slope_piece_box});
  scaffold_constants(out, a);
  out.summary.emplace_back("violations", static_cast<double>(rep.violations));
  return out;
}

ExperimentOutput run_angle_claim(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"d", "R", "m", "samples", "max_cosine"};
  const Scaffold s = scaffold_for(cfg, cfg.m);
  const double c = max_angle_cosine(s, cfg.samples, cfg.seed);
  out.rows.push_back({static_cast<double>(cfg.d), cfg.R, static_cast<double>(cfg.m),
                      static_cast<double>(cfg.samples), c});
  scaffold_constants(out, s);
  out.summary.emplace_back("max_cosine", c);
  out.summary.emplace_back("claimed_bound", 1809.0 / (1600.0 * std::sqrt(2.0)));
  return out;
}

ExperimentOutput run_x_positive(const ExperimentConfig& cfg) {
  ExperimentOutput out;
  out.columns = {"m", "p", "stderr", "hits", "replicas", "mean_lines"};
  const Scaffold s = scaffold_for(cfg, cfg.m);
  const ConnectionEstimate e = estimate_connection_probability(cfg.u, s, cfg.replicas, cfg.seed, cfg.threads);
  const auto masses = family_masses(s, cfg.samples);
  out.rows.push_back({static_cast<double>(cfg.m), e.p, e.std_error, static_cast<double>(e.hits),
                      static_cast<double>(e.replicas), e.mean_lines});
  scaffold_constants(out, s);
  for (const FamilyMass& f : masses) {
    out.summary.emplace_back("mass[" + f.label + "]", f.mass);
    out.summary.emplace_back("mass_stderr[" + f.label + "]", f.std_error);
  }
  out.summary.emplace_back("p", e.p);
  out.summary.emplace_back("p_stderr", e.std_error);
  return out;
}

}  // namespace cylab::detail
