#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cylab/geometry.hpp"
#include "cylab/rng.hpp"

namespace cylab {

struct Window {
  Ball ball;
};

// Lines of one Poisson line process realization restricted to the lines
// hitting a union of window balls. Storage is flat for cache-friendly scans.
class LineSample {
 public:
  LineSample(int dim, double u, std::vector<Ball> windows, std::uint64_t seed,
             std::uint64_t replica);

  int dim() const { return dim_; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  double intensity() const { return u_; }
  const std::vector<Ball>& windows() const { return windows_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t replica() const { return replica_; }

  Line line(std::size_t i) const;
  const double* dir_data(std::size_t i) const { return dirs_.data() + i * dim_; }
  const double* anchor_data(std::size_t i) const { return anchors_.data() + i * dim_; }

  void push(const Line& line);

 private:
  int dim_;
  double u_;
  std::vector<Ball> windows_;
  std::uint64_t seed_;
  std::uint64_t replica_;
  std::size_t count_ = 0;
  std::vector<double> dirs_;
  std::vector<double> anchors_;
};

// Line drawn from the normalized motion-invariant measure restricted to
// the lines hitting ball.
Line random_line_hitting_ball(CounterRng& rng, const Ball& ball);

// Poisson line process of intensity u restricted to lines hitting the window.
LineSample sample_line_process(double u, const Window& window, std::uint64_t seed,
                               std::uint64_t replica);

// Restriction to lines hitting any of the balls. Lines hitting several
// balls are kept once, attributed to the first ball they hit.
LineSample sample_line_process_union(double u, std::span<const Ball> balls, std::uint64_t seed,
                                     std::uint64_t replica);

// Expected number of lines hitting a ball of radius rho.
double expected_line_count(int d, double u, double rho);

double vacancy_probability(int d, double u);
// Cov(1{x vacant}, 1{y vacant}) for |x - y| = r, unit cylinders.
double vacancy_covariance_exact(int d, double u, double r);

}  // namespace cylab
