#include "cylab/lineproc.hpp"

#include <cmath>

#include "cylab/errors.hpp"
#include "cylab/measure.hpp"
#include "cylab/special.hpp"

namespace cylab {

namespace {
constexpr std::uint64_t kCountTag = 0;
constexpr std::uint64_t kLineTag = 1;

void check_intensity(double u) {
  if (!(u >= 0.0) || !std::isfinite(u)) throw InvalidInput("intensity must be finite and nonnegative");
}
}  // namespace

LineSample::LineSample(int dim, double u, std::vector<Ball> windows, std::uint64_t seed,
                       std::uint64_t replica)
    : dim_(dim), u_(u), windows_(std::move(windows)), seed_(seed), replica_(replica) {}

Line LineSample::line(std::size_t i) const {
  Vec dir = Vec::from({dir_data(i), static_cast<std::size_t>(dim_)});
  Vec anchor = Vec::from({anchor_data(i), static_cast<std::size_t>(dim_)});
  return Line{Direction::trusted(dir), anchor};
}

void LineSample::push(const Line& line) {
  if (line.dim() != dim_) throw InvalidInput("line dimension mismatch");
  dirs_.insert(dirs_.end(), line.dir.vec().data(), line.dir.vec().data() + dim_);
  anchors_.insert(anchors_.end(), line.anchor.data(), line.anchor.data() + dim_);
  ++count_;
}

Line random_line_hitting_ball(CounterRng& rng, const Ball& ball) {
  const int d = ball.center.dim();
  const Direction dir = Direction::from_raw(uniform_unit_vector(rng, d));
  const std::vector<Vec> basis = orthobasis_complement(dir);
  const Vec y = uniform_in_ball(rng, d - 1, ball.radius);
  Vec anchor = complement_projection(dir, ball.center);
  for (int i = 0; i < d - 1; ++i) anchor += y[i] * basis[i];
  return Line{dir, anchor};
}

double expected_line_count(int d, double u, double rho) {
  return u * kappa(d - 1) * std::pow(rho, d - 1);
}

LineSample sample_line_process_union(double u, std::span<const Ball> balls, std::uint64_t seed,
                                     std::uint64_t replica) {
  check_intensity(u);
  if (balls.empty()) throw InvalidInput("at least one window ball is required");
  const int d = balls[0].center.dim();
  if (d < 2) throw InvalidInput("dimension must be at least 2");
  for (const Ball& b : balls) {
    if (b.center.dim() != d) throw InvalidInput("window dimension mismatch");
    if (!(b.radius > 0.0) || !std::isfinite(b.radius)) throw InvalidInput("window radius must be positive");
  }
  LineSample sample(d, u, {balls.begin(), balls.end()}, seed, replica);
  for (std::size_t k = 0; k < balls.size(); ++k) {
    CounterRng count_rng(seed, stream_id(replica, kCountTag + 16 * k));
    CounterRng line_rng(seed, stream_id(replica, kLineTag + 16 * k));
    const std::uint64_t n = count_rng.poisson(expected_line_count(d, u, balls[k].radius));
    for (std::uint64_t i = 0; i < n; ++i) {
      const Line line = random_line_hitting_ball(line_rng, balls[k]);
      bool earlier = false;
      for (std::size_t j = 0; j < k && !earlier; ++j) earlier = hits(line, balls[j]);
      if (!earlier) sample.push(line);
    }
  }
  return sample;
}

LineSample sample_line_process(double u, const Window& window, std::uint64_t seed,
                               std::uint64_t replica) {
  return sample_line_process_union(u, std::span<const Ball>(&window.ball, 1), seed, replica);
}

double vacancy_probability(int d, double u) {
  check_intensity(u);
  return std::exp(-u * kappa(d - 1));
}

double vacancy_covariance_exact(int d, double u, double r) {
  check_intensity(u);
  if (!(r >= 0.0)) throw InvalidInput("distance must be nonnegative");
  const double k = kappa(d - 1);
  const double m = ball_pair_hit_measure(d, r).value;
  return std::exp(-2.0 * u * k) * std::expm1(u * m);
}

}  // namespace cylab
