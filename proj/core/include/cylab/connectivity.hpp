#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cylab/geometry.hpp"
#include "cylab/lineproc.hpp"

namespace cylab {

// Undirected graph on the cylinders of a sample; edge iff the axes are
// within 2 * radius. Adjacency is stored in sorted compressed rows.
class IntersectionGraph {
 public:
  IntersectionGraph() = default;
  IntersectionGraph(std::size_t n, double radius,
                    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  double radius() const { return radius_; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }
  std::span<const std::uint32_t> neighbors(std::size_t v) const;
  bool adjacent(std::size_t a, std::size_t b) const;

 private:
  double radius_ = 1.0;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> neighbors_;
};

IntersectionGraph build_graph(const LineSample& sample, double radius, int threads = 1);

// Connectivity distance: fewest intermediate cylinders on a chain from a
// to b. nullopt if b is unreachable.
std::optional<int> cdist(const IntersectionGraph& g, std::size_t a, std::size_t b);

// Largest cdist over reachable pairs of the given vertices; nullopt when no
// pair is reachable.
std::optional<int> censored_diameter(const IntersectionGraph& g, std::span<const std::size_t> subset);
std::optional<int> censored_diameter(const IntersectionGraph& g);

// Indices of sample lines whose cylinder axis meets the ball.
std::vector<std::size_t> lines_hitting(const LineSample& sample, const Ball& ball);

// Indices of lines whose axis is within 2 * radius of line i, excluding i.
std::vector<std::size_t> neighbors_in_sample(const LineSample& sample, std::size_t i, double radius);

// cdist(a, b) if it is at most 2, nullopt otherwise. na and nb are the
// sorted neighbor lists of a and b.
std::optional<int> cdist_up_to_two(const LineSample& sample, std::size_t a, std::size_t b,
                                   std::span<const std::size_t> na,
                                   std::span<const std::size_t> nb, double radius);

std::size_t connecting_line_count(const LineSample& sample, const Cylinder& c1, const Cylinder& c2);

// Whether some chain of at most n distinct cylinders of the sample leads
// from a cylinder covering x to one covering y. Chains of one or two
// cylinders only involve lines hitting B(x, radius) or B(y, radius); longer
// chains need a window centered at the midpoint with radius at least
// 2|x - y| + 20.
bool chain_event(const Vec& x, const Vec& y, int n, const LineSample& sample, double radius);

using LatticePoint = std::vector<long>;

struct LatticeSum {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
  std::uint64_t samples = 0;
};

// Sum over z_1..z_{n-1} in the cube of half-width trunc centered at
// (z0 + zn) / 2 of prod_i min(1, |z_i - z_{i+1}|^{-(d-1)}). Exact when the
// enumeration is small enough, otherwise an unbiased importance-sampling
// estimate from mc_samples draws.
LatticeSum lattice_conv_sum(int d, int n, const LatticePoint& z0, const LatticePoint& zn,
                            double trunc, std::uint64_t seed = 1,
                            std::uint64_t mc_samples = 2000000);

// Reference enumeration without any symmetry reduction, for small cases.
double lattice_conv_sum_bruteforce(int d, int n, const LatticePoint& z0, const LatticePoint& zn,
                                   double trunc);

}  // namespace cylab
