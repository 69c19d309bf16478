#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cylab/geometry.hpp"
#include "cylab/rng.hpp"

namespace cylab {

// Points of a cylinder around `axis` whose axial coordinate s, measured
// from `origin` along the axis, satisfies lo <= |s| < hi.
struct CylinderPiece {
  int which = 1;
  int level = 1;
  Line axis{Direction::from_raw(Vec{1.0, 0.0}), Vec{0.0, 0.0}};
  Vec origin;
  double lo = 0.0;
  double hi = 0.0;
  double radius = 1.0;

  bool empty() const { return !(hi > lo); }
  bool contains(const Vec& x) const;
};

bool hits(const Line& line, const CylinderPiece& piece);

using ScaffoldBody = std::variant<CylinderPiece, AxisBox>;
bool hits(const Line& line, const ScaffoldBody& body);
Vec uniform_point(CounterRng& rng, const ScaffoldBody& body);

enum class FamilyKind { piece_to_box, box_to_box, box_to_piece };

// Lines meeting both bodies.
struct Family {
  FamilyKind kind;
  int level;
  int index;  // box index i for box_to_box, 0 otherwise
  ScaffoldBody first;
  ScaffoldBody second;
  std::string label;
};

bool in_family(const Line& line, const Family& f);

struct Scaffold {
  int d = 4;
  double R = 1000.0;
  int m = 1;
  int N = 41;
  Vec p;
  Direction dir2 = Direction::from_raw(Vec{1.0, 0.0});
  double radius = 2.0;
  CylinderPiece piece1;
  CylinderPiece piece2;
  std::vector<AxisBox> boxes;  // boxes[i - 1] is B^i

  // Hitting families in path order: piece 1 to B^1, B^i to B^{i+1}, B^{d-3} to piece 2.
  std::vector<Family> families() const;
};

Scaffold build_scaffold(int d, double R, int m, const Vec& p, const Direction& dir2);

// p = (0, 0, R/4, 0, ..., 0); keeps both piece families of one level apart.
Vec default_offset(int d, double R);
// (1/2, sqrt(3)/2, 0, ..., 0).
Direction default_dir2(int d);

struct DisjointnessReport {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  std::uint64_t slope_samples = 0;
  double max_slope_piece_piece = 0.0;  // max |k_4 / k_1| on chords between piece-1 levels
  double min_slope_piece_box = 0.0;    // min |k_4 / k_1| on chords from piece 1 to B^1
  std::vector<std::string> examples;
};

DisjointnessReport verify_disjointness(const Scaffold& s, const Scaffold& s2, std::uint64_t samples,
                                       std::uint64_t seed);

double max_angle_cosine(const Scaffold& s, std::uint64_t samples, std::uint64_t seed);

// Poisson proposal for the lines of one family: directions in a cone around
// the line joining the bodies' bounding balls, offsets uniform in a fixed
// region containing the projection of one body. Proposals are thinned by the
// exact family predicate.
class FamilyProposal {
 public:
  explicit FamilyProposal(const Family& f);

  // mu-measure of the proposal set.
  double mass() const { return mass_; }
  Line draw(CounterRng& rng) const;
  const Family& family() const { return family_; }

 private:
  Family family_;
  int d_;
  Vec axis_;
  double s_max_;
  double cone_mass_;
  bool offset_is_capsule_;
  Vec offset_center_;
  Vec capsule_dir_;
  double capsule_half_;
  double offset_radius_;
  double mass_;
};

struct FamilyMass {
  std::string label;
  double mass = 0.0;
  double std_error = 0.0;
};

// Monte Carlo family masses with the given sample count, memoized per scaffold.
std::vector<FamilyMass> family_masses(const Scaffold& s, std::uint64_t samples = 1000000);

// Unit-box cell of a tiling, packed 21 bits per coordinate.
struct TileKey {
  std::uint64_t lo = 0, hi = 0;
  bool operator==(const TileKey&) const = default;
};
struct TileKeyHash {
  std::size_t operator()(const TileKey& k) const;
};

// Unit cells [k, k+1)^d (relative to the lower corner) crossed by the line
// inside the box.
std::vector<TileKey> tiles_crossed(const Line& line, const AxisBox& box);
std::vector<std::vector<long>> tiles_crossed_indices(const Line& line, const AxisBox& box);

struct ConnectionEstimate {
  double p = 0.0;
  double std_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t replicas = 0;
  double mean_lines = 0.0;  // accepted family lines per replica
};

ConnectionEstimate estimate_connection_probability(double u, const Scaffold& s,
                                                   std::uint64_t replicas, std::uint64_t seed,
                                                   int threads = 1);

// Whether the sampled family lines contain a path piece 1 -> B_1 -> ... -> piece 2.
bool path_exists(const Scaffold& s, const std::vector<std::vector<Line>>& family_lines);

}  // namespace cylab
