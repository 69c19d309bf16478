#include "cylab/scaffold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <unordered_set>

#include "cylab/errors.hpp"
#include "cylab/parallel.hpp"
#include "cylab/special.hpp"

namespace cylab {

bool CylinderPiece::contains(const Vec& x) const {
  if (empty()) return false;
  const Vec w = x - origin;
  const double s = dot(w, axis.dir.vec());
  if (norm(complement_projection(axis.dir, w)) > radius) return false;
  const double a = std::abs(s);
  return lo <= a && a < hi;
}

bool hits(const Line& line, const CylinderPiece& piece) {
  if (piece.empty()) return false;
  const auto within = within_distance_interval(line, piece.axis, piece.radius);
  if (!within) return false;
  const double s0 = dot(line.anchor - piece.origin, piece.axis.dir.vec());
  const double ks = dot(line.dir.vec(), piece.axis.dir.vec());
  double sa, sb;
  auto at = [&](double t) {
    if (std::isinf(t)) {
      if (ks == 0.0) return s0;
      return (t > 0) == (ks > 0) ? std::numeric_limits<double>::infinity()
                                 : -std::numeric_limits<double>::infinity();
    }
    return s0 + t * ks;
  };
  sa = at(within->first);
  sb = at(within->second);
  if (sa > sb) std::swap(sa, sb);
  const bool positive = sa < piece.hi && sb >= piece.lo;
  const bool negative = sb > -piece.hi && sa <= -piece.lo;
  return positive || negative;
}

bool hits(const Line& line, const ScaffoldBody& body) {
  return std::visit([&](const auto& b) { return hits(line, b); }, body);
}

Vec uniform_point(CounterRng& rng, const ScaffoldBody& body) {
  if (const auto* box = std::get_if<AxisBox>(&body)) {
    Vec x = box->lower();
    for (int j = 0; j < x.dim(); ++j) x[j] += box->side * rng.uniform();
    return x;
  }
  const auto& piece = std::get<CylinderPiece>(body);
  if (piece.empty()) throw InvalidInput("cannot sample an empty cylinder piece");
  const int d = piece.origin.dim();
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  const double s = piece.lo + (piece.hi - piece.lo) * rng.uniform();
  const std::vector<Vec> basis = orthobasis_complement(piece.axis.dir);
  const Vec y = uniform_in_ball(rng, d - 1, piece.radius);
  Vec x = piece.origin + (sign * s) * piece.axis.dir.vec();
  for (int j = 0; j < d - 1; ++j) x += y[j] * basis[j];
  return x;
}

bool in_family(const Line& line, const Family& f) { return hits(line, f.first) && hits(line, f.second); }

std::vector<Family> Scaffold::families() const {
  std::vector<Family> out;
  const std::string lv = "@" + std::to_string(m);
  out.push_back({FamilyKind::piece_to_box, m, 0, piece1, boxes.front(), "c1-B1" + lv});
  for (std::size_t i = 0; i + 1 < boxes.size(); ++i) {
    out.push_back({FamilyKind::box_to_box, m, static_cast<int>(i + 1), boxes[i], boxes[i + 1],
                   "B" + std::to_string(i + 1) + "-B" + std::to_string(i + 2) + lv});
  }
  out.push_back({FamilyKind::box_to_piece, m, 0, boxes.back(), piece2,
                 "B" + std::to_string(boxes.size()) + "-c2" + lv});
  return out;
}

Scaffold build_scaffold(int d, double R, int m, const Vec& p, const Direction& dir2) {
  if (d < 4 || d > kMaxDim) throw InvalidInput("scaffold needs 4 <= d <= 16");
  if (!(R >= 2.0) || !std::isfinite(R) || R != std::floor(R)) throw InvalidInput("R must be an integer >= 2");
  if (m < 1) throw InvalidInput("level m must be at least 1");
  if (p.dim() != d || dir2.dim() != d) throw InvalidInput("dimension mismatch");
  if (p[0] != 0.0 || p[1] != 0.0) throw InvalidInput("p must vanish in the first two coordinates");
  double pmax = 0.0;
  for (int j = 0; j < d; ++j) pmax = std::max(pmax, std::abs(p[j]));
  if (R < 2.0 * pmax) throw InvalidInput("R must be at least 2 max |p_i|");
  for (int j = 2; j < d; ++j) {
    if (dir2[j] != 0.0) throw InvalidInput("dir2 must be supported on the first two coordinates");
  }
  const double Rm = std::pow(R, m);
  if (!(Rm < 9e15)) throw InvalidInput("R^m too large for exact tiling");
  Scaffold s;
  s.d = d;
  s.R = R;
  s.m = m;
  s.N = 10 * d + 1;
  s.p = p;
  s.dir2 = dir2;
  s.radius = std::sqrt(static_cast<double>(d));
  const double lo = 0.5 * std::pow(R, m - 1);
  const double hi = 0.5 * Rm - 10.0 * s.radius;
  const Vec zero(d);
  s.piece1 = CylinderPiece{1, m, Line{Direction::from_raw(Vec::unit(d, 0)), zero}, zero, lo, hi, s.radius};
  s.piece2 = CylinderPiece{2, m, Line{dir2, complement_projection(dir2, p)}, p, lo, hi, s.radius};
  for (int i = 1; i <= d - 3; ++i) {
    Vec c = p;
    c[i + 2] += s.N * Rm;
    s.boxes.push_back(AxisBox{c, Rm});
  }
  return s;
}

Vec default_offset(int d, double R) {
  Vec p(d);
  p[2] = 0.25 * R;
  return p;
}

Direction default_dir2(int d) {
  Vec v(d);
  v[0] = 0.5;
  v[1] = 0.5 * std::numbers::sqrt3;
  return Direction::from_raw(v);
}

namespace {

void require_compatible(const Scaffold& a, const Scaffold& b) {
  if (a.d != b.d || a.R != b.R || !(a.p == b.p) || !(a.dir2.vec() == b.dir2.vec())) {
    throw InvalidInput("scaffolds must share d, R, p and dir2");
  }
}

double slope41(const Vec& a, const Vec& b) {
  const double k1 = std::abs(a[0] - b[0]);
  const double k4 = std::abs(a[3] - b[3]);
  if (k1 == 0.0) return std::numeric_limits<double>::infinity();
  return k4 / k1;
}

}  // namespace

DisjointnessReport verify_disjointness(const Scaffold& s, const Scaffold& s2, std::uint64_t samples,
                                       std::uint64_t seed) {
  require_compatible(s, s2);
  std::vector<Family> fams = s.families();
  if (s2.m != s.m) {
    const auto more = s2.families();
    fams.insert(fams.end(), more.begin(), more.end());
  }
  std::vector<Family> active;
  for (const Family& f : fams) {
    const bool empty1 = std::holds_alternative<CylinderPiece>(f.first) && std::get<CylinderPiece>(f.first).empty();
    const bool empty2 = std::holds_alternative<CylinderPiece>(f.second) && std::get<CylinderPiece>(f.second).empty();
    if (!empty1 && !empty2) active.push_back(f);
  }
  DisjointnessReport rep;
  rep.min_slope_piece_box = std::numeric_limits<double>::infinity();
  if (active.empty()) return rep;
  CounterRng rng(seed, stream_id(0, 0x646a));
  const bool cross_levels = s.m != s2.m && !s.piece1.empty() && !s2.piece1.empty();
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Family& f = active[i % active.size()];
    const Vec a = uniform_point(rng, f.first);
    const Vec b = uniform_point(rng, f.second);
    const Line chord = line_through(a, b);
    ++rep.samples;
    if (f.kind == FamilyKind::piece_to_box) rep.min_slope_piece_box = std::min(rep.min_slope_piece_box, slope41(a, b));
    for (const Family& g : active) {
      if (&g == &f) continue;
      if (in_family(chord, g)) {
        ++rep.violations;
        if (rep.examples.size() < 5) rep.examples.push_back(f.label + " in " + g.label);
      }
    }
    if (cross_levels) {
      const Vec x = uniform_point(rng, s.piece1);
      const Vec y = uniform_point(rng, s2.piece1);
      rep.max_slope_piece_piece = std::max(rep.max_slope_piece_piece, slope41(x, y));
      ++rep.slope_samples;
    }
  }
  if (std::isinf(rep.min_slope_piece_box)) rep.min_slope_piece_box = 0.0;
  return rep;
}

double max_angle_cosine(const Scaffold& s, std::uint64_t samples, std::uint64_t seed) {
  if (s.R < 1000.0) throw OutOfDomain("max_angle_cosine needs R >= 1000");
  if (s.piece1.empty()) throw InvalidInput("cylinder piece is empty at this level");
  const AxisBox& b1 = s.boxes.front();
  const ScaffoldBody next = s.boxes.size() > 1 ? ScaffoldBody{s.boxes[1]} : ScaffoldBody{s.piece2};
  CounterRng rng(seed, stream_id(0, 0x6163));
  const Vec corner = b1.lower();
  double best = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Vec x = uniform_point(rng, s.piece1);
    const Vec xp = uniform_point(rng, b1);
    // Second line passes through the same unit cell of B^1.
    Vec y(s.d);
    for (int j = 0; j < s.d; ++j) {
      const double cell = std::clamp(std::floor(xp[j] - corner[j]), 0.0, b1.side - 1.0);
      y[j] = corner[j] + cell + rng.uniform();
    }
    const Vec yp = uniform_point(rng, next);
    const Vec v1 = x - xp, v2 = yp - y;
    const double c = std::abs(dot(v1, v2)) / (norm(v1) * norm(v2));
    best = std::max(best, c);
  }
  return std::min(best, 1.0);
}

FamilyProposal::FamilyProposal(const Family& f) : family_(f) {
  auto bounding = [](const ScaffoldBody& b, Vec& c, double& r) {
    if (const auto* box = std::get_if<AxisBox>(&b)) {
      c = box->center;
      r = 0.5 * box->side * std::sqrt(static_cast<double>(box->center.dim()));
    } else {
      const auto& piece = std::get<CylinderPiece>(b);
      c = piece.origin;
      r = std::hypot(piece.hi, piece.radius);
    }
  };
  Vec ca, cb;
  double ra = 0.0, rb = 0.0;
  bounding(f.first, ca, ra);
  bounding(f.second, cb, rb);
  d_ = ca.dim();
  const double D = distance(ca, cb);
  axis_ = (cb - ca) / D;
  const double sa = std::min(1.0, (ra + rb) / D);
  s_max_ = sa * sa;
  cone_mass_ = s_max_ >= 1.0 ? 1.0 : reg_inc_beta(s_max_, 0.5 * (d_ - 1), 0.5);

  auto is_empty = [](const ScaffoldBody& b) {
    const auto* piece = std::get_if<CylinderPiece>(&b);
    return piece && piece->empty();
  };
  if (is_empty(f.first) || is_empty(f.second)) {
    mass_ = 0.0;
    offset_is_capsule_ = false;
    offset_radius_ = 0.0;
    capsule_half_ = 0.0;
    return;
  }
  // Offset region: whichever body has the smaller projection envelope.
  double best = std::numeric_limits<double>::infinity();
  for (const ScaffoldBody* b : {&f.first, &f.second}) {
    if (const auto* piece = std::get_if<CylinderPiece>(b)) {
      const double vol = 2.0 * (piece->hi + piece->radius) * std::pow(2.0 * piece->radius, d_ - 2);
      if (vol < best) {
        best = vol;
        offset_is_capsule_ = true;
        offset_center_ = piece->origin;
        capsule_dir_ = piece->axis.dir.vec();
        capsule_half_ = piece->hi + piece->radius;
        offset_radius_ = piece->radius;
      }
    } else {
      const auto& box = std::get<AxisBox>(*b);
      const double r = 0.5 * box.side * std::sqrt(static_cast<double>(d_));
      const double vol = kappa(d_ - 1) * std::pow(r, d_ - 1);
      if (vol < best) {
        best = vol;
        offset_is_capsule_ = false;
        offset_center_ = box.center;
        capsule_half_ = 0.0;
        offset_radius_ = r;
      }
    }
  }
  mass_ = cone_mass_ * best;
}

Line FamilyProposal::draw(CounterRng& rng) const {
  Vec u;
  if (s_max_ >= 1.0) {
    u = uniform_unit_vector(rng, d_);
  } else {
    // s = 1 - <u, axis>^2 has density proportional to s^{(d-3)/2} (1 - s)^{-1/2}.
    double s;
    for (;;) {
      s = s_max_ * std::pow(rng.uniform(), 2.0 / (d_ - 1));
      if (rng.uniform() <= std::sqrt((1.0 - s_max_) / (1.0 - s))) break;
    }
    Vec v;
    for (;;) {
      v = uniform_unit_vector(rng, d_);
      v -= dot(v, axis_) * axis_;
      const double nv = norm(v);
      if (nv > 1e-8) {
        v /= nv;
        break;
      }
    }
    u = std::sqrt(1.0 - s) * axis_ + std::sqrt(s) * v;
  }
  const Direction dir = Direction::from_raw(u);
  Vec anchor = complement_projection(dir, offset_center_);
  if (offset_is_capsule_) {
    Vec w = complement_projection(dir, capsule_dir_);
    std::vector<Vec> frame;
    const double nw = norm(w);
    if (nw > 1e-12) frame.push_back(w / nw);
    for (int j = 0; j < d_ && static_cast<int>(frame.size()) < d_ - 1; ++j) {
      Vec e = Vec::unit(d_, j);
      for (int pass = 0; pass < 2; ++pass) {
        e -= dot(e, dir.vec()) * dir.vec();
        for (const Vec& b : frame) e -= dot(e, b) * b;
      }
      const double ne = norm(e);
      if (ne > 1e-6) frame.push_back(e / ne);
    }
    const double t = capsule_half_ * (2.0 * rng.uniform() - 1.0);
    anchor += t * frame[0];
    for (std::size_t j = 1; j < frame.size(); ++j) {
      anchor += (offset_radius_ * (2.0 * rng.uniform() - 1.0)) * frame[j];
    }
  } else {
    const std::vector<Vec> basis = orthobasis_complement(dir);
    const Vec y = uniform_in_ball(rng, d_ - 1, offset_radius_);
    for (int j = 0; j < d_ - 1; ++j) anchor += y[j] * basis[j];
  }
  return Line{dir, complement_projection(dir, anchor)};
}

std::vector<FamilyMass> family_masses(const Scaffold& s, std::uint64_t samples) {
  static std::mutex mutex;
  static std::map<std::string, std::vector<FamilyMass>> cache;
  std::ostringstream key;
  key.precision(17);
  key << s.d << ' ' << s.R << ' ' << s.m << ' ' << samples;
  for (int j = 0; j < s.d; ++j) key << ' ' << s.p[j] << ' ' << s.dir2[j];
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(key.str()); it != cache.end()) return it->second;
  std::vector<FamilyMass> out;
  const auto fams = s.families();
  for (std::size_t i = 0; i < fams.size(); ++i) {
    FamilyProposal prop(fams[i]);
    FamilyMass fm;
    fm.label = fams[i].label;
    if (prop.mass() > 0.0 && samples > 0) {
      CounterRng rng(0x6d617373ull, stream_id(i, 0));
      std::uint64_t hit = 0;
      for (std::uint64_t k = 0; k < samples; ++k) hit += in_family(prop.draw(rng), fams[i]) ? 1 : 0;
      const double q = static_cast<double>(hit) / static_cast<double>(samples);
      fm.mass = prop.mass() * q;
      fm.std_error = prop.mass() * std::sqrt(q * (1.0 - q) / static_cast<double>(samples));
    }
    out.push_back(fm);
  }
  cache.emplace(key.str(), out);
  return out;
}

std::size_t TileKeyHash::operator()(const TileKey& k) const {
  std::uint64_t z = k.lo * 0x9E3779B97F4A7C15ull ^ (k.hi + 0x632BE59BD9B4E019ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return static_cast<std::size_t>(z ^ (z >> 31));
}

namespace {

TileKey pack(const std::vector<long>& idx) {
  TileKey k;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const std::uint64_t v = static_cast<std::uint64_t>(idx[j]) & 0x1FFFFFull;
    if (j < 3) k.lo |= v << (21 * j);
    else k.hi |= v << (21 * (j - 3));
  }
  return k;
}

}  // namespace

std::vector<std::vector<long>> tiles_crossed_indices(const Line& line, const AxisBox& box) {
  const auto clip = clip_to_box(line, box);
  std::vector<std::vector<long>> out;
  if (!clip) return out;
  const int d = line.dim();
  const long n = static_cast<long>(std::llround(box.side));
  const Vec corner = box.lower();
  const double t0 = clip->first, t1 = clip->second;
  std::vector<long> idx(d), step(d);
  std::vector<double> tmax(d), tdelta(d);
  for (int j = 0; j < d; ++j) {
    const double k = line.dir[j];
    const double rel = line.anchor[j] + t0 * k - corner[j];
    idx[j] = std::clamp(static_cast<long>(std::floor(rel)), 0L, n - 1);
    if (k > 0.0) {
      step[j] = 1;
      tmax[j] = t0 + (static_cast<double>(idx[j] + 1) - rel) / k;
      tdelta[j] = 1.0 / k;
    } else if (k < 0.0) {
      step[j] = -1;
      tmax[j] = t0 + (static_cast<double>(idx[j]) - rel) / k;
      tdelta[j] = -1.0 / k;
    } else {
      step[j] = 0;
      tmax[j] = std::numeric_limits<double>::infinity();
      tdelta[j] = 0.0;
    }
  }
  const std::size_t cap = static_cast<std::size_t>(d) * static_cast<std::size_t>(n) + d + 1;
  for (std::size_t it = 0; it < cap; ++it) {
    out.push_back(idx);
    int j = 0;
    for (int a = 1; a < d; ++a) {
      if (tmax[a] < tmax[j]) j = a;
    }
    if (!(tmax[j] <= t1)) break;
    idx[j] += step[j];
    if (idx[j] < 0 || idx[j] >= n) break;
    tmax[j] += tdelta[j];
  }
  return out;
}

std::vector<TileKey> tiles_crossed(const Line& line, const AxisBox& box) {
  std::vector<TileKey> out;
  for (const auto& idx : tiles_crossed_indices(line, box)) out.push_back(pack(idx));
  return out;
}

bool path_exists(const Scaffold& s, const std::vector<std::vector<Line>>& family_lines) {
  const std::size_t nb = s.boxes.size();
  if (family_lines.size() != nb + 1) throw InvalidInput("one line list per family is required");
  using TileSet = std::unordered_set<TileKey, TileKeyHash>;
  TileSet reach;
  for (const Line& l : family_lines[0]) {
    for (const TileKey& k : tiles_crossed(l, s.boxes[0])) reach.insert(k);
  }
  for (std::size_t i = 1; i < nb && !reach.empty(); ++i) {
    TileSet next;
    for (const Line& l : family_lines[i]) {
      const auto here = tiles_crossed(l, s.boxes[i - 1]);
      if (std::any_of(here.begin(), here.end(), [&](const TileKey& k) { return reach.count(k) > 0; })) {
        for (const TileKey& k : tiles_crossed(l, s.boxes[i])) next.insert(k);
      }
    }
    reach.swap(next);
  }
  if (reach.empty()) return false;
  for (const Line& l : family_lines[nb]) {
    for (const TileKey& k : tiles_crossed(l, s.boxes[nb - 1])) {
      if (reach.count(k)) return true;
    }
  }
  return false;
}

ConnectionEstimate estimate_connection_probability(double u, const Scaffold& s,
                                                   std::uint64_t replicas, std::uint64_t seed,
                                                   int threads) {
  if (s.d != 4 && s.d != 5) throw OutOfDomain("connection estimate supports d in {4, 5}");
  if (s.R > 64.0) throw OutOfDomain("connection estimate supports R <= 64");
  if (!(u >= 0.0) || !std::isfinite(u)) throw InvalidInput("intensity must be finite and nonnegative");
  if (replicas == 0) throw InvalidInput("replica count must be positive");
  if (std::pow(s.R, s.m) > static_cast<double>(1 << 21)) throw OutOfDomain("R^m too large for tile keys");
  ConnectionEstimate est;
  est.replicas = replicas;
  if (u == 0.0) return est;
  const auto fams = s.families();
  std::vector<FamilyProposal> props;
  for (const Family& f : fams) props.emplace_back(f);
  std::vector<char> hit(replicas, 0);
  std::vector<std::uint64_t> lines(replicas, 0);
  parallel_for(replicas, threads, [&](std::size_t r) {
    std::vector<std::vector<Line>> kept(fams.size());
    for (std::size_t f = 0; f < fams.size(); ++f) {
      if (props[f].mass() <= 0.0) continue;
      CounterRng rng(seed, stream_id(r, 0x100 + f));
      const std::uint64_t n = rng.poisson(u * props[f].mass());
      for (std::uint64_t k = 0; k < n; ++k) {
        Line l = props[f].draw(rng);
        if (in_family(l, fams[f])) kept[f].push_back(l);
      }
      lines[r] += kept[f].size();
    }
    hit[r] = path_exists(s, kept) ? 1 : 0;
  });
  for (std::size_t r = 0; r < replicas; ++r) {
    est.hits += static_cast<std::uint64_t>(hit[r]);
    est.mean_lines += static_cast<double>(lines[r]);
  }
  const double nr = static_cast<double>(replicas);
  est.mean_lines /= nr;
  est.p = static_cast<double>(est.hits) / nr;
  est.std_error = std::sqrt(est.p * (1.0 - est.p) / nr);
  return est;
}

}  // namespace cylab
