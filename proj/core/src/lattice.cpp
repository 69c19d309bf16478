#include <algorithm>
#include <cmath>

#include "cylab/connectivity.hpp"
#include "cylab/errors.hpp"
#include "cylab/rng.hpp"

namespace cylab {

namespace {

struct BoxRange {
  std::vector<long> lo, hi;
  std::size_t points() const {
    std::size_t p = 1;
    for (std::size_t j = 0; j < lo.size(); ++j) p *= static_cast<std::size_t>(hi[j] - lo[j] + 1);
    return p;
  }
  bool contains(const std::vector<long>& z) const {
    for (std::size_t j = 0; j < lo.size(); ++j) {
      if (z[j] < lo[j] || z[j] > hi[j]) return false;
    }
    return true;
  }
};

double kernel_sq(long s, int d) {
  if (s == 0) return 1.0;
  return std::pow(static_cast<double>(s), -0.5 * (d - 1));
}

long sq_dist(const std::vector<long>& a, const std::vector<long>& b) {
  long s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
  return s;
}

BoxRange validate(int d, int n, const LatticePoint& z0, const LatticePoint& zn, double trunc) {
  if (d < 2 || d > kMaxDim) throw InvalidInput("lattice dimension outside [2, 16]");
  if (n < 1 || n >= d) throw InvalidInput("chain length must satisfy 1 <= n < d");
  if (static_cast<int>(z0.size()) != d || static_cast<int>(zn.size()) != d) {
    throw InvalidInput("lattice point dimension mismatch");
  }
  const double sep = std::sqrt(static_cast<double>(sq_dist(z0, zn)));
  if (!(trunc >= 2.0 * sep) || !std::isfinite(trunc)) throw InvalidInput("trunc must be at least 2 |z0 - zn|");
  BoxRange box;
  for (int j = 0; j < d; ++j) {
    // Integers z with |2z - (z0 + zn)| <= 2 trunc.
    const double twice_mid = static_cast<double>(z0[j] + zn[j]);
    box.lo.push_back(static_cast<long>(std::ceil((twice_mid - 2.0 * trunc) / 2.0)));
    box.hi.push_back(static_cast<long>(std::floor((twice_mid + 2.0 * trunc) / 2.0)));
  }
  return box;
}

// Exact n = 2 sum. Coordinates where z0 and zn agree enter both kernels
// through the same squared offset, so they are folded into a count of
// squared norms and only the remaining coordinates are enumerated.
double two_step_sum(int d, const LatticePoint& z0, const LatticePoint& zn, const BoxRange& box) {
  std::vector<int> lon, tra;
  for (int j = 0; j < d; ++j) (z0[j] == zn[j] ? tra : lon).push_back(j);
  std::vector<double> count(1, 1.0);
  for (int j : tra) {
    long maxsq = 0;
    for (long z = box.lo[j]; z <= box.hi[j]; ++z) maxsq = std::max(maxsq, (z - z0[j]) * (z - z0[j]));
    std::vector<double> next(count.size() + static_cast<std::size_t>(maxsq), 0.0);
    for (long z = box.lo[j]; z <= box.hi[j]; ++z) {
      const std::size_t o = static_cast<std::size_t>((z - z0[j]) * (z - z0[j]));
      for (std::size_t s = 0; s < count.size(); ++s) next[s + o] += count[s];
    }
    count.swap(next);
  }
  std::vector<std::size_t> support;
  for (std::size_t s = 0; s < count.size(); ++s) {
    if (count[s] != 0.0) support.push_back(s);
  }
  long double total = 0.0L;
  std::vector<long> z(lon.size());
  for (std::size_t k = 0; k < lon.size(); ++k) z[k] = box.lo[lon[k]];
  for (;;) {
    long s0 = 0, sn = 0;
    for (std::size_t k = 0; k < lon.size(); ++k) {
      const int j = lon[k];
      s0 += (z[k] - z0[j]) * (z[k] - z0[j]);
      sn += (z[k] - zn[j]) * (z[k] - zn[j]);
    }
    long double part = 0.0L;
    for (std::size_t s : support) {
      const long ls = static_cast<long>(s);
      part += static_cast<long double>(count[s]) * kernel_sq(s0 + ls, d) * kernel_sq(sn + ls, d);
    }
    total += part;
    std::size_t k = 0;
    while (k < lon.size()) {
      if (++z[k] <= box.hi[lon[k]]) break;
      z[k] = box.lo[lon[k]];
      ++k;
    }
    if (k == lon.size()) break;
  }
  return static_cast<double>(total);
}

void enumerate_box(const BoxRange& box, std::vector<std::vector<long>>& out) {
  const std::size_t d = box.lo.size();
  std::vector<long> z(box.lo);
  for (;;) {
    out.push_back(z);
    std::size_t k = 0;
    while (k < d) {
      if (++z[k] <= box.hi[k]) break;
      z[k] = box.lo[k];
      ++k;
    }
    if (k == d) return;
  }
}

double brute_chain(int d, int steps_left, const std::vector<long>& from, const LatticePoint& zn,
                   const std::vector<std::vector<long>>& pts) {
  if (steps_left == 1) return kernel_sq(sq_dist(from, zn), d);
  long double s = 0.0L;
  for (const auto& z : pts) s += kernel_sq(sq_dist(from, z), d) * brute_chain(d, steps_left - 1, z, zn, pts);
  return static_cast<double>(s);
}

// Cube-shell proposal around a center: Chebyshev radius uniform in
// {0..kmax}, point uniform on that shell.
struct ShellProposal {
  int d;
  long kmax;

  double shell_count(long k) const {
    if (k == 0) return 1.0;
    return std::pow(2.0 * k + 1.0, d) - std::pow(2.0 * k - 1.0, d);
  }

  double pmf(const std::vector<long>& z, const std::vector<long>& c) const {
    long k = 0;
    for (int j = 0; j < d; ++j) k = std::max(k, std::labs(z[j] - c[j]));
    if (k > kmax) return 0.0;
    return 1.0 / (static_cast<double>(kmax + 1) * shell_count(k));
  }

  std::vector<long> draw(CounterRng& rng, const std::vector<long>& c) const {
    const long k = static_cast<long>(rng.below(static_cast<std::uint64_t>(kmax + 1)));
    std::vector<long> z(c);
    if (k == 0) return z;
    for (;;) {
      const int axis = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
      const bool plus = rng.below(2) == 1;
      int extreme = 0;
      for (int j = 0; j < d; ++j) {
        long off;
        if (j == axis) off = plus ? k : -k;
        else off = static_cast<long>(rng.below(static_cast<std::uint64_t>(2 * k + 1))) - k;
        z[j] = c[j] + off;
        if (std::labs(off) == k) ++extreme;
      }
      if (rng.below(static_cast<std::uint64_t>(extreme)) == 0) return z;
    }
  }
};

LatticeSum importance_sum(int d, int n, const LatticePoint& z0, const LatticePoint& zn,
                          double trunc, const BoxRange& box, std::uint64_t seed,
                          std::uint64_t samples) {
  ShellProposal prop{d, static_cast<long>(std::floor(2.0 * trunc)) + 1};
  CounterRng rng(seed, stream_id(0, 0x6c61));
  long double sum = 0.0L, sum_sq = 0.0L;
  std::vector<std::vector<long>> path(static_cast<std::size_t>(n + 1));
  path[0] = z0;
  path[static_cast<std::size_t>(n)] = zn;
  for (std::uint64_t s = 0; s < samples; ++s) {
    double w = 1.0;
    bool inside = true;
    for (int i = 1; i < n; ++i) {
      const auto& prev = path[static_cast<std::size_t>(i - 1)];
      path[static_cast<std::size_t>(i)] = rng.uniform() < 0.5 ? prop.draw(rng, prev) : prop.draw(rng, zn);
      const auto& z = path[static_cast<std::size_t>(i)];
      if (!box.contains(z)) inside = false;
      const double q = 0.5 * prop.pmf(z, prev) + 0.5 * prop.pmf(z, zn);
      w *= kernel_sq(sq_dist(prev, z), d) / q;
    }
    if (!inside) w = 0.0;
    else w *= kernel_sq(sq_dist(path[static_cast<std::size_t>(n - 1)], zn), d);
    sum += w;
    sum_sq += static_cast<long double>(w) * w;
  }
  const long double ns = static_cast<long double>(samples);
  const long double mean = sum / ns;
  const long double var = std::max(0.0L, sum_sq / ns - mean * mean);
  LatticeSum out;
  out.value = static_cast<double>(mean);
  out.std_error = static_cast<double>(std::sqrt(var / ns));
  out.exact = false;
  out.samples = samples;
  return out;
}

}  // namespace

double lattice_conv_sum_bruteforce(int d, int n, const LatticePoint& z0, const LatticePoint& zn,
                                   double trunc) {
  const BoxRange box = validate(d, n, z0, zn, trunc);
  std::vector<std::vector<long>> pts;
  if (n > 1) enumerate_box(box, pts);
  return brute_chain(d, n, z0, zn, pts);
}

LatticeSum lattice_conv_sum(int d, int n, const LatticePoint& z0, const LatticePoint& zn,
                            double trunc, std::uint64_t seed, std::uint64_t mc_samples) {
  const BoxRange box = validate(d, n, z0, zn, trunc);
  LatticeSum out;
  if (n == 1) {
    out.value = kernel_sq(sq_dist(z0, zn), d);
    return out;
  }
  if (n == 2) {
    out.value = two_step_sum(d, z0, zn, box);
    return out;
  }
  const double pts = static_cast<double>(box.points());
  if (std::pow(pts, n - 1) <= 1e8) {
    out.value = lattice_conv_sum_bruteforce(d, n, z0, zn, trunc);
    return out;
  }
  if (mc_samples == 0) throw InvalidInput("sample count must be positive");
  return importance_sum(d, n, z0, zn, trunc, box, seed, mc_samples);
}

}  // namespace cylab
