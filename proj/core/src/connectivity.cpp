#include "cylab/connectivity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>

#include "cylab/errors.hpp"
#include "cylab/parallel.hpp"

namespace cylab {

IntersectionGraph::IntersectionGraph(
    std::size_t n, double radius,
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges)
    : radius_(radius), offsets_(n + 1, 0) {
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n || a == b) throw InvalidInput("bad edge");
    ++offsets_[a + 1];
    ++offsets_[b + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
  neighbors_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [a, b] : edges) {
    neighbors_[fill[a]++] = b;
    neighbors_[fill[b]++] = a;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
    auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
    std::sort(first, last);
    if (std::adjacent_find(first, last) != last) throw InvalidInput("duplicate edge");
  }
}

std::span<const std::uint32_t> IntersectionGraph::neighbors(std::size_t v) const {
  return {neighbors_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

bool IntersectionGraph::adjacent(std::size_t a, std::size_t b) const {
  const auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), static_cast<std::uint32_t>(b));
}

IntersectionGraph build_graph(const LineSample& sample, double radius, int threads) {
  if (!(radius > 0.0)) throw InvalidInput("radius must be positive");
  const std::size_t n = sample.size();
  if (n > 0xFFFFFFFFu) throw InvalidInput("sample too large for a graph");
  const int d = sample.dim();
  const double lim = 4.0 * radius * radius;
  // Rows are split into blocks; each block collects its own edges so the
  // merged edge list is independent of the thread count.
  const std::size_t block = 256;
  const std::size_t nblocks = (n + block - 1) / block;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> parts(nblocks);
  parallel_for(nblocks, threads, [&](std::size_t bi) {
    auto& out = parts[bi];
    const std::size_t lo = bi * block, hi = std::min(n, lo + block);
    for (std::size_t i = lo; i < hi; ++i) {
      const double* di = sample.dir_data(i);
      const double* ai = sample.anchor_data(i);
      for (std::size_t j = i + 1; j < n; ++j) {
        if (line_distance_sq_raw(di, ai, sample.dir_data(j), sample.anchor_data(j), d) <= lim) {
          out.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        }
      }
    }
  });
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (auto& p : parts) edges.insert(edges.end(), p.begin(), p.end());
  return IntersectionGraph(n, radius, edges);
}

namespace {

std::vector<int> bfs_levels(const IntersectionGraph& g, std::size_t src) {
  std::vector<int> level(g.size(), -1);
  std::vector<std::uint32_t> queue;
  queue.reserve(g.size());
  level[src] = 0;
  queue.push_back(static_cast<std::uint32_t>(src));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::uint32_t v = queue[head];
    for (std::uint32_t w : g.neighbors(v)) {
      if (level[w] < 0) {
        level[w] = level[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return level;
}

void check_vertex(const IntersectionGraph& g, std::size_t v) {
  if (v >= g.size()) throw InvalidInput("vertex index out of range");
}

}  // namespace

std::optional<int> cdist(const IntersectionGraph& g, std::size_t a, std::size_t b) {
  check_vertex(g, a);
  check_vertex(g, b);
  if (a == b) throw InvalidInput("cdist needs two distinct cylinders");
  const std::vector<int> level = bfs_levels(g, a);
  if (level[b] < 0) return std::nullopt;
  return level[b] - 1;
}

std::optional<int> censored_diameter(const IntersectionGraph& g, std::span<const std::size_t> subset_in) {
  std::vector<std::size_t> subset(subset_in.begin(), subset_in.end());
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  for (std::size_t v : subset) check_vertex(g, v);
  const std::size_t k = subset.size();
  if (k < 2) return std::nullopt;
  const std::size_t n = g.size();
  const std::size_t words = (n + 63) / 64;
  int best = -1;
  std::vector<std::vector<std::size_t>> pending(k);
  if (static_cast<double>(k) * static_cast<double>(words) <= 5e7) {
    // Pairs at distance 0 or 1 are settled by neighbor bitsets; only the
    // remaining pairs need a search.
    std::vector<std::uint64_t> bits(k * words, 0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::uint32_t w : g.neighbors(subset[i])) bits[i * words + w / 64] |= 1ull << (w % 64);
    }
    for (std::size_t i = 0; i < k; ++i) {
      const std::uint64_t* bi = &bits[i * words];
      for (std::size_t j = i + 1; j < k; ++j) {
        const std::size_t b = subset[j];
        if ((bi[b / 64] >> (b % 64)) & 1ull) {
          best = std::max(best, 0);
          continue;
        }
        const std::uint64_t* bj = &bits[j * words];
        bool common = false;
        for (std::size_t w = 0; w < words && !common; ++w) common = (bi[w] & bj[w]) != 0;
        if (common) {
          best = std::max(best, 1);
        } else {
          pending[i].push_back(j);
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) pending[i].push_back(j);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (pending[i].empty()) continue;
    const std::vector<int> level = bfs_levels(g, subset[i]);
    for (std::size_t j : pending[i]) {
      const int l = level[subset[j]];
      if (l >= 0) best = std::max(best, l - 1);
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

std::optional<int> censored_diameter(const IntersectionGraph& g) {
  std::vector<std::size_t> all(g.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return censored_diameter(g, all);
}

std::vector<std::size_t> lines_hitting(const LineSample& sample, const Ball& ball) {
  if (ball.center.dim() != sample.dim()) throw InvalidInput("dimension mismatch");
  const double r2 = ball.radius * ball.radius;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (point_line_distance_sq_raw(ball.center.data(), sample.dir_data(i), sample.anchor_data(i),
                                   sample.dim()) <= r2) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<std::size_t> neighbors_in_sample(const LineSample& sample, std::size_t i, double radius) {
  if (i >= sample.size()) throw InvalidInput("line index out of range");
  const double lim = 4.0 * radius * radius;
  const double* di = sample.dir_data(i);
  const double* ai = sample.anchor_data(i);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < sample.size(); ++j) {
    if (j == i) continue;
    if (line_distance_sq_raw(di, ai, sample.dir_data(j), sample.anchor_data(j), sample.dim()) <= lim) {
      out.push_back(j);
    }
  }
  return out;
}

std::optional<int> cdist_up_to_two(const LineSample& sample, std::size_t a, std::size_t b,
                                   std::span<const std::size_t> na,
                                   std::span<const std::size_t> nb, double radius) {
  if (a == b) throw InvalidInput("cdist needs two distinct cylinders");
  if (std::binary_search(na.begin(), na.end(), b)) return 0;
  // Common neighbor.
  std::size_t i = 0, j = 0;
  while (i < na.size() && j < nb.size()) {
    if (na[i] == nb[j]) return 1;
    if (na[i] < nb[j]) ++i;
    else ++j;
  }
  const double lim = 4.0 * radius * radius;
  const int d = sample.dim();
  for (std::size_t x : na) {
    const double* dx = sample.dir_data(x);
    const double* ax = sample.anchor_data(x);
    for (std::size_t y : nb) {
      if (line_distance_sq_raw(dx, ax, sample.dir_data(y), sample.anchor_data(y), d) <= lim) return 2;
    }
  }
  return std::nullopt;
}

std::size_t connecting_line_count(const LineSample& sample, const Cylinder& c1, const Cylinder& c2) {
  if (c1.axis.dim() != sample.dim() || c2.axis.dim() != sample.dim()) throw InvalidInput("dimension mismatch");
  std::size_t count = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const Line line = sample.line(i);
    if (hits(line, c1) && hits(line, c2)) ++count;
  }
  return count;
}

namespace {

bool ball_inside(const Ball& inner, const Ball& outer) {
  return distance(inner.center, outer.center) + inner.radius <= outer.radius * (1.0 + 1e-12);
}

}  // namespace

bool chain_event(const Vec& x, const Vec& y, int n, const LineSample& sample, double radius) {
  const int d = sample.dim();
  if (x.dim() != d || y.dim() != d) throw InvalidInput("dimension mismatch");
  if (n < 1) throw InvalidInput("chain length must be at least 1");
  if (!(radius > 0.0)) throw InvalidInput("radius must be positive");
  const auto& windows = sample.windows();
  if (n <= 2) {
    const Ball bx{x, radius}, by{y, radius};
    const bool okx = std::any_of(windows.begin(), windows.end(), [&](const Ball& w) { return ball_inside(bx, w); });
    const bool oky = std::any_of(windows.begin(), windows.end(), [&](const Ball& w) { return ball_inside(by, w); });
    if (!okx || !oky) throw InvalidInput("window too small for chain event");
  } else {
    const Vec mid = 0.5 * (x + y);
    const double need = 2.0 * distance(x, y) + 20.0;
    const bool ok = std::any_of(windows.begin(), windows.end(), [&](const Ball& w) {
      return distance(w.center, mid) <= 1e-9 * (1.0 + norm(mid)) && w.radius >= need;
    });
    if (!ok) throw InvalidInput("window too small for chain event");
  }
  const double r2 = radius * radius;
  const std::size_t m = sample.size();
  std::vector<char> target(m, 0);
  std::vector<int> level(m, -1);
  std::vector<std::size_t> frontier;
  for (std::size_t i = 0; i < m; ++i) {
    target[i] = point_line_distance_sq_raw(y.data(), sample.dir_data(i), sample.anchor_data(i), d) <= r2;
    if (point_line_distance_sq_raw(x.data(), sample.dir_data(i), sample.anchor_data(i), d) <= r2) {
      if (target[i]) return true;
      level[i] = 1;
      frontier.push_back(i);
    }
  }
  const double lim = 4.0 * r2;
  for (int depth = 2; depth <= n && !frontier.empty(); ++depth) {
    std::vector<std::size_t> next;
    for (std::size_t j = 0; j < m; ++j) {
      if (level[j] >= 0) continue;
      for (std::size_t i : frontier) {
        if (line_distance_sq_raw(sample.dir_data(i), sample.anchor_data(i), sample.dir_data(j),
                                 sample.anchor_data(j), d) <= lim) {
          if (target[j]) return true;
          level[j] = depth;
          next.push_back(j);
          break;
        }
      }
    }
    frontier.swap(next);
  }
  return false;
}

}  // namespace cylab
