#include <cmath>
#include <vector>

#include "cylab/rng.hpp"
#include "doctest.h"

using namespace cylab;

TEST_CASE("philox known answers") {
  const auto z = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(z[0] == 0x6627e8d5u);
  CHECK(z[1] == 0xe169c58du);
  CHECK(z[2] == 0xbc57ac4cu);
  CHECK(z[3] == 0x9b00dbd8u);
  const auto f = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(f[0] == 0x408f276du);
  CHECK(f[1] == 0x41c83b0eu);
  CHECK(f[2] == 0xa20bc7c6u);
  CHECK(f[3] == 0x6d5451fdu);
}

TEST_CASE("streams are reproducible and distinct") {
  CounterRng a(5, stream_id(3, 1)), b(5, stream_id(3, 1)), c(5, stream_id(4, 1)), e(6, stream_id(3, 1));
  int same_c = 0, same_e = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    same_c += x == c.next_u64();
    same_e += x == e.next_u64();
  }
  CHECK(same_c == 0);
  CHECK(same_e == 0);
  CHECK(a.draws() == 1000);
  CHECK(stream_id(1, 2) != stream_id(2, 1));
}

TEST_CASE("uniform and normal moments") {
  CounterRng rng(7, 0);
  const int n = 1000000;
  double s = 0.0, s2 = 0.0, ns = 0.0, ns2 = 0.0, ns4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK_MESSAGE((u > 0.0 && u < 1.0), "uniform outside (0, 1)");
    s += u;
    s2 += u * u;
    const double z = rng.normal();
    ns += z;
    ns2 += z * z;
    ns4 += z * z * z * z;
  }
  CHECK(std::abs(s / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(s2 / n - 1.0 / 3.0) < 0.002);
  CHECK(std::abs(ns / n) < 4.0 / std::sqrt(n));
  CHECK(std::abs(ns2 / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(ns4 / n - 3.0) < 4.0 * std::sqrt(96.0 / n));
}

TEST_CASE("inverse normal cdf") {
  CHECK(std::abs(inverse_normal_cdf(0.5)) < 1e-14);
  for (double p : {1e-10, 1e-4, 0.025, 0.3, 0.9, 0.999999}) {
    const double x = inverse_normal_cdf(p);
    CHECK(std::abs(0.5 * std::erfc(-x / std::sqrt(2.0)) - p) < 1e-12 * std::max(1.0, p / (1.0 - p)) + 1e-15);
  }
}

TEST_CASE("poisson moments") {
  for (double mean : {0.3, 4.0, 9.9, 10.0, 57.0, 3000.0}) {
    CounterRng rng(8, static_cast<std::uint64_t>(mean * 10));
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double k = static_cast<double>(rng.poisson(mean));
      s += k;
      s2 += k * k;
    }
    const double m = s / n, v = s2 / n - m * m;
    CHECK(std::abs(m - mean) < 4.0 * std::sqrt(mean / n));
    CHECK(std::abs(v / mean - 1.0) < 0.03);
  }
  CounterRng rng(9, 0);
  CHECK(rng.poisson(0.0) == 0);
  // P(K = 0) for small mean.
  int zeros = 0;
  for (int i = 0; i < 100000; ++i) zeros += rng.poisson(1.5) == 0;
  CHECK(std::abs(zeros / 1e5 - std::exp(-1.5)) < 4.0 * std::sqrt(0.22 * 0.78 / 1e5));
}

TEST_CASE("bounded integers") {
  CounterRng rng(10, 0);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - 10000.0) * (c - 10000.0) / 10000.0;
  CHECK(chi2 < 30.0);  // 6 degrees of freedom
}

TEST_CASE("sphere and ball sampling") {
  CounterRng rng(11, 0);
  for (int d : {2, 3, 5, 9}) {
    double mean_r = 0.0;
    for (int i = 0; i < 20000; ++i) {
      CHECK(std::abs(norm(uniform_unit_vector(rng, d)) - 1.0) < 1e-12);
      const double r = norm(uniform_in_ball(rng, d, 2.0));
      CHECK(r <= 2.0);
      mean_r += r;
    }
    // E|X| = R d / (d + 1) for the uniform ball.
    CHECK(std::abs(mean_r / 20000 - 2.0 * d / (d + 1.0)) < 0.01);
  }
  // Octant histogram of 3-D directions.
  std::vector<int> oct(8, 0);
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const Vec v = uniform_unit_vector(rng, 3);
    ++oct[(v[0] > 0) + 2 * (v[1] > 0) + 4 * (v[2] > 0)];
  }
  double chi2 = 0.0;
  for (int c : oct) chi2 += (c - n / 8.0) * (c - n / 8.0) / (n / 8.0);
  CHECK(chi2 < 40.0);  // p > 1e-6 at 7 degrees of freedom
}
