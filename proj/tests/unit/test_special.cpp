#include <cmath>

#include "cylab/errors.hpp"
#include "cylab/quadrature.hpp"
#include "cylab/rng.hpp"
#include "cylab/special.hpp"
#include "doctest.h"

using namespace cylab;

TEST_CASE("unit ball volumes") {
  CHECK(kappa(0) == doctest::Approx(1.0));
  CHECK(kappa(1) == doctest::Approx(2.0));
  CHECK(kappa(2) == doctest::Approx(M_PI));
  CHECK(kappa(3) == doctest::Approx(4.0 * M_PI / 3.0));
  // Recurrence kappa_n = 2 pi / n * kappa_{n-2}.
  for (int n = 2; n <= 20; ++n) CHECK(kappa(n) == doctest::Approx(2.0 * M_PI / n * kappa(n - 2)).epsilon(1e-13));
  CHECK_THROWS_AS(kappa(-1), InvalidInput);
}

TEST_CASE("regularized incomplete beta") {
  CHECK(reg_inc_beta(0.0, 2.0, 3.0) == 0.0);
  CHECK(reg_inc_beta(1.0, 2.0, 3.0) == 1.0);
  CHECK(std::abs(reg_inc_beta(0.3, 1.0, 0.5) - (1.0 - std::sqrt(0.7))) < 1e-10);
  for (double x : {0.05, 0.3, 0.77, 0.99}) {
    for (double b : {0.5, 1.0, 2.5, 7.0}) CHECK(std::abs(reg_inc_beta(x, 1.0, b) - (1.0 - std::pow(1.0 - x, b))) < 1e-10);
  }

  // J_{0.3}(2.5, 0.5): the substitution t = 1 - s^2 removes the endpoint singularity.
  const double num = adaptive_simpson([](double s) { return 2.0 * std::pow(1.0 - s * s, 1.5); }, std::sqrt(0.7), 1.0,
                                      QuadratureOptions{1e-13, 1e-300, 50});
  const double ref = num / beta_fn(2.5, 0.5);
  CHECK(std::abs(reg_inc_beta(0.3, 2.5, 0.5) - ref) < 1e-10);

  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double x = (i + 0.5) / 20.0;
    for (int j = 0; j < 20; ++j) {
      const double a = 0.25 + 0.5 * j;
      for (int k = 0; k < 20; ++k) {
        const double b = 0.25 + 0.5 * k;
        worst = std::max(worst, std::abs(reg_inc_beta(x, a, b) + reg_inc_beta(1.0 - x, b, a) - 1.0));
      }
    }
  }
  CHECK(worst < 1e-10);
  CHECK_THROWS_AS(reg_inc_beta(1.5, 1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 0.0, 1.0), InvalidInput);
}

TEST_CASE("spherical caps") {
  for (int d = 2; d <= 8; ++d) {
    CHECK(cap_volume(d, 0.0) == 0.0);
    CHECK(cap_volume(d, 1.0) == doctest::Approx(kappa(d) / 2.0).epsilon(1e-12));
    CHECK(cap_volume(d, 2.0) == doctest::Approx(kappa(d)).epsilon(1e-12));
  }
  for (double h : {0.1, 0.5, 1.3, 1.9}) {
    CHECK(std::abs(cap_volume(3, h) - M_PI * h * h * (3.0 - h) / 3.0) < 1e-10);
  }
  CHECK(std::abs(cap_volume(3, 0.5) - 0.654498469497873) < 1e-10);
  // Disk segment area in 2-D.
  for (double h : {0.2, 0.9, 1.6}) {
    const double seg = std::acos(1.0 - h) - (1.0 - h) * std::sqrt(2.0 * h - h * h);
    CHECK(std::abs(cap_volume(2, h) - seg) < 1e-10);
  }
}

TEST_CASE("direction coordinate marginal") {
  // Under the uniform law the coordinate l_1 has density
  // (1 - t^2)^{(d-3)/2} / B(1/2, (d-1)/2). Compare the CDF at a few points.
  for (int d : {3, 4, 6}) {
    CounterRng rng(21, d);
    const int n = 200000;
    const double grid[] = {-0.6, -0.2, 0.1, 0.5, 0.8};
    int below[5] = {0, 0, 0, 0, 0};
    for (int i = 0; i < n; ++i) {
      const double t = uniform_unit_vector(rng, d)[0];
      for (int g = 0; g < 5; ++g) below[g] += t <= grid[g];
    }
    for (int g = 0; g < 5; ++g) {
      const double t = grid[g];
      const double half = 0.5 * reg_inc_beta(t * t, 0.5, 0.5 * (d - 1));
      const double cdf = t < 0 ? 0.5 - half : 0.5 + half;
      const double emp = static_cast<double>(below[g]) / n;
      CHECK(std::abs(emp - cdf) < 4.0 * std::sqrt(cdf * (1.0 - cdf) / n));
    }
  }
}

TEST_CASE("adaptive simpson") {
  CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(adaptive_simpson([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(M_E - 1.0).epsilon(1e-10));
  CHECK_THROWS_AS(adaptive_simpson([](double x) { return 1.0 / (x - 0.5) * 0.0 + std::log(x - 0.5); }, 0.0, 1.0),
                  NumericFailure);
}
