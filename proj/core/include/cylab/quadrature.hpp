#pragma once

#include <cmath>
#include <functional>

#include "cylab/errors.hpp"

namespace cylab {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-300;
  int max_depth = 40;
};

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth, int max_depth, bool& capped) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth >= max_depth) {
    capped = true;
    return left + right + delta / 15.0;
  }
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth, capped) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth, capped);
}

}  // namespace detail

// Adaptive Simpson on [a, b]. The absolute target is rel_tol times a
// coarse estimate of the integral of |f|, refined on twelve panels.
template <class F>
double adaptive_simpson(const F& f, double a, double b, QuadratureOptions opt = {}) {
  if (a == b) return 0.0;
  constexpr int kPanels = 12;
  double fx[2 * kPanels + 1];
  const double h = (b - a) / (2 * kPanels);
  double scale = 0.0;
  for (int i = 0; i <= 2 * kPanels; ++i) {
    fx[i] = f(a + i * h);
    if (!std::isfinite(fx[i])) throw NumericFailure("non-finite integrand value");
    scale += std::abs(fx[i]);
  }
  scale *= std::abs(b - a) / (2 * kPanels + 1);
  const double tol = std::max(opt.rel_tol * scale, opt.abs_tol) / kPanels;
  double total = 0.0;
  bool capped = false;
  for (int p = 0; p < kPanels; ++p) {
    const double pa = a + 2 * p * h, pb = pa + 2 * h;
    const double whole = (pb - pa) / 6.0 * (fx[2 * p] + 4.0 * fx[2 * p + 1] + fx[2 * p + 2]);
    total += detail::simpson_step(f, pa, pb, fx[2 * p], fx[2 * p + 1], fx[2 * p + 2], whole, tol,
                                  0, opt.max_depth, capped);
  }
  if (!std::isfinite(total)) throw NumericFailure("quadrature produced a non-finite value");
  return total;
}

}  // namespace cylab
