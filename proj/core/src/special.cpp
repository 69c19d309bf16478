#include "cylab/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cylab/errors.hpp"

namespace cylab {

double kappa(int n) {
  if (n < 0 || n > 32) throw InvalidInput("kappa: n outside [0, 32]");
  return std::exp(0.5 * n * std::log(std::numbers::pi) - std::lgamma(0.5 * n + 1.0));
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("beta: parameters must be positive");
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

namespace {

// Continued fraction for I_x(a, b), modified Lentz.
double beta_cf(double x, double a, double b) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-14;
  constexpr int kMaxIter = 300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericFailure("reg_inc_beta: continued fraction did not converge");
}

}  // namespace

double reg_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidInput("reg_inc_beta: parameters must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("reg_inc_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lfront = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(lfront) * beta_cf(x, a, b) / a;
  }
  return 1.0 - std::exp(lfront) * beta_cf(1.0 - x, b, a) / b;
}

double cap_volume(int d, double h) {
  if (d < 1) throw InvalidInput("cap_volume: dimension must be positive");
  if (!(h >= 0.0 && h <= 2.0)) throw InvalidInput("cap_volume: height outside [0, 2]");
  const double kd = kappa(d);
  if (h > 1.0) return kd - cap_volume(d, 2.0 - h);
  const double x = std::min(1.0, 2.0 * h - h * h);
  return 0.5 * kd * reg_inc_beta(x, 0.5 * (d + 1), 0.5);
}

}  // namespace cylab
