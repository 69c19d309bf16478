#pragma once

namespace cylab {

// Volume of the unit n-ball, n in [0, 32].
double kappa(int n);

double log_beta(double a, double b);
double beta_fn(double a, double b);

// Regularized incomplete beta I_x(a, b) for x in [0, 1], a, b > 0.
double reg_inc_beta(double x, double a, double b);

// Volume of the cap of the unit d-ball of height h in [0, 2].
double cap_volume(int d, double h);

}  // namespace cylab
