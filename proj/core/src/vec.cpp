#include "cylab/vec.hpp"

#include <cmath>
#include <string>

#include "cylab/errors.hpp"

namespace cylab {

namespace {
void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw InvalidInput("vector dimension " + std::to_string(dim) + " outside [1, 16]");
  }
}
void check_same(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) throw InvalidInput("dimension mismatch");
}
}  // namespace

Vec::Vec(int dim) : dim_(dim) { check_dim(dim); }

Vec::Vec(std::initializer_list<double> init) : dim_(static_cast<int>(init.size())) {
  check_dim(dim_);
  int i = 0;
  for (double x : init) c_[i++] = x;
}

Vec Vec::unit(int dim, int axis) {
  Vec v(dim);
  if (axis < 0 || axis >= dim) throw InvalidInput("unit vector axis out of range");
  v[axis] = 1.0;
  return v;
}

Vec Vec::from(std::span<const double> coords) {
  Vec v(static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) v.c_[i] = coords[i];
  return v;
}

Vec& Vec::operator+=(const Vec& o) {
  check_same(*this, o);
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Vec& Vec::operator-=(const Vec& o) {
  check_same(*this, o);
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

Vec& Vec::operator/=(double s) {
  for (int i = 0; i < dim_; ++i) c_[i] /= s;
  return *this;
}

bool operator==(const Vec& a, const Vec& b) {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i) {
    if (a.c_[i] != b.c_[i]) return false;
  }
  return true;
}

double dot(const Vec& a, const Vec& b) {
  check_same(a, b);
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm_sq(const Vec& a) { return dot(a, a); }
double norm(const Vec& a) { return std::sqrt(norm_sq(a)); }
double distance(const Vec& a, const Vec& b) { return norm(a - b); }

bool all_finite(const Vec& a) {
  for (int i = 0; i < a.dim(); ++i) {
    if (!std::isfinite(a[i])) return false;
  }
  return true;
}

}  // namespace cylab
