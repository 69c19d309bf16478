#pragma once

#include <array>
#include <initializer_list>
#include <span>

namespace cylab {

inline constexpr int kMaxDim = 16;

// Fixed-capacity vector with a runtime dimension in [1, kMaxDim].
class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim);
  Vec(std::initializer_list<double> init);

  static Vec unit(int dim, int axis);
  static Vec from(std::span<const double> coords);

  int dim() const { return dim_; }
  double& operator[](int i) { return c_[i]; }
  double operator[](int i) const { return c_[i]; }
  double* data() { return c_.data(); }
  const double* data() const { return c_.data(); }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  Vec& operator+=(const Vec& o);
  Vec& operator-=(const Vec& o);
  Vec& operator*=(double s);
  Vec& operator/=(double s);

  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator/(Vec a, double s) { return a /= s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }
  friend bool operator==(const Vec& a, const Vec& b);

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

double dot(const Vec& a, const Vec& b);
double norm_sq(const Vec& a);
double norm(const Vec& a);
double distance(const Vec& a, const Vec& b);
bool all_finite(const Vec& a);

}  // namespace cylab
