#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "cylab/vec.hpp"

namespace cylab {

// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

// Derives a stream id from a replica index and a purpose tag.
std::uint64_t stream_id(std::uint64_t replica, std::uint64_t tag);

// Counter-based generator. The k-th output is a pure function of
// (seed, stream, k), so any replica can be regenerated in isolation.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  std::uint64_t poisson(double mean);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t draws() const { return draws_; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::uint64_t draws_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int buffered_ = 0;
};

double inverse_normal_cdf(double p);

// Uniform unit vector in R^dim (no sign canonicalization).
Vec uniform_unit_vector(CounterRng& rng, int dim);
// Uniform point in the ball of given radius in R^dim.
Vec uniform_in_ball(CounterRng& rng, int dim, double radius);

}  // namespace cylab
