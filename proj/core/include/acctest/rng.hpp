#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace acctest {

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for stream `index` of a run seeded with `seed`. Depends only on the
/// pair, never on scheduling, so parallel runs reproduce serial ones.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index);

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator. All sampling
/// helpers are implemented here (no std:: distributions) so that streams are
/// identical across standard library implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal(double mean = 0.0, double sd = 1.0);
  bool bernoulli(double p);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Gamma(shape, 1) by Marsaglia-Tsang.
  double gamma(double shape);
  double beta(double a, double b);

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace acctest
