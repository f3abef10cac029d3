#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace freezetree {

// Pseudorandom source used by every sampler in the library.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Streams are derived from (master seed, stream index) through
// std::seed_seq, which is also fully specified, and bounded integers and
// uniform reals are produced by our own code rather than by the
// implementation-defined <random> distributions. Together this makes every
// simulation bit-reproducible across platforms and standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t master_seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound);

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Stream for replication `index` of an experiment seeded with `master_seed`.
inline Rng replication_stream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(master_seed, index);
}

}  // namespace freezetree
