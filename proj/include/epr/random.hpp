#pragma once

#include <cstdint>
#include <random>

namespace epr {

// Reproducible random stream identified by (master_seed, stream_id).
//
// Each stream is an independent mt19937_64 seeded through std::seed_seq from
// both halves of the seed and the stream id, so trial t can be replayed
// without generating trials 0..t-1 first.
class RandomSource {
 public:
  RandomSource(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform();

  // True with probability p (p is clamped to [0, 1]).
  bool bernoulli(double p);

  // Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace epr
