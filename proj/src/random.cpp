#include "epr/random.hpp"

#include <algorithm>

namespace epr {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(master_seed),
      static_cast<std::uint32_t>(master_seed >> 32),
      static_cast<std::uint32_t>(stream_id),
      static_cast<std::uint32_t>(stream_id >> 32),
      0x45505231u,  // domain tag
  };
  return std::mt19937_64(seq);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(seeded_engine(master_seed, stream_id)) {}

double RandomSource::uniform() {
  // Top 53 bits scaled by 2^-53.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

bool RandomSource::bernoulli(double p) {
  p = std::clamp(p, 0.0, 1.0);
  return uniform() < p;
}

std::uint64_t RandomSource::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo;
  if (span == UINT64_MAX) return engine_();
  // Rejection sampling.
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return lo + x % range;
}

}  // namespace epr
