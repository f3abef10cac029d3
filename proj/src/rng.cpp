#include "freezetree/rng.hpp"

namespace freezetree {

namespace {

std::mt19937_64 seeded_engine(std::initializer_list<std::uint64_t> words) {
  std::vector<std::uint32_t> parts;
  for (auto w : words) {
    parts.push_back(static_cast<std::uint32_t>(w));
    parts.push_back(static_cast<std::uint32_t>(w >> 32));
  }
  std::seed_seq seq(parts.begin(), parts.end());
  return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : engine_(seeded_engine({seed})) {}

Rng::Rng(std::uint64_t master_seed, std::uint64_t stream)
    : engine_(seeded_engine({master_seed, stream, 0x9e3779b97f4a7c15ULL})) {}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound <= 1) return 0;
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace freezetree
