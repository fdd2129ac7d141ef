#pragma once

#include <cstdint>
#include <random>

namespace samo {

using Rng = std::mt19937_64;

// splitmix64 finalizer, used to fan a master seed out into independent
// per-component streams.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Component tags for seed derivation. Keeping these stable keeps stored run
// records replayable.
enum class Stream : std::uint64_t {
  Lhs = 1,
  LikelihoodGa = 2,
  Nsga3 = 3,
  ExtremeGa = 4,
  Moead = 5,
  Kmeans = 6,
  McBlock = 7,
  HvMc = 8,
  PfSample = 9,
  Jitter = 10,
};

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = mix64(master);
  s = mix64(s ^ static_cast<std::uint64_t>(stream));
  s = mix64(s ^ a);
  s = mix64(s ^ b);
  return s;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace samo
