#pragma once

#include <cstdint>
#include <random>

namespace eprbm {

using Rng = std::mt19937_64;

/// Named sub-streams split off a master seed.
enum class Stream : std::uint64_t {
  data = 1,
  init = 2,
  chains = 3,
  shuffle = 4,
};

/// SplitMix64 finalizer applied to (master, stream). Every command derives its
/// generators through this so that one `--seed` controls the whole run.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream) {
  return derive_seed(master, static_cast<std::uint64_t>(stream));
}

inline Rng make_rng(std::uint64_t master, Stream stream) {
  return Rng{derive_seed(master, stream)};
}

/// Uniform double in [0, 1) from the top 53 bits of one draw. Unlike
/// std::uniform_real_distribution this is identical across standard libraries.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

}  // namespace eprbm
