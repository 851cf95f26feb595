#pragma once

#include <cstdint>
#include <random>

namespace ipse {

using Rng = std::mt19937_64;

/// Counts calls to the generative model. One meter per learning run;
/// evaluation games use a separate meter.
struct CallMeter {
  std::uint64_t calls = 0;
  void tick() { ++calls; }
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Stream-splitting rule: a substream seed is the splitmix64 hash chain of
/// the master seed and the stream coordinates. Replication r of variant v
/// depends only on (master_seed, v, r); evaluation streams additionally mix
/// the iteration index so that evaluations never perturb the learning stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b, std::uint64_t c = 0) {
  using detail::splitmix64;
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  s = splitmix64(s ^ c);
  return s;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace ipse
