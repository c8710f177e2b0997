#pragma once

#include <cstdint>

namespace cnfgraph {

// All sampling in this library runs on SplitMix64 (Vigna's public-domain
// generator). The generator, the uniform-double mapping and the replicate
// seed derivation below are part of the on-disk format contract: instances
// regenerate bit-identically from (params, seed) on any platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t next() { return mix(state_ += kGamma); }

  // Uniform in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

 private:
  std::uint64_t state_;
};

// Seed for replicate r of a run with the given master seed: the (r+1)-th
// output of a SplitMix64 sequence seeded with master. Closed form, so
// replicates can be dispatched to workers without sharing stream state.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t replicate) {
  return SplitMix64::mix(master + (replicate + 1) * SplitMix64::kGamma);
}

}  // namespace cnfgraph
