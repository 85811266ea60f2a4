#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ifm {

/// Deterministic RNG plumbing.
///
/// All randomness in the library flows through a std::mt19937_64 engine, but
/// uniform doubles are produced by an explicit bit manipulation rather than
/// std::uniform_real_distribution (whose output is implementation-defined).
/// This keeps trial outcomes byte-identical across compilers and platforms.
using Rng = std::mt19937_64;

/// SplitMix64 scrambler; used to decorrelate seeds for per-trial streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream for one trial of a Monte Carlo batch. Trials may run in
/// any order (or in parallel) and still reproduce the same per-trial draws.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return Rng{splitmix64(splitmix64(seed) ^ splitmix64(trial + 1))};
}

/// Uniform double in [0, 1) with 53 random bits, platform-independent.
inline double draw01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draws an index from an unnormalized discrete distribution with exactly one
/// uniform draw. Weights must be non-negative with a positive sum; the draw is
/// scaled by the actual total, so a total slightly off 1 never biases the
/// tail. Returns the last index with positive weight if rounding pushes the
/// draw past the cumulative sum.
std::size_t sample_discrete(Rng& rng, std::span<const double> weights);

}  // namespace ifm
