#pragma once

#include <cstdint>
#include <random>

namespace indep {

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// A seeded source of uniform and standard normal variates.
///
/// Move-only: a stream is owned by exactly one consumer at a time and may be
/// handed to another thread by moving it. Output is fully determined by the
/// seed on every platform (mt19937_64 plus a hand-written polar method).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for replication `index` of a run seeded by `master`.
  /// Depends only on (master, index), never on scheduling.
  static RandomStream substream(std::uint64_t master, std::uint64_t index) {
    return RandomStream(splitmix64(splitmix64(master) ^ splitmix64(~index)));
  }

  RandomStream(RandomStream&&) noexcept = default;
  RandomStream& operator=(RandomStream&&) noexcept = default;
  RandomStream(const RandomStream&) = delete;
  RandomStream& operator=(const RandomStream&) = delete;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal by the Marsaglia polar method; variates come in pairs,
  /// the second is cached for the next call.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace indep
