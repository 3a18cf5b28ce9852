#pragma once

#include <cstdint>
#include <random>

namespace rdbp {

/// A seeded random stream owned by exactly one worker.
///
/// Streams for replicate `k` of a run with master seed `s` are obtained via
/// `RngStream::substream(s, k)`, which makes replicate output independent of
/// scheduling and worker count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  static RngStream substream(std::uint64_t master_seed, std::uint64_t index);

  /// Uniform draw strictly inside (0, 1) with 53 random bits.
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t next() { return engine_(); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rdbp
