#include "rdbp/rng.hpp"

namespace rdbp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

RngStream RngStream::substream(std::uint64_t master_seed, std::uint64_t index) {
  return RngStream(splitmix64(master_seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

}  // namespace rdbp
