#pragma once

#include <cstddef>
#include <functional>

namespace rdbp {

/// Worker cap from RDBP_THREADS; 0 (or unset on a single-core host) means
/// run inline on the calling thread.
std::size_t configured_workers();

/// Runs body(i) for i in [0, n). Each index is executed exactly once; callers
/// write results into per-index slots so output never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers);

inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  parallel_for(n, body, configured_workers());
}

}  // namespace rdbp
