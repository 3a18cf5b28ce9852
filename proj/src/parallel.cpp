#include "rdbp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace rdbp {

std::size_t configured_workers() {
  if (const char* env = std::getenv("RDBP_THREADS")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      return 0;
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 1 ? hw : 0;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  std::size_t workers) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rdbp
