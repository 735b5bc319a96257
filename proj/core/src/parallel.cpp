#include "gramprof/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gramprof {

unsigned default_worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GRAMMAR_PROFILE_THREADS")) {
    unsigned cap = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), cap);
    if (ec == std::errc{} && cap >= 1) return std::min(hw, cap);
  }
  return hw;
}

void parallel_chunks(std::size_t n, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, unsigned)>& fn) {
  if (n == 0) return;
  if (workers == 0) workers = default_worker_count();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    fn(0, n, 0);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&, begin, end, w] {
      try {
        fn(begin, end, w);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gramprof
