#pragma once

#include <cstddef>
#include <functional>

namespace gramprof {

// Worker count honouring GRAMMAR_PROFILE_THREADS (a cap, >= 1). Falls back to
// std::thread::hardware_concurrency().
unsigned default_worker_count();

// Splits [0, n) into at most `workers` contiguous chunks and runs
// fn(begin, end, worker_index) on each, joining before return. The first
// exception thrown by any chunk is rethrown. workers == 0 means default.
void parallel_chunks(std::size_t n, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, unsigned)>& fn);

}  // namespace gramprof
