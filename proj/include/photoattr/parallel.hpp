#pragma once

#include <cstddef>
#include <functional>

namespace photoattr {

/// Global worker-thread count used by parallel loops. 0 = auto.
void set_thread_count(int n);
int thread_count();

/// Runs fn(block_index, begin, end) over [0, n) split into fixed-size blocks.
/// The block layout depends only on (n, block_size), never on the thread
/// count, so per-block accumulations reduced in block order give
/// schedule-independent results.
void parallel_blocks(std::size_t n, std::size_t block_size,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace photoattr
