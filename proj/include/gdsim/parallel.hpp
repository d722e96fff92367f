#pragma once

#include <cstddef>
#include <functional>

namespace gdsim {

// Default worker count: GDSIM_THREADS environment variable if set,
// otherwise std::thread::hardware_concurrency().
unsigned default_thread_count();

// Runs fn(lo, hi) over contiguous chunks of [begin, end), at most `threads`
// workers. Chunk boundaries depend only on (begin, end, threads); callers that
// need thread-count-independent results must write into per-index slots and
// reduce in index order afterwards.
void parallel_chunks(std::size_t begin, std::size_t end, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

// Convenience wrapper: fn(i) for each i in [begin, end).
void parallel_for(std::size_t begin, std::size_t end, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace gdsim
