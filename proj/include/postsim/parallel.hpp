#pragma once

#include <cstdint>
#include <functional>

namespace postsim {

// Worker count for data-parallel kernels. Reads POSTSIM_THREADS once
// (0 or 1 = sequential); defaults to the hardware concurrency, capped at 16.
int worker_count();

// Runs fn(begin, end) over static contiguous chunks of [begin, end).
// Chunk boundaries depend only on the range and worker count, and every index
// is processed exactly once, so kernels that write disjoint slices per index
// produce bit-identical arrays at any parallelism level. Ranges shorter than
// min_span run inline on the calling thread.
void parallel_for(std::uint64_t begin, std::uint64_t end, std::uint64_t min_span,
                  const std::function<void(std::uint64_t, std::uint64_t)> &fn);

}  // namespace postsim
