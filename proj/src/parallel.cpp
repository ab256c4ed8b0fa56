#include "postsim/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace postsim {

static int detect_worker_count() {
    if (const char *env = std::getenv("POSTSIM_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v <= 1) return 1;
        return static_cast<int>(std::min(v, 64L));
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<int>(std::min(hw, 16u));
}

int worker_count() {
    static const int count = detect_worker_count();
    return count;
}

void parallel_for(std::uint64_t begin, std::uint64_t end, std::uint64_t min_span,
                  const std::function<void(std::uint64_t, std::uint64_t)> &fn) {
    if (begin >= end) return;
    const std::uint64_t span = end - begin;
    const int workers = worker_count();
    if (workers <= 1 || span < min_span) {
        fn(begin, end);
        return;
    }
    const std::uint64_t chunks = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), span);
    std::vector<std::thread> pool;
    pool.reserve(chunks - 1);
    std::uint64_t chunk_begin = begin;
    for (std::uint64_t c = 0; c < chunks; ++c) {
        std::uint64_t chunk_end = begin + span * (c + 1) / chunks;
        if (c + 1 == chunks) {
            fn(chunk_begin, chunk_end);
        } else {
            pool.emplace_back(fn, chunk_begin, chunk_end);
        }
        chunk_begin = chunk_end;
    }
    for (auto &t : pool) t.join();
}

}  // namespace postsim
