#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace roverlay {

// Runs fn(y_begin, y_end) over contiguous row bands. Bands partition [0, rows)
// so per-pixel writers stay single-writer; results must not depend on the
// band split, which keeps output identical for any thread count.
inline void parallel_rows(int rows, int threads, const std::function<void(int, int)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || rows < 2 * threads) {
        fn(0, rows);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const int band = (rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int y0 = t * band;
        const int y1 = std::min(rows, y0 + band);
        if (y0 >= y1) break;
        pool.emplace_back(fn, y0, y1);
    }
    for (auto& th : pool) th.join();
}

}  // namespace roverlay
