#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace escdim {

// Runs fn(row) for every row in [0, rows), split into contiguous blocks over
// the worker threads. Callers must write results into per-row slots and reduce
// them in row order afterwards; that convention makes every consumer of this
// helper bit-identical regardless of the thread count. fn must not throw.
inline void parallel_rows(int rows, const std::function<void(int)>& fn,
                          unsigned threads = 0) {
    if (rows <= 0) return;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(rows));
    if (threads <= 1) {
        for (int r = 0; r < rows; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    int base = rows / static_cast<int>(threads);
    int extra = rows % static_cast<int>(threads);
    int start = 0;
    for (unsigned t = 0; t < threads; ++t) {
        int len = base + (static_cast<int>(t) < extra ? 1 : 0);
        pool.emplace_back([start, len, &fn] {
            for (int r = start; r < start + len; ++r) fn(r);
        });
        start += len;
    }
    for (auto& th : pool) th.join();
}

}  // namespace escdim
