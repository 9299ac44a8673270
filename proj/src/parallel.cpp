#include "slq/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace slq {

static std::atomic<int> g_threads{1};

void set_num_threads(int n) { g_threads.store(std::max(1, n), std::memory_order_relaxed); }

int num_threads() { return g_threads.load(std::memory_order_relaxed); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int nt = static_cast<int>(std::min(static_cast<std::size_t>(num_threads()), n));
    if (nt <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int w = 0; w < nt; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += nt) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace slq
