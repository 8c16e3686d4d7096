// Index-parallel evaluation over sample sets. Work items are pure functions
// of their index with deterministic per-index seeds; results land in
// preallocated slots, so the thread count never changes any output byte.
// GRASSTOOL_THREADS caps the pool.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace grasstool {

inline unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GRASSTOOL_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
    }
    return hw;
}

template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    const unsigned budget = std::min<unsigned>(thread_budget(), static_cast<unsigned>(std::max(1, count)));
    if (budget <= 1 || count < 4) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(budget);
    for (unsigned w = 0; w < budget; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace grasstool
