#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace ivb {

// Worker cap: min(hardware concurrency, IVB_THREADS if set), at least 1.
inline int thread_budget() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("IVB_THREADS")) {
        try {
            int cap = std::stoi(env);
            if (cap >= 1 && cap < n) n = cap;
        } catch (const std::exception&) {
        }
    }
    return n;
}

// Runs fn(i) for i in [0, n) across at most thread_budget() threads.
// Callers keep determinism by writing results into index i and reducing
// after the join; fn must not touch shared mutable state.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const int workers = thread_budget();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = begin + chunk < n ? begin + chunk : n;
        if (begin >= end) break;
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace ivb
