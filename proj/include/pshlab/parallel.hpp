#pragma once

// Deterministic parallel loops and reductions. Work is split into static
// index ranges and every reduction is a pairwise sum in index order, so
// results do not depend on the thread count.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace pshlab {

/// Worker count: PSHLAB_THREADS if set and positive, else hardware concurrency.
inline unsigned thread_count() {
    if (const char* env = std::getenv("PSHLAB_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Calls fn(i) for i in [0, n). fn must only write to slot i of its outputs.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_lock;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(failure_lock);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

/// Pairwise (cascade) summation; fixed association order.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.subspan(0, half)) + pairwise_sum(x.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& x) {
    return pairwise_sum(std::span<const double>(x.data(), x.size()));
}

}  // namespace pshlab
