#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bihat {

using cplx = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Deterministic pairwise summation (fixed recursion split, lexicographic
/// input order). Same result regardless of thread count.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline cplx pairwise_sum(std::span<const cplx> v) {
    if (v.size() <= 32) {
        cplx s = 0.0;
        for (const cplx& x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

namespace detail {

inline double exp_bump(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

} // namespace detail

/// Smooth transition built from exp(-1/x): 0 for x <= 0, 1 for x >= 1,
/// and smooth_step(x) + smooth_step(1-x) = 1 exactly.
inline double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = detail::exp_bump(x);
    const double b = detail::exp_bump(1.0 - x);
    return a / (a + b);
}

/// Number of worker threads: BIHAT_THREADS if set, hardware parallelism
/// otherwise, always at least 1.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("BIHAT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Parallel loop over [0, count). Each index writes only its own slot in the
/// caller's output, so results never depend on scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    const unsigned threads = std::min<std::size_t>(thread_budget(), count == 0 ? 1 : count);
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < count; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace bihat
