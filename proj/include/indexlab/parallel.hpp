#pragma once

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace indexlab {

// Worker-pool size: INDEXLAB_WORKERS if set, otherwise the available cores.
inline int worker_count() {
    if (const char* env = std::getenv("INDEXLAB_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(i) for i in [0, n). Scheduling is dynamic but fn writes only to
// index-addressed slots, so the outcome does not depend on the worker count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const int workers = worker_count();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int spawn = std::min<std::size_t>(workers, n);
    pool.reserve(spawn);
    for (int t = 0; t < spawn; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
}

// Deterministic parallel reduction: per-chunk partial sums are accumulated
// serially inside each chunk and combined in fixed chunk order, so the result
// is bit-identical for any worker count. term(i) must be pure.
template <class Term>
double parallel_sum(std::size_t n, Term&& term, std::size_t chunk = 4096) {
    if (n == 0) return 0.0;
    const std::size_t nchunks = (n + chunk - 1) / chunk;
    std::vector<double> partial(nchunks, 0.0);
    parallel_for(nchunks, [&](std::size_t c) {
        const std::size_t lo = c * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        double acc = 0.0;
        for (std::size_t i = lo; i < hi; ++i) acc += term(i);
        partial[c] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

}  // namespace indexlab
