#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace drainage {

inline int default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Evaluates fn(i) for i in [0, n) across `threads` workers and returns
/// the results indexed by i. Each item must depend only on its index
/// (replicate seeds are derived from i), so the output is identical for
/// any thread count. The first exception thrown is re-raised after join.
template <typename Fn>
auto parallel_map(long n, int threads, Fn&& fn)
    -> std::vector<decltype(fn(0L))> {
    using T = decltype(fn(0L));
    std::vector<T> out(static_cast<std::size_t>(n));
    if (threads <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
        return out;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        while (true) {
            const long i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                out[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int k = static_cast<int>(std::min<long>(threads, n));
    pool.reserve(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(error);
    return out;
}

/// Chunked variant for accumulator reductions: splits [0, n) into
/// fixed-size chunks, runs fn over each index and merges the per-chunk
/// accumulators in chunk order. The reduction order is independent of
/// the thread count, so floating-point results are reproducible.
template <typename Acc, typename Fn>
Acc parallel_accumulate(long n, int threads, long chunk, Fn&& fn) {
    const long n_chunks = (n + chunk - 1) / chunk;
    auto parts = parallel_map(n_chunks, threads, [&](long ci) {
        Acc acc{};
        const long lo = ci * chunk;
        const long hi = std::min(n, lo + chunk);
        for (long i = lo; i < hi; ++i) fn(acc, i);
        return acc;
    });
    Acc total{};
    for (const auto& part : parts) total.merge(part);
    return total;
}

}  // namespace drainage
