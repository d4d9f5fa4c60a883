#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <optional>
#include <thread>
#include <vector>

namespace sqm {

/// Worker count: explicit request, else SQM_THREADS, else hardware concurrency.
inline unsigned resolve_threads(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SQM_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

/// Lowest index in [0, count) satisfying `pred`, or nullopt.
///
/// Work is handed out in ascending chunks; a chunk is skipped once a lower hit is known,
/// so the answer is the same for every thread count.
template <typename Pred>
std::optional<std::size_t> parallel_find_first(std::size_t count, Pred&& pred, unsigned threads = 0) {
    threads = resolve_threads(threads);
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    if (threads <= 1 || count < 256) {
        for (std::size_t i = 0; i < count; ++i)
            if (pred(i)) return i;
        return std::nullopt;
    }
    const std::size_t chunk = std::max<std::size_t>(64, count / (threads * 16));
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{kNone};
    auto worker = [&] {
        while (true) {
            const std::size_t start = next.fetch_add(chunk);
            if (start >= count || start >= best.load()) return;
            const std::size_t stop = std::min(count, start + chunk);
            for (std::size_t i = start; i < stop; ++i) {
                if (i >= best.load()) break;
                if (pred(i)) {
                    std::size_t cur = best.load();
                    while (i < cur && !best.compare_exchange_weak(cur, i)) {}
                    break;
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    const auto hit = best.load();
    return hit == kNone ? std::nullopt : std::optional(hit);
}

}  // namespace sqm
