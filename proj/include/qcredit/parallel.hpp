#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace qcredit {

// Fork-join loop over [0, count). Iterations must be independent and write
// only to their own slots; callers do any cross-iteration reduction afterwards
// in index order, which keeps results identical for every thread count.
inline void parallel_for(std::size_t count, int threads,
                         const std::function<void(std::size_t)>& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(n_workers - 1);
    for (std::size_t t = 1; t < n_workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

inline int default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace qcredit
