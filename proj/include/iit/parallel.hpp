#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace iit {

// Deterministic map over an index range: results land in a slot per index and
// are consumed in index order, so the outcome is independent of scheduling.
template <typename T>
std::vector<T> parallel_map(size_t count, const std::function<T(size_t)>& fn,
                            uint32_t threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<T> out(count);
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (uint32_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            while (true) {
                size_t i = next.fetch_add(1);
                if (i >= count) return;
                out[i] = fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace iit
