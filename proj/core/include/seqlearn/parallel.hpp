#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace seqlearn {

inline std::size_t worker_count() {
    if (const char* env = std::getenv("SEQLEARN_WORKERS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    return 1;
}

// runs fn(0..n-1); fn writes into indexed slots so results are order-independent
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::mutex mtx;
    std::exception_ptr first;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mtx);
                    if (!first) first = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
}

}  // namespace seqlearn
