#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace pdirac {

// Static index partition over [0, n); results must be written by index so the
// outcome is independent of the worker count.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t w =
        std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(
                                     std::max(workers, 1)), n));
    if (w == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(w);
    for (std::size_t t = 0; t < w; ++t) {
        pool.emplace_back([&, t] {
            const std::size_t lo = n * t / w;
            const std::size_t hi = n * (t + 1) / w;
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace pdirac
