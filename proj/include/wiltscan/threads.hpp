#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace wiltscan {

namespace detail {
inline unsigned& thread_count_ref() {
    static unsigned count = 1;
    return count;
}
} // namespace detail

inline void set_thread_count(unsigned n) { detail::thread_count_ref() = n == 0 ? 1 : n; }
inline unsigned thread_count() { return detail::thread_count_ref(); }

// Runs body(i) for i in [0, n). Each task writes only to its own output slot
// and seeds its own RNG stream from the task index, so results are identical
// for any thread count.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
    unsigned workers = thread_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                if (!failed.exchange(true)) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned spawn = workers < n ? workers : static_cast<unsigned>(n);
    pool.reserve(spawn);
    for (unsigned t = 0; t < spawn; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace wiltscan
