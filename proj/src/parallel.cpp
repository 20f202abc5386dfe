#include "otalc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace otalc {

int thread_budget() {
    int budget = 0;
    if (const char* env = std::getenv("OTALC_THREADS")) {
        budget = std::atoi(env);
    }
    if (budget <= 0) {
        budget = static_cast<int>(std::thread::hardware_concurrency());
    }
    return std::max(budget, 1);
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) {
        return;
    }
    const int workers = static_cast<int>(std::min<std::int64_t>(thread_budget(), n));
    if (workers <= 1) {
        for (std::int64_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t i = next.fetch_add(1);
                if (i >= n || failed.load()) {
                    return;
                }
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) {
                        failure = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace otalc
