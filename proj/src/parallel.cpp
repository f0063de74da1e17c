#include "vlasov/parallel.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace vlasov {

namespace {
std::atomic<int> g_budget{0};
}

void set_thread_budget(int n) { g_budget.store(n < 0 ? 0 : n); }

int thread_budget() {
    int b = g_budget.load();
    if (b == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }
    return b;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    int workers = thread_budget();
    if (workers <= 1 || n < 2 * kReduceGrain) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (;;) {
            std::size_t i0 = next.fetch_add(kReduceGrain);
            if (i0 >= n) return;
            std::size_t i1 = i0 + kReduceGrain < n ? i0 + kReduceGrain : n;
            for (std::size_t i = i0; i < i1; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
}

}  // namespace vlasov
