#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace vlasov {

// Global worker budget. 0 = use all hardware threads. Set once at startup
// (CLI --threads / VLASOV_THREADS); computations read it on entry.
void set_thread_budget(int n);
int thread_budget();

// Runs fn(i) for i in [0, n). Work is split into fixed-size grains so that
// floating-point reduction order never depends on the thread count: callers
// that reduce must accumulate per-grain partials and combine them in index
// order (see parallel_reduce below).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

// Fixed grain used for deterministic reductions.
inline constexpr std::size_t kReduceGrain = 256;

// Deterministic parallel sum: partial(i0, i1) returns the serial sum of the
// grain [i0, i1); partials are combined sequentially in grain order, so the
// result is bit-identical for any thread budget.
template <class T>
T parallel_reduce(std::size_t n, const std::function<T(std::size_t, std::size_t)>& partial) {
    std::size_t n_grains = (n + kReduceGrain - 1) / kReduceGrain;
    std::vector<T> parts(n_grains);
    parallel_for(n_grains, [&](std::size_t g) {
        std::size_t i0 = g * kReduceGrain;
        std::size_t i1 = i0 + kReduceGrain < n ? i0 + kReduceGrain : n;
        parts[g] = partial(i0, i1);
    });
    T total{};
    for (auto& p : parts) total += p;
    return total;
}

}  // namespace vlasov
