#pragma once

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace hyperlab {

inline int worker_threads() {
    if (const char* env = std::getenv("HYPERBOLIC_LAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// Deterministic regardless of schedule: the body writes only to its own index.
inline void parallel_for(int n, const std::function<void(int)>& body) {
    int threads = std::min(worker_threads(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (int i = t; i < n; i += threads) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Kronecker (golden ratio) sequence: cheap quasi-uniform samples.
inline double kronecker1(int i) {
    const double a = 0.6180339887498949;
    double v = 0.5 + a * (i + 1);
    return v - (long long)v;
}

inline std::pair<double, double> kronecker2(int i) {
    const double a1 = 0.7548776662466927, a2 = 0.5698402909980532;
    double x = 0.5 + a1 * (i + 1);
    double y = 0.5 + a2 * (i + 1);
    return {x - (long long)x, y - (long long)y};
}

} // namespace hyperlab
