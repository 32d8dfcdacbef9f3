#pragma once

// Shared scalars, environment knobs, and small utilities.

#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace subspec {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

// Deterministic float formatting: 17 significant digits round-trips doubles.
inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Worker cap from SUBSPEC_THREADS; defaults to hardware concurrency.
inline unsigned thread_budget() {
    if (const char* env = std::getenv("SUBSPEC_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Probe-sampler seed from SUBSPEC_SEED; fixed default keeps runs reproducible.
inline std::uint64_t probe_seed() {
    if (const char* env = std::getenv("SUBSPEC_SEED")) {
        return static_cast<std::uint64_t>(std::strtoull(env, nullptr, 10));
    }
    return 0x5AB5BECULL;
}

// Index-sharded parallel loop. Each worker writes only to indices it owns, so
// results are deterministic regardless of scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned workers = thread_budget();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

// splitmix64: tiny deterministic generator for probe sampling.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    // uniform in [a,b)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
};

}  // namespace subspec
