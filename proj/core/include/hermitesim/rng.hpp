#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace hermite {

// Generator for one replicate, derived from (seed, index) alone so results do
// not depend on how replicates are distributed over workers.
inline std::mt19937_64 replicate_rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed & 0xffffffffULL),
        static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(index & 0xffffffffULL),
        static_cast<std::uint32_t>(index >> 32),
    };
    return std::mt19937_64(seq);
}

// Runs body(i) for i in [0, n) on `workers` threads in contiguous blocks.
// Callers write results positionally, so the partition never affects values.
// The first exception thrown by any block is rethrown on the calling thread.
inline void parallel_for(std::size_t n, int workers,
                         const std::function<void(std::size_t)>& body) {
    if (workers < 1) workers = 1;
    const std::size_t blocks = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    if (blocks <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(blocks);
    std::vector<std::thread> pool;
    pool.reserve(blocks);
    const std::size_t base = n / blocks;
    const std::size_t extra = n % blocks;
    std::size_t start = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t len = base + (b < extra ? 1 : 0);
        const std::size_t lo = start;
        const std::size_t hi = start + len;
        start = hi;
        pool.emplace_back([&body, &errors, lo, hi, b] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[b] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace hermite
