#pragma once

// Internal helpers shared by the two simulators.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "lapcompress/errors.hpp"
#include "lapcompress/io.hpp"
#include "lapcompress/types.hpp"

namespace lapcompress::sim {

constexpr int kBlockCols = 64;

inline void require_row_stochastic(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw ValidationError("state matrix must be square");
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        if (std::abs(a.row(i).sum() - 1.0) > 1e-10)
            throw ValidationError("state matrix row " + std::to_string(i) + " sums to " +
                                  format_double(a.row(i).sum()) +
                                  ", expected 1 (not row-stochastic)");
        if (a.row(i).minCoeff() < -1e-12)
            throw ValidationError("state matrix row " + std::to_string(i) +
                                  " has a negative entry");
    }
}

// One independent stream per instance, derived from (domain, seed, instance)
// so consensus and voter draws never overlap even for equal seeds.
inline std::mt19937_64 instance_rng(std::uint64_t domain, std::uint64_t seed, int instance) {
    std::seed_seq seq{domain, seed, static_cast<std::uint64_t>(instance)};
    return std::mt19937_64(seq);
}

inline std::vector<int> sorted_unique_times(const std::vector<int>& times, int k_max) {
    if (times.empty()) throw ValidationError("snapshot_times must be nonempty");
    std::vector<int> out = times;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.front() < 0 || out.back() > k_max)
        throw ValidationError("snapshot times must lie in [0, k_max]");
    return out;
}

// Runs fixed-size blocks of instances over threads. The worker must only
// touch state owned by instances in [begin, end), so results do not depend
// on the schedule or the thread count.
inline void run_blocked(int total, int threads, const std::function<void(int, int)>& worker) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = std::max(1, hw);
    int blocks = (total + kBlockCols - 1) / kBlockCols;
    threads = std::min(threads, blocks);
    if (threads <= 1) {
        for (int b = 0; b < blocks; ++b)
            worker(b * kBlockCols, std::min(total, (b + 1) * kBlockCols));
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int b = next.fetch_add(1);
                if (b >= blocks) return;
                worker(b * kBlockCols, std::min(total, (b + 1) * kBlockCols));
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace lapcompress::sim
