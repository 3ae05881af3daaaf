#include "lapcompress/voter_sim.hpp"

#include <random>
#include <set>
#include <vector>

#include "lapcompress/errors.hpp"
#include "sim_common.hpp"

namespace lapcompress {

namespace {

constexpr std::uint64_t kStreamDomain = 0x766f7465u;  // "vote"

void validate_pins(const std::vector<Pin>& pinned, int n) {
    std::set<int> seen;
    for (const Pin& p : pinned) {
        if (p.node < 0 || p.node >= n)
            throw ValidationError("pinned node " + std::to_string(p.node) + " outside [0, " +
                                  std::to_string(n) + ")");
        if (p.status != 0 && p.status != 1)
            throw ValidationError("pinned status must be 0 or 1");
        if (!seen.insert(p.node).second)
            throw ValidationError("node " + std::to_string(p.node) + " pinned twice");
    }
}

}  // namespace

std::vector<Snapshot> simulate_voter(const VoterConfig& cfg) {
    sim::require_row_stochastic(cfg.a);
    const int n = static_cast<int>(cfg.a.rows());
    validate_pins(cfg.pinned, n);
    if (cfg.k_max < 0) throw ValidationError("k_max must be nonnegative");
    if (cfg.ensemble_size < 1) throw ValidationError("ensemble_size must be >= 1");
    if (cfg.initial_state) {
        if (cfg.initial_state->size() != n)
            throw ValidationError("initial state has wrong dimension");
        for (int i = 0; i < n; ++i) {
            double v = (*cfg.initial_state)[i];
            if (v != 0.0 && v != 1.0)
                throw ValidationError("initial state entry " + std::to_string(i) +
                                      " is not 0 or 1");
        }
    }
    std::vector<int> times = sim::sorted_unique_times(cfg.snapshot_times, cfg.k_max);

    const int m = cfg.ensemble_size;
    const int t_count = static_cast<int>(times.size());
    std::vector<Snapshot> snapshots(static_cast<std::size_t>(m) * t_count);

    sim::run_blocked(m, cfg.threads, [&](int begin, int end) {
        const int cols = end - begin;
        Matrix x(n, cols);
        std::vector<std::mt19937_64> rngs;
        rngs.reserve(cols);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        for (int c = 0; c < cols; ++c) {
            rngs.push_back(sim::instance_rng(kStreamDomain, cfg.seed, begin + c));
            if (cfg.initial_state) {
                x.col(c) = *cfg.initial_state;
            } else {
                for (int i = 0; i < n; ++i) x(i, c) = unit(rngs[c]) < 0.5 ? 1.0 : 0.0;
            }
            for (const Pin& p : cfg.pinned) x(p.node, c) = static_cast<double>(p.status);
        }

        auto record = [&](int time_slot, int k) {
            for (int c = 0; c < cols; ++c) {
                Snapshot& s =
                    snapshots[static_cast<std::size_t>(begin + c) * t_count + time_slot];
                s.values = x.col(c);
                s.time_index = k;
                s.instance_id = begin + c;
            }
        };

        int next_time = 0;
        while (next_time < t_count && times[next_time] == 0) record(next_time++, 0);
        Matrix y(n, cols);
        for (int k = 0; k < cfg.k_max && next_time < t_count; ++k) {
            y.noalias() = cfg.a * x;  // stage 1: neighborhood averages in [0, 1]
            // stage 2: independent Bernoulli draws; every node consumes one
            // uniform so the stream layout does not depend on the pin set
            for (int c = 0; c < cols; ++c)
                for (int i = 0; i < n; ++i) x(i, c) = unit(rngs[c]) < y(i, c) ? 1.0 : 0.0;
            for (int c = 0; c < cols; ++c)
                for (const Pin& p : cfg.pinned) x(p.node, c) = static_cast<double>(p.status);
            while (next_time < t_count && times[next_time] == k + 1) record(next_time++, k + 1);
        }
    });
    return snapshots;
}

Vector voter_mean_field(const VoterConfig& cfg) {
    sim::require_row_stochastic(cfg.a);
    const int n = static_cast<int>(cfg.a.rows());
    validate_pins(cfg.pinned, n);

    std::vector<int> pin_status(n, -1);
    for (const Pin& p : cfg.pinned) pin_status[p.node] = p.status;
    std::vector<int> free_nodes;
    for (int i = 0; i < n; ++i)
        if (pin_status[i] < 0) free_nodes.push_back(i);

    Vector mean(n);
    for (const Pin& p : cfg.pinned) mean[p.node] = static_cast<double>(p.status);
    if (free_nodes.empty()) return mean;

    const int f = static_cast<int>(free_nodes.size());
    Matrix system(f, f);
    Vector rhs = Vector::Zero(f);
    for (int r = 0; r < f; ++r) {
        int i = free_nodes[r];
        for (int c = 0; c < f; ++c) system(r, c) = -cfg.a(i, free_nodes[c]);
        system(r, r) += 1.0;
        for (const Pin& p : cfg.pinned) rhs[r] += cfg.a(i, p.node) * p.status;
    }
    Eigen::FullPivLU<Matrix> lu(system);
    if (!lu.isInvertible())
        throw NumericError("mean-field fixed point is singular; the free block needs "
                           "spectral radius < 1 (is the graph connected to a pin?)");
    Vector mu = lu.solve(rhs);
    for (int r = 0; r < f; ++r) mean[free_nodes[r]] = mu[r];
    return mean;
}

}  // namespace lapcompress
