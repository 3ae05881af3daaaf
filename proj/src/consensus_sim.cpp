#include "lapcompress/consensus_sim.hpp"

#include <random>
#include <sstream>
#include <vector>

#include "lapcompress/errors.hpp"
#include "lapcompress/io.hpp"
#include "sim_common.hpp"

namespace lapcompress {

namespace {
constexpr std::uint64_t kStreamDomain = 0x636f6e73u;  // "cons"
}

ConsensusResult simulate_consensus(const ConsensusConfig& cfg) {
    sim::require_row_stochastic(cfg.a);
    const int n = static_cast<int>(cfg.a.rows());
    if (cfg.k_max < 0) throw ValidationError("k_max must be nonnegative");
    if (cfg.ensemble_size < 1) throw ValidationError("ensemble_size must be >= 1");
    if (cfg.input_node && (*cfg.input_node < 0 || *cfg.input_node >= n))
        throw ValidationError("input node " + std::to_string(*cfg.input_node) +
                              " outside [0, " + std::to_string(n) + ")");
    if (cfg.initial_state && cfg.initial_state->size() != n)
        throw ValidationError("initial state has wrong dimension");
    std::vector<int> times = sim::sorted_unique_times(cfg.snapshot_times, cfg.k_max);

    const int m = cfg.ensemble_size;
    const int t_count = static_cast<int>(times.size());
    ConsensusResult result;
    result.snapshots.resize(static_cast<std::size_t>(m) * t_count);
    result.input_nodes.resize(m);

    sim::run_blocked(m, cfg.threads, [&](int begin, int end) {
        const int cols = end - begin;
        Matrix x(n, cols);
        for (int c = 0; c < cols; ++c)
            x.col(c) = cfg.initial_state ? *cfg.initial_state : Vector::Zero(n);

        std::vector<std::mt19937_64> rngs;
        std::vector<std::normal_distribution<double>> gauss(cols);
        rngs.reserve(cols);
        std::vector<int> z(cols);
        for (int c = 0; c < cols; ++c) {
            rngs.push_back(sim::instance_rng(kStreamDomain, cfg.seed, begin + c));
            if (cfg.input_node) {
                z[c] = *cfg.input_node;
            } else {
                std::uniform_int_distribution<int> pick(0, n - 1);
                z[c] = pick(rngs[c]);
            }
            result.input_nodes[begin + c] = z[c];
        }

        auto record = [&](int time_slot, int k) {
            for (int c = 0; c < cols; ++c) {
                Snapshot& s = result.snapshots[static_cast<std::size_t>(begin + c) * t_count +
                                               time_slot];
                s.values = x.col(c);
                s.time_index = k;
                s.instance_id = begin + c;
            }
        };

        int next_time = 0;
        while (next_time < t_count && times[next_time] == 0) record(next_time++, 0);
        Matrix scratch(n, cols);
        for (int k = 0; k < cfg.k_max && next_time < t_count; ++k) {
            scratch.noalias() = cfg.a * x;
            x.swap(scratch);
            if (cfg.drive_noise)
                for (int c = 0; c < cols; ++c) x(z[c], c) += gauss[c](rngs[c]);
            while (next_time < t_count && times[next_time] == k + 1) record(next_time++, k + 1);
        }
    });
    return result;
}

Matrix ensemble_moment(const std::vector<Snapshot>& at_fixed_time,
                       const LaplacianBasis& basis) {
    if (at_fixed_time.size() < 2)
        throw ValidationError("ensemble_moment needs at least 2 snapshots");
    const int time_index = at_fixed_time.front().time_index;
    const int n = basis.n;
    Matrix stacked(n, static_cast<Eigen::Index>(at_fixed_time.size()));
    for (std::size_t i = 0; i < at_fixed_time.size(); ++i) {
        if (at_fixed_time[i].time_index != time_index)
            throw ValidationError("ensemble_moment: snapshots mix time indices " +
                                  std::to_string(time_index) + " and " +
                                  std::to_string(at_fixed_time[i].time_index));
        if (at_fixed_time[i].values.size() != n)
            throw ValidationError("ensemble_moment: snapshot dimension mismatch");
        stacked.col(static_cast<Eigen::Index>(i)) = at_fixed_time[i].values;
    }
    Matrix s = basis.W * stacked;
    return (s * s.transpose()) / static_cast<double>(at_fixed_time.size());
}

void write_input_nodes_csv(const std::vector<int>& input_nodes,
                           const std::filesystem::path& file) {
    std::ostringstream out;
    out << "instance_id,input_node\n";
    for (std::size_t i = 0; i < input_nodes.size(); ++i)
        out << i << "," << input_nodes[i] << "\n";
    atomic_write_text(file, out.str());
}

}  // namespace lapcompress
