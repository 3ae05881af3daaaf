#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "lapcompress/spectral.hpp"
#include "lapcompress/types.hpp"

namespace lapcompress {

// Stochastically driven linear consensus: x[k+1] = A x[k] + B u[k], zero
// initial state, u[k] i.i.d. standard Gaussian, B the indicator of the
// instance's input node. Each instance draws from its own stream derived
// from (seed, instance_id), so results are reproducible regardless of
// scheduling.
struct ConsensusConfig {
    Matrix a;                            // row-stochastic within 1e-10
    std::optional<int> input_node;       // nullopt: drawn uniformly per instance
    int k_max = 0;
    int ensemble_size = 1;
    std::uint64_t seed = 0;
    std::vector<int> snapshot_times;     // each in [0, k_max]
    std::optional<Vector> initial_state; // default: zero
    bool drive_noise = true;             // test-only switch, u = 0 when false
    int threads = 0;                     // 0: hardware concurrency
};

struct ConsensusResult {
    std::vector<Snapshot> snapshots;  // ordered by (instance_id, time_index)
    std::vector<int> input_nodes;     // realized input node per instance
};

ConsensusResult simulate_consensus(const ConsensusConfig& cfg);

// Empirical second moment of s = W x over instances recorded at one common
// time index. Requires >= 2 snapshots; throws on mixed time indices.
Matrix ensemble_moment(const std::vector<Snapshot>& at_fixed_time,
                       const LaplacianBasis& basis);

// CSV with header `instance_id,input_node`.
void write_input_nodes_csv(const std::vector<int>& input_nodes,
                           const std::filesystem::path& file);

}  // namespace lapcompress
