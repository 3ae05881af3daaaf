#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lapcompress/types.hpp"

namespace lapcompress {

struct Pin {
    int node = 0;
    int status = 0;  // 0 or 1
};

// Two-stage stochastic voter model. Stage 1: y[k] = A x[k]. Stage 2: each
// x_i[k+1] ~ Bernoulli(y_i[k]) independently. Pinned nodes keep their fixed
// status after every update (and in the initial state) while still entering
// their neighbors' averages in stage 1.
struct VoterConfig {
    Matrix a;                             // row-stochastic within 1e-10
    std::vector<Pin> pinned;              // distinct nodes
    int k_max = 0;
    int ensemble_size = 1;
    std::uint64_t seed = 0;
    std::vector<int> snapshot_times;      // each in [0, k_max]
    std::optional<Vector> initial_state;  // 0/1 entries; nullopt: fair coin
    int threads = 0;                      // 0: hardware concurrency
};

// Binary-valued snapshots ordered by (instance_id, time_index).
// Deterministic given the seed; one stream per instance.
std::vector<Snapshot> simulate_voter(const VoterConfig& cfg);

// Stationary mean of the pinned chain: solves E[x] = A E[x] with pinned rows
// replaced by their constants. Requires the free block of A to have spectral
// radius < 1 (guaranteed on a strongly connected graph with >= 1 pin);
// throws NumericError if the linear system is singular.
Vector voter_mean_field(const VoterConfig& cfg);

}  // namespace lapcompress
