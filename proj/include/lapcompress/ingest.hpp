#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lapcompress/graph.hpp"
#include "lapcompress/types.hpp"

namespace lapcompress {

// Field snapshot data on a contiguity graph. The graph is undirected:
// missing reverse edges are added at the same weight on load. Snapshots are
// daily state vectors (time_index = day, instance_id = 0), repaired by
// forward-fill so no missing values remain.
struct FieldDataset {
    NetworkGraph graph;
    std::vector<Snapshot> snapshots;
    std::string label;
    std::vector<std::string> warnings;  // dropped rows, fill notes
};

// Snapshot file: CSV with header `time_index,node_0,...,node_{n-1}` or a
// labeled header matching the node-label file. Empty cells and nan/na are
// treated as missing and forward-filled from the previous day (leading gaps
// take the first available value); a row with every value missing is dropped
// with a warning. Unparseable cells are errors naming the line.
FieldDataset load_dataset(const std::filesystem::path& edge_file,
                          const std::filesystem::path& snapshot_file,
                          const std::optional<std::filesystem::path>& labels_file = {});

void write_field_snapshots_csv(const FieldDataset& dataset,
                               const std::filesystem::path& file);

struct FieldSynthParams {
    double base_level = 0.24;      // network-wide mean rate
    double gradient_scale = 0.5;   // amplitude of the slow wide-area modes
    double texture_scale = 0.85;   // amplitude of the mid-frequency texture
    int drift_period = 180;        // days per full drift cycle of the slow modes
    double weekend_offset = -0.04; // shift applied on days 5 and 6 of each week
    double noise_sigma = 0.03;     // per-node per-day Gaussian noise
    int modes = 6;                 // slow spatial modes beyond the constant
};

// Synthetic daily rates on a graph: smooth regional gradients built from the
// lowest Laplacian modes, drifting slowly over days, plus a weekly weekend
// offset and small noise. Values clipped to [0, 1]. Deterministic in seed.
std::vector<Snapshot> synthesize_field_data(const NetworkGraph& graph, int days,
                                            std::uint64_t seed,
                                            const FieldSynthParams& params = {});

}  // namespace lapcompress
