#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lapcompress/types.hpp"

namespace lapcompress {

struct Edge {
    int src = 0;
    int dst = 0;
    double weight = 0.0;
};

// Weighted digraph. Edge (src, dst, w) means src directly influences dst;
// w is strictly positive. At most one edge per ordered pair, no self-loops.
struct NetworkGraph {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<std::string> node_labels;  // empty, or one label per node
};

// Throws ValidationError naming the offending edge or label on violation.
void validate_graph(const NetworkGraph& g);

struct LaplacianMatrix {
    int n = 0;
    Matrix entries;
};

// L has off-diagonal (dst, src) = -w for each edge, diagonal set so every
// row sums to zero (diagonal i = total incoming weight into node i).
LaplacianMatrix build_laplacian(const NetworkGraph& g);

// Row sums within 1e-10 of zero (relative to the largest absolute row sum).
void validate_laplacian(const LaplacianMatrix& laplacian);

bool is_strongly_connected(const NetworkGraph& g);

// A = I - L. Requires every node's incoming weight sum <= 1 so that A is
// row-stochastic with nonnegative diagonal; throws ValidationError naming
// the first violating node otherwise. Entries in [-1e-12, 0) are clamped.
Matrix consensus_matrix(const NetworkGraph& g);

enum class GeometricWeights {
    // Each node's incoming weights scaled to sum to row_sum.
    kInRowSum,
    // Every edge carries row_sum / max_degree in both directions, giving a
    // symmetric Laplacian with in-sums <= row_sum.
    kUniformSymmetric,
};

struct GeometricGraph {
    NetworkGraph graph;
    std::vector<std::array<double, 2>> coords;  // unit-square positions
    double mean_degree = 0.0;                   // realized undirected mean degree
    int placements = 1;                         // placements tried until strongly connected
};

// Radius giving mean degree near 10 for n points in the unit square.
double default_geometric_radius(int n);

// Vertices uniform in the unit square; bidirectional edges between all pairs
// within `radius`. Retries with fresh placements (up to max_placements) until
// the graph is strongly connected, then throws ValidationError advising a
// larger radius. Deterministic given (n, radius, row_sum, seed, weights).
GeometricGraph random_geometric_graph(int n, double radius, double row_sum,
                                      std::uint64_t seed,
                                      GeometricWeights weights = GeometricWeights::kInRowSum,
                                      int max_placements = 50);

// Edge-list text format: one `src dst weight` per line (0-based indices),
// '#' starts a comment, optional `nodes N` header line.
NetworkGraph read_edge_list(const std::filesystem::path& file);
void write_edge_list(const NetworkGraph& g, const std::filesystem::path& file);

// One label per line; line number = node index.
std::vector<std::string> read_node_labels(const std::filesystem::path& file);

}  // namespace lapcompress
