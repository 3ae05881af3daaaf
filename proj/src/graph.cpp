#include "lapcompress/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "lapcompress/errors.hpp"
#include "lapcompress/io.hpp"

namespace lapcompress {

void validate_snapshot(const Snapshot& s) {
    for (Eigen::Index i = 0; i < s.values.size(); ++i)
        if (!std::isfinite(s.values[i]))
            throw ValidationError("snapshot (instance " + std::to_string(s.instance_id) +
                                  ", time " + std::to_string(s.time_index) +
                                  ") has a non-finite entry at node " + std::to_string(i));
}

namespace {

std::string edge_str(const Edge& e) {
    return "(" + std::to_string(e.src) + " -> " + std::to_string(e.dst) +
           ", w=" + format_double(e.weight) + ")";
}

}  // namespace

void validate_graph(const NetworkGraph& g) {
    if (g.n <= 0) throw ValidationError("graph must have a positive node count");
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : g.edges) {
        if (e.src < 0 || e.src >= g.n || e.dst < 0 || e.dst >= g.n)
            throw ValidationError("edge " + edge_str(e) + " references a node outside [0, " +
                                  std::to_string(g.n) + ")");
        if (e.src == e.dst)
            throw ValidationError("self-loop edge " + edge_str(e) + " is not allowed");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw ValidationError("edge " + edge_str(e) + " must have a strictly positive weight");
        if (!seen.insert({e.src, e.dst}).second)
            throw ValidationError("duplicate edge " + edge_str(e));
    }
    if (!g.node_labels.empty() && static_cast<int>(g.node_labels.size()) != g.n)
        throw ValidationError("node_labels has " + std::to_string(g.node_labels.size()) +
                              " entries for " + std::to_string(g.n) + " nodes");
}

LaplacianMatrix build_laplacian(const NetworkGraph& g) {
    validate_graph(g);
    LaplacianMatrix lap;
    lap.n = g.n;
    lap.entries = Matrix::Zero(g.n, g.n);
    // Edge src -> dst contributes -w at row dst, column src; the diagonal
    // absorbs the incoming weight so every row sums to zero.
    for (const Edge& e : g.edges) {
        lap.entries(e.dst, e.src) = -e.weight;
        lap.entries(e.dst, e.dst) += e.weight;
    }
    validate_laplacian(lap);
    return lap;
}

void validate_laplacian(const LaplacianMatrix& laplacian) {
    if (laplacian.n <= 0 || laplacian.entries.rows() != laplacian.n ||
        laplacian.entries.cols() != laplacian.n)
        throw ValidationError("Laplacian dimensions are inconsistent");
    double scale = laplacian.entries.cwiseAbs().rowwise().sum().maxCoeff();
    if (scale == 0.0) scale = 1.0;
    Vector row_sums = laplacian.entries.rowwise().sum();
    for (int i = 0; i < laplacian.n; ++i)
        if (std::abs(row_sums[i]) > 1e-10 * scale)
            throw ValidationError("Laplacian row " + std::to_string(i) +
                                  " sums to " + format_double(row_sums[i]) + ", expected 0");
}

bool is_strongly_connected(const NetworkGraph& g) {
    validate_graph(g);
    if (g.n == 1) return true;
    std::vector<std::vector<int>> fwd(g.n), rev(g.n);
    for (const Edge& e : g.edges) {
        fwd[e.src].push_back(e.dst);
        rev[e.dst].push_back(e.src);
    }
    auto reaches_all = [n = g.n](const std::vector<std::vector<int>>& adj) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int count = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    ++count;
                    stack.push_back(v);
                }
        }
        return count == n;
    };
    return reaches_all(fwd) && reaches_all(rev);
}

Matrix consensus_matrix(const NetworkGraph& g) {
    LaplacianMatrix lap = build_laplacian(g);
    Vector in_sum = Vector::Zero(g.n);
    for (const Edge& e : g.edges) in_sum[e.dst] += e.weight;
    for (int i = 0; i < g.n; ++i)
        if (in_sum[i] > 1.0 + 1e-12)
            throw ValidationError("node " + std::to_string(i) + " has incoming weight sum " +
                                  format_double(in_sum[i]) + " > 1; A would not be row-stochastic");
    Matrix a = Matrix::Identity(g.n, g.n) - lap.entries;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (a(i, j) < 0.0 && a(i, j) >= -1e-12) a(i, j) = 0.0;
    return a;
}

double default_geometric_radius(int n) {
    // Mean degree of a unit-square geometric graph is close to n*pi*r^2;
    // the 1.1 factor compensates for boundary loss at this density.
    return std::sqrt(10.0 / (M_PI * static_cast<double>(n))) * 1.1;
}

GeometricGraph random_geometric_graph(int n, double radius, double row_sum,
                                      std::uint64_t seed, GeometricWeights weights,
                                      int max_placements) {
    if (n < 2) throw ValidationError("geometric graph needs n >= 2");
    if (!(radius > 0.0)) throw ValidationError("radius must be positive");
    if (!(row_sum > 0.0) || !(row_sum < 1.0))
        throw ValidationError("row_sum must lie in (0, 1)");
    if (max_placements < 1) throw ValidationError("max_placements must be >= 1");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r2 = radius * radius;

    for (int attempt = 1; attempt <= max_placements; ++attempt) {
        std::vector<std::array<double, 2>> coords(n);
        for (auto& p : coords) {
            p[0] = unit(rng);
            p[1] = unit(rng);
        }

        std::vector<std::pair<int, int>> pairs;  // undirected, i < j
        std::vector<int> degree(n, 0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double dx = coords[i][0] - coords[j][0];
                double dy = coords[i][1] - coords[j][1];
                if (dx * dx + dy * dy <= r2) {
                    pairs.push_back({i, j});
                    ++degree[i];
                    ++degree[j];
                }
            }

        int min_degree = *std::min_element(degree.begin(), degree.end());
        if (min_degree == 0) continue;  // isolated vertex, certainly not connected

        GeometricGraph out;
        out.graph.n = n;
        out.coords = std::move(coords);
        out.placements = attempt;
        out.mean_degree =
            2.0 * static_cast<double>(pairs.size()) / static_cast<double>(n);

        int max_degree = *std::max_element(degree.begin(), degree.end());
        for (auto [i, j] : pairs) {
            double w_into_j, w_into_i;
            if (weights == GeometricWeights::kInRowSum) {
                // incoming weight = row_sum / in-degree, per destination
                w_into_j = row_sum / static_cast<double>(degree[j]);
                w_into_i = row_sum / static_cast<double>(degree[i]);
            } else {
                w_into_j = w_into_i = row_sum / static_cast<double>(max_degree);
            }
            out.graph.edges.push_back({i, j, w_into_j});
            out.graph.edges.push_back({j, i, w_into_i});
        }

        if (is_strongly_connected(out.graph)) return out;
    }
    throw ValidationError("no strongly connected placement found in " +
                          std::to_string(max_placements) +
                          " attempts; increase the connection radius");
}

NetworkGraph read_edge_list(const std::filesystem::path& file) {
    std::vector<std::string> lines = read_lines(file);
    NetworkGraph g;
    int max_node = -1;
    bool have_header_n = false;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        std::string line = lines[li];
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream in(line);
        std::string first;
        if (!(in >> first)) continue;  // blank or comment-only line
        std::string where = file.string() + ":" + std::to_string(li + 1);
        if (first == "nodes") {
            if (have_header_n) throw IoError(where + ": duplicate 'nodes' header");
            if (!(in >> g.n) || g.n <= 0) throw IoError(where + ": bad 'nodes' header");
            have_header_n = true;
            continue;
        }
        Edge e;
        std::istringstream row(line);
        std::string a, b, c, extra;
        if (!(row >> a >> b >> c) || (row >> extra))
            throw IoError(where + ": expected 'src dst weight'");
        try {
            e.src = std::stoi(a);
            e.dst = std::stoi(b);
        } catch (const std::exception&) {
            throw IoError(where + ": bad node index");
        }
        e.weight = parse_double(c, where);
        max_node = std::max({max_node, e.src, e.dst});
        g.edges.push_back(e);
    }
    if (!have_header_n) g.n = max_node + 1;
    if (g.n <= 0) throw IoError("'" + file.string() + "' contains no nodes");
    if (max_node >= g.n)
        throw IoError("'" + file.string() + "': edge references node " +
                      std::to_string(max_node) + " but header says nodes " +
                      std::to_string(g.n));
    validate_graph(g);
    return g;
}

void write_edge_list(const NetworkGraph& g, const std::filesystem::path& file) {
    validate_graph(g);
    std::ostringstream out;
    out << "nodes " << g.n << "\n";
    for (const Edge& e : g.edges)
        out << e.src << " " << e.dst << " " << format_double(e.weight) << "\n";
    atomic_write_text(file, out.str());
}

std::vector<std::string> read_node_labels(const std::filesystem::path& file) {
    std::vector<std::string> labels = read_lines(file);
    while (!labels.empty() && labels.back().empty()) labels.pop_back();
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i].empty())
            throw IoError(file.string() + ":" + std::to_string(i + 1) + ": empty label");
    return labels;
}

}  // namespace lapcompress
