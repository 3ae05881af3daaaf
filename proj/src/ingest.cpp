#include "lapcompress/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "lapcompress/errors.hpp"
#include "lapcompress/io.hpp"
#include "lapcompress/spectral.hpp"

namespace lapcompress {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

bool is_missing_token(std::string t) {
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
    std::size_t start = 0;
    while (start < t.size() && (t[start] == ' ' || t[start] == '\t')) ++start;
    t = t.substr(start);
    if (t.empty()) return true;
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return t == "nan" || t == "na";
}

// Contiguity graphs are undirected; edge files may list each pair once.
void symmetrize(NetworkGraph& g) {
    std::set<std::pair<int, int>> present;
    for (const Edge& e : g.edges) present.insert({e.src, e.dst});
    std::vector<Edge> reverse;
    for (const Edge& e : g.edges)
        if (!present.count({e.dst, e.src})) reverse.push_back({e.dst, e.src, e.weight});
    g.edges.insert(g.edges.end(), reverse.begin(), reverse.end());
}

// Maps header columns (after time_index) to node indices: positional for
// node_i headers, by name when a label file is supplied.
std::vector<int> column_to_node(const std::vector<std::string>& header,
                                const std::vector<std::string>& labels,
                                const std::string& file) {
    const std::size_t n = header.size() - 1;
    std::vector<int> map(n);
    bool positional = true;
    for (std::size_t i = 0; i < n; ++i)
        if (header[i + 1] != "node_" + std::to_string(i)) positional = false;
    if (positional) {
        for (std::size_t i = 0; i < n; ++i) map[i] = static_cast<int>(i);
        return map;
    }
    if (labels.empty())
        throw IoError("'" + file + "': header is not node_0..node_{n-1} and no "
                      "node-label file was given");
    std::map<std::string, int> by_label;
    for (std::size_t i = 0; i < labels.size(); ++i) by_label[labels[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = by_label.find(header[i + 1]);
        if (it == by_label.end())
            throw IoError("'" + file + "': header column '" + header[i + 1] +
                          "' is not a known node label");
        map[i] = it->second;
    }
    return map;
}

}  // namespace

FieldDataset load_dataset(const std::filesystem::path& edge_file,
                          const std::filesystem::path& snapshot_file,
                          const std::optional<std::filesystem::path>& labels_file) {
    FieldDataset ds;
    ds.graph = read_edge_list(edge_file);
    symmetrize(ds.graph);
    if (labels_file) {
        ds.graph.node_labels = read_node_labels(*labels_file);
        if (static_cast<int>(ds.graph.node_labels.size()) != ds.graph.n)
            throw ValidationError("label file has " +
                                  std::to_string(ds.graph.node_labels.size()) +
                                  " labels for " + std::to_string(ds.graph.n) + " nodes");
    }
    validate_graph(ds.graph);
    if (ds.graph.n < 2) throw ValidationError("field dataset needs at least 2 nodes");
    ds.label = snapshot_file.stem().string();

    std::vector<std::string> lines = read_lines(snapshot_file);
    if (lines.empty()) throw IoError("'" + snapshot_file.string() + "' is empty");
    std::vector<std::string> header = split_csv_line(lines[0]);
    if (header.size() < 2 || header[0] != "time_index")
        throw IoError("'" + snapshot_file.string() +
                      "': expected header starting with time_index");
    const int n = static_cast<int>(header.size()) - 1;
    if (n != ds.graph.n)
        throw ValidationError("snapshot file has " + std::to_string(n) +
                              " node columns but the graph has " +
                              std::to_string(ds.graph.n) + " nodes");
    std::vector<int> col_node =
        column_to_node(header, ds.graph.node_labels, snapshot_file.string());

    int last_day = std::numeric_limits<int>::min();
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        std::string where = snapshot_file.string() + ":" + std::to_string(li + 1);
        std::vector<std::string> fields = split_csv_line(lines[li]);
        if (static_cast<int>(fields.size()) != n + 1)
            throw IoError(where + ": expected " + std::to_string(n + 1) + " columns, got " +
                          std::to_string(fields.size()));
        Snapshot snap;
        snap.time_index = static_cast<int>(parse_double(fields[0], where));
        if (snap.time_index <= last_day)
            throw ValidationError(where + ": time indices must be strictly increasing");
        snap.values = Vector::Constant(n, kMissing);
        int missing = 0;
        for (int c = 0; c < n; ++c) {
            if (is_missing_token(fields[c + 1])) {
                ++missing;
                continue;
            }
            snap.values[col_node[c]] = parse_double(fields[c + 1], where);
        }
        if (missing == n) {
            ds.warnings.push_back("dropped day " + std::to_string(snap.time_index) +
                                  " (" + where + "): every value missing");
            continue;
        }
        last_day = snap.time_index;
        snap.instance_id = 0;
        ds.snapshots.push_back(std::move(snap));
    }
    if (ds.snapshots.empty())
        throw ValidationError("'" + snapshot_file.string() + "' has no usable rows");

    // forward-fill per node; leading gaps take the first available value
    for (int node = 0; node < n; ++node) {
        double first_seen = kMissing;
        for (const Snapshot& s : ds.snapshots)
            if (!std::isnan(s.values[node])) {
                first_seen = s.values[node];
                break;
            }
        if (std::isnan(first_seen))
            throw ValidationError("node " + std::to_string(node) +
                                  " has no observed value on any day");
        double last = first_seen;
        for (Snapshot& s : ds.snapshots) {
            if (std::isnan(s.values[node])) {
                s.values[node] = last;
            } else {
                last = s.values[node];
            }
        }
    }
    for (const Snapshot& s : ds.snapshots) validate_snapshot(s);
    return ds;
}

void write_field_snapshots_csv(const FieldDataset& dataset,
                               const std::filesystem::path& file) {
    if (dataset.snapshots.empty()) throw ValidationError("no snapshots to write");
    const int n = dataset.graph.n;
    std::ostringstream out;
    out << "time_index";
    for (int i = 0; i < n; ++i) out << ",node_" << i;
    out << "\n";
    for (const Snapshot& s : dataset.snapshots) {
        out << s.time_index;
        for (int i = 0; i < n; ++i) out << "," << format_double(s.values[i]);
        out << "\n";
    }
    atomic_write_text(file, out.str());
}

std::vector<Snapshot> synthesize_field_data(const NetworkGraph& graph, int days,
                                            std::uint64_t seed,
                                            const FieldSynthParams& params) {
    if (days < 1) throw ValidationError("days must be positive");
    LaplacianBasis basis = eigenbasis(build_laplacian(graph));
    const int n = graph.n;
    const int low = std::min(params.modes, n - 1);
    const int mid = n - 1 - low;  // texture spans the full remaining spectrum

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // phases first, then the noise stream, so the layout is reproducible
    std::vector<double> phases(static_cast<std::size_t>(low + mid));
    for (double& p : phases) p = phase(rng);

    std::vector<Snapshot> out;
    out.reserve(days);
    for (int t = 0; t < days; ++t) {
        Vector x = Vector::Constant(n, params.base_level);
        // slow wide-area gradients on the smoothest modes
        for (int j = 0; j < low; ++j) {
            double period = static_cast<double>(params.drift_period) / (1.0 + 0.35 * j);
            double amp = params.gradient_scale / std::sqrt(1.0 + j);
            x += amp * std::sin(2.0 * M_PI * t / period + phases[j]) *
                 basis.V.col(1 + j);
        }
        // faster mid-frequency texture that moves through the basis
        for (int j = 0; j < mid; ++j) {
            double period = 21.0 + 2.5 * j;
            double amp = params.texture_scale / std::sqrt(2.0 + j);
            x += amp * std::sin(2.0 * M_PI * t / period + phases[low + j]) *
                 basis.V.col(1 + low + j);
        }
        if (t % 7 == 5 || t % 7 == 6) x.array() += params.weekend_offset;
        if (params.noise_sigma > 0.0)
            for (int i = 0; i < n; ++i) x[i] += params.noise_sigma * gauss(rng);
        x = x.cwiseMax(0.0).cwiseMin(1.0);
        Snapshot snap;
        snap.values = std::move(x);
        snap.time_index = t;
        snap.instance_id = 0;
        out.push_back(std::move(snap));
    }
    return out;
}

}  // namespace lapcompress
