// lapcompress: command-line driver for graph generation, the two stochastic
// network simulators, snapshot compression analysis, and the closed-form
// covariance / whitening diagnostics.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lapcompress/compress.hpp"
#include "lapcompress/consensus_sim.hpp"
#include "lapcompress/ensemble_stats.hpp"
#include "lapcompress/errors.hpp"
#include "lapcompress/graph.hpp"
#include "lapcompress/ingest.hpp"
#include "lapcompress/io.hpp"
#include "lapcompress/report.hpp"
#include "lapcompress/spectral.hpp"
#include "lapcompress/voter_sim.hpp"

namespace fs = std::filesystem;
using namespace lapcompress;

namespace {

struct Manifest {
    std::string subcommand;
    std::vector<std::string> files;
    std::vector<std::pair<std::string, std::string>> provenance;

    void add(const std::string& name) { files.push_back(name); }
    void note(const std::string& key, const std::string& value) {
        provenance.emplace_back(key, value);
    }
    void note(const std::string& key, long long value) { note(key, std::to_string(value)); }
    void note(const std::string& key, double value) { note(key, format_double(value)); }

    void write(const fs::path& out_dir) const {
        nlohmann::json doc;
        doc["tool_version"] = kToolVersion;
        doc["subcommand"] = subcommand;
        doc["files"] = files;
        nlohmann::json prov;
        for (const auto& [k, v] : provenance) prov[k] = v;
        doc["provenance"] = std::move(prov);
        atomic_write_text(out_dir / "manifest.json", doc.dump(2) + "\n");
    }
};

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(static_cast<int>(parse_double(tok, what)));
    if (out.empty()) throw ValidationError(what + " list is empty");
    return out;
}

std::vector<Pin> parse_pins(const std::string& text) {
    std::vector<Pin> pins;
    if (text.empty()) return pins;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        auto colon = tok.find(':');
        if (colon == std::string::npos)
            throw ValidationError("pin '" + tok + "' is not node:status");
        pins.push_back({static_cast<int>(parse_double(tok.substr(0, colon), "pin node")),
                        static_cast<int>(parse_double(tok.substr(colon + 1), "pin status"))});
    }
    return pins;
}

NetworkGraph load_graph(const fs::path& file, bool symmetrize_edges) {
    NetworkGraph g = read_edge_list(file);
    if (symmetrize_edges) {
        std::set<std::pair<int, int>> present;
        for (const Edge& e : g.edges) present.insert({e.src, e.dst});
        std::vector<Edge> add;
        for (const Edge& e : g.edges)
            if (!present.count({e.dst, e.src})) add.push_back({e.dst, e.src, e.weight});
        g.edges.insert(g.edges.end(), add.begin(), add.end());
    }
    return g;
}

int threads_flag = 0;  // 0: hardware concurrency

// --- gen-graph --------------------------------------------------------------

struct GenGraphArgs {
    int n = 200;
    double radius = 0.0;  // 0: pick for mean degree near 10
    double row_sum = 0.8;
    std::uint64_t seed = 1;
    bool symmetric = false;
    std::string out_dir = ".";
};

int run_gen_graph(const GenGraphArgs& args) {
    if (args.n < 2) throw ValidationError("--n must be at least 2");
    double radius = args.radius > 0.0 ? args.radius : default_geometric_radius(args.n);
    GeometricGraph gg = random_geometric_graph(
        args.n, radius, args.row_sum, args.seed,
        args.symmetric ? GeometricWeights::kUniformSymmetric : GeometricWeights::kInRowSum);
    fs::path out(args.out_dir);
    fs::create_directories(out);
    write_edge_list(gg.graph, out / "graph.edges");
    write_coords_csv(gg.coords, out / "coords.csv");

    Manifest m;
    m.subcommand = "gen-graph";
    m.add("graph.edges");
    m.add("coords.csv");
    m.note("n", static_cast<long long>(args.n));
    m.note("radius", radius);
    m.note("row_sum", args.row_sum);
    m.note("seed", static_cast<long long>(args.seed));
    m.note("weights", args.symmetric ? "uniform-symmetric" : "in-row-sum");
    m.note("mean_degree", gg.mean_degree);
    m.note("placements", static_cast<long long>(gg.placements));
    m.write(out);
    return 0;
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
    std::string model = "consensus";
    std::string graph_file;
    int k_max = 400;
    std::string snapshot_times = "400";
    int ensemble_size = 100;
    std::uint64_t seed = 1;
    int input_node = -1;  // -1: random per instance
    std::string pins = "";
    std::string initial = "coin";  // voter initial state
    std::string out_dir = ".";
};

int run_simulate(const SimulateArgs& args) {
    NetworkGraph g = load_graph(args.graph_file, false);
    Matrix a = consensus_matrix(g);
    fs::path out(args.out_dir);
    fs::create_directories(out);

    Manifest m;
    m.subcommand = "simulate";
    m.note("model", args.model);
    m.note("graph", args.graph_file);
    m.note("k_max", static_cast<long long>(args.k_max));
    m.note("snapshot_times", args.snapshot_times);
    m.note("ensemble_size", static_cast<long long>(args.ensemble_size));
    m.note("seed", static_cast<long long>(args.seed));

    if (args.model == "consensus") {
        ConsensusConfig cfg;
        cfg.a = std::move(a);
        if (args.input_node >= 0) cfg.input_node = args.input_node;
        cfg.k_max = args.k_max;
        cfg.ensemble_size = args.ensemble_size;
        cfg.seed = args.seed;
        cfg.snapshot_times = parse_int_list(args.snapshot_times, "--snapshot-times");
        cfg.threads = threads_flag;
        ConsensusResult result = simulate_consensus(cfg);
        write_snapshots_csv(result.snapshots, out / "snapshots.csv");
        write_input_nodes_csv(result.input_nodes, out / "input_nodes.csv");
        m.add("snapshots.csv");
        m.add("input_nodes.csv");
        m.note("input_node", args.input_node >= 0 ? std::to_string(args.input_node)
                                                  : std::string("random"));
    } else if (args.model == "voter") {
        VoterConfig cfg;
        cfg.a = std::move(a);
        // default pins: first and last node, one per status
        std::string pins = args.pins;
        if (pins.empty()) pins = "0:0," + std::to_string(g.n - 1) + ":1";
        if (pins == "none") pins.clear();
        cfg.pinned = parse_pins(pins);
        cfg.k_max = args.k_max;
        cfg.ensemble_size = args.ensemble_size;
        cfg.seed = args.seed;
        cfg.snapshot_times = parse_int_list(args.snapshot_times, "--snapshot-times");
        cfg.threads = threads_flag;
        if (args.initial == "all-zeros")
            cfg.initial_state = Vector::Zero(g.n);
        else if (args.initial == "all-ones")
            cfg.initial_state = Vector::Ones(g.n);
        else if (args.initial != "coin")
            throw ValidationError("--initial must be coin, all-zeros, or all-ones");
        write_snapshots_csv(simulate_voter(cfg), out / "snapshots.csv");
        m.add("snapshots.csv");
        m.note("pins", pins.empty() ? "none" : pins);
        m.note("initial", args.initial);
    } else {
        throw ValidationError("--model must be consensus or voter");
    }
    m.write(out);
    return 0;
}

// --- compress ----------------------------------------------------------------

struct CompressArgs {
    std::string graph_file;
    std::string snapshots_file;
    std::string k_grid = "1,5,10,20,40";
    int top = 4;
    bool refit = false;
    bool round = false;
    int round_k = 20;
    bool symmetrize = false;
    bool emit_basis = false;
    std::string label = "";
    std::string out_dir = ".";
};

int run_compress(const CompressArgs& args) {
    NetworkGraph g = load_graph(args.graph_file, args.symmetrize);
    LaplacianBasis basis = eigenbasis(build_laplacian(g));
    std::vector<Snapshot> snapshots = read_snapshots_csv(args.snapshots_file);
    std::vector<int> k_grid = parse_int_list(args.k_grid, "--k-grid");
    fs::path out(args.out_dir);
    fs::create_directories(out);

    CompressReport report;
    report.label = args.label.empty() ? fs::path(args.snapshots_file).stem().string()
                                      : args.label;
    report.n = basis.n;
    report.orthonormal = basis.orthonormal;
    report.eigenvalues = basis.eigenvalues;
    report.curve = energy_curve(basis, snapshots, k_grid, CurveKey::kInstance);
    for (const Snapshot& s : snapshots) {
        SnapshotDominant d;
        d.instance_id = s.instance_id;
        d.time_index = s.time_index;
        d.table = dominant_basis_table(basis, s, std::min(args.top, basis.n));
        report.dominant.push_back(std::move(d));
    }
    if (args.round) {
        for (const Snapshot& s : snapshots) {
            SparseApprox approx = k_sparse(basis, s, std::min(args.round_k, basis.n));
            Vector rounded = round_to_binary(reconstruct(basis, approx));
            report.matches.push_back({s.instance_id, s.time_index, approx.k,
                                      match_fraction(rounded, s.values)});
        }
    }
    std::optional<std::ostringstream> refit_csv;
    if (args.refit) {
        refit_csv.emplace();
        *refit_csv << "instance_id,K,energy_fraction,refit_energy_fraction\n";
        for (const Snapshot& s : snapshots)
            for (int k : k_grid) {
                SparseApprox approx = k_sparse(basis, s, k, /*refit=*/true);
                *refit_csv << s.instance_id << "," << k << ","
                           << format_double(approx.energy_fraction) << ","
                           << format_double(*approx.refit_energy_fraction) << "\n";
            }
    }
    report.provenance.emplace_back("graph", args.graph_file);
    report.provenance.emplace_back("snapshots", args.snapshots_file);
    report.provenance.emplace_back("k_grid", args.k_grid);
    report.provenance.emplace_back("refit", args.refit ? "true" : "false");

    write_compress_report(report, out / "report.json");
    write_energy_curve_csv(report.curve, out / "energy_curve.csv");
    write_dominant_table_csv(report.dominant.front().table, out / "dominant.csv");

    Manifest m;
    m.subcommand = "compress";
    m.add("report.json");
    m.add("energy_curve.csv");
    m.add("dominant.csv");
    if (refit_csv) {
        atomic_write_text(out / "refit_energy.csv", refit_csv->str());
        m.add("refit_energy.csv");
    }
    if (args.emit_basis) {
        write_eigenvalues_csv(basis, out / "eigenvalues.csv");
        write_basis_matrix_csv(basis, out / "basis_v.csv");
        m.add("eigenvalues.csv");
        m.add("basis_v.csv");
    }
    m.note("graph", args.graph_file);
    m.note("snapshots", args.snapshots_file);
    m.note("k_grid", args.k_grid);
    m.note("label", report.label);
    m.write(out);
    return 0;
}

// --- stats --------------------------------------------------------------------

struct StatsArgs {
    std::string graph_file;
    int z = 0;
    int k = 400;
    bool exact = false;
    bool whiten = false;
    bool symmetrize = false;
    std::string out_dir = ".";
};

int run_stats(const StatsArgs& args) {
    NetworkGraph g = load_graph(args.graph_file, args.symmetrize);
    LaplacianBasis basis = eigenbasis(build_laplacian(g));
    EnsembleStats stats = component_covariance(basis, args.z, args.k, args.exact);
    fs::path out(args.out_dir);
    fs::create_directories(out);

    write_sigma_csv(stats, out / "sigma.csv");
    {
        std::ostringstream c_out;
        for (int r = 0; r < basis.n; ++r) {
            for (int c = 0; c < basis.n; ++c) {
                if (c) c_out << ",";
                c_out << format_double(stats.c(r, c));
            }
            c_out << "\n";
        }
        atomic_write_text(out / "c.csv", c_out.str());
    }

    Manifest m;
    m.subcommand = "stats";
    m.add("sigma.csv");
    m.add("c.csv");
    m.note("graph", args.graph_file);
    m.note("z", static_cast<long long>(args.z));
    m.note("k", static_cast<long long>(args.k));
    m.note("mode", args.exact ? "exact" : "asymptotic");

    if (args.whiten) {
        WhiteningBasis wb = whitening_basis(basis, stats);
        write_variances_csv(wb, out / "variances.csv");
        write_whitening_report_json(stats, wb, out / "whitening.json");
        m.add("variances.csv");
        m.add("whitening.json");
    }
    m.write(out);
    return 0;
}

// --- synth-field ----------------------------------------------------------

struct SynthArgs {
    std::string graph_file;
    int days = 250;
    std::uint64_t seed = 20;
    FieldSynthParams params;
    std::string out_dir = ".";
};

int run_synth_field(const SynthArgs& args) {
    NetworkGraph g = load_graph(args.graph_file, true);
    std::vector<Snapshot> snapshots =
        synthesize_field_data(g, args.days, args.seed, args.params);
    fs::path out(args.out_dir);
    fs::create_directories(out);
    FieldDataset ds;
    ds.graph = std::move(g);
    ds.snapshots = std::move(snapshots);
    write_field_snapshots_csv(ds, out / "field_snapshots.csv");

    Manifest m;
    m.subcommand = "synth-field";
    m.add("field_snapshots.csv");
    m.note("graph", args.graph_file);
    m.note("days", static_cast<long long>(args.days));
    m.note("seed", static_cast<long long>(args.seed));
    m.note("noise_sigma", args.params.noise_sigma);
    m.note("weekend_offset", args.params.weekend_offset);
    m.write(out);
    return 0;
}

// --- report ---------------------------------------------------------------

struct ReportArgs {
    std::string figure = "ensemble";
    std::string graph_file;
    std::string snapshots_file;
    std::string labels_file;
    std::string coords_file;
    std::string k_grid = "1,5,10,20,40";
    int index = 1;  // 1-based basis direction for overlays
    std::string out_dir = ".";
};

int run_report(const ReportArgs& args) {
    fs::path out(args.out_dir);
    fs::create_directories(out);
    Manifest m;
    m.subcommand = "report";
    m.note("figure", args.figure);
    m.note("graph", args.graph_file);

    if (args.figure == "ensemble") {
        NetworkGraph g = load_graph(args.graph_file, false);
        LaplacianBasis basis = eigenbasis(build_laplacian(g));
        std::vector<Snapshot> snapshots = read_snapshots_csv(args.snapshots_file);
        figure_ensemble_data(basis, snapshots, parse_int_list(args.k_grid, "--k-grid"),
                             out / "energy_per_instance.csv", out / "energy_mean.csv");
        m.add("energy_per_instance.csv");
        m.add("energy_mean.csv");
        m.note("snapshots", args.snapshots_file);
        m.note("k_grid", args.k_grid);
    } else if (args.figure == "daily") {
        std::optional<fs::path> labels;
        if (!args.labels_file.empty()) labels = fs::path(args.labels_file);
        FieldDataset ds = load_dataset(args.graph_file, args.snapshots_file, labels);
        for (const std::string& w : ds.warnings) std::cerr << "warning: " << w << "\n";
        LaplacianBasis basis = eigenbasis(build_laplacian(ds.graph));
        figure_daily_data(basis, ds.snapshots, parse_int_list(args.k_grid, "--k-grid"),
                          out / "energy_per_day.csv");
        m.add("energy_per_day.csv");
        m.note("snapshots", args.snapshots_file);
        m.note("k_grid", args.k_grid);
    } else if (args.figure == "overlay") {
        NetworkGraph g = load_graph(args.graph_file, true);
        LaplacianBasis basis = eigenbasis(build_laplacian(g));
        if (args.coords_file.empty())
            throw ValidationError("--coords is required for overlay figures");
        auto coords = read_coords_csv(args.coords_file);
        auto rows = eigenvector_overlay(basis, args.index - 1, coords);
        write_overlay_csv(rows, out / "overlay.csv");
        m.add("overlay.csv");
        m.note("coords", args.coords_file);
        m.note("index", static_cast<long long>(args.index));
    } else {
        throw ValidationError("--figure must be ensemble, daily, or overlay");
    }
    m.write(out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse approximation of network opinion/spread snapshots in the "
                 "Laplacian-eigenvector basis"};
    app.set_config("--config", "", "Read defaults from a key=value file");
    app.set_version_flag("--version", std::string(kToolVersion));
    app.add_option("--threads", threads_flag,
                   "Worker thread cap for simulations (0 = machine parallelism)")
        ->envname("LAPCOMPRESS_THREADS");
    app.require_subcommand(1);

    GenGraphArgs gen;
    CLI::App* cmd_gen = app.add_subcommand(
        "gen-graph", "Generate a random geometric influence graph on the unit square");
    cmd_gen->add_option("--n", gen.n, "Node count (>= 2)")->capture_default_str();
    cmd_gen->add_option("--radius", gen.radius,
                        "Connection radius (default: tuned for mean degree 10)");
    cmd_gen->add_option("--row-sum", gen.row_sum, "Incoming weight sum per node, in (0,1)")
        ->capture_default_str();
    cmd_gen->add_option("--seed", gen.seed, "Placement seed")->capture_default_str();
    cmd_gen->add_flag("--symmetric", gen.symmetric,
                      "Uniform symmetric edge weights (symmetric Laplacian)");
    cmd_gen->add_option("--out-dir", gen.out_dir, "Output directory")->capture_default_str();

    SimulateArgs sim;
    CLI::App* cmd_sim = app.add_subcommand(
        "simulate", "Run the consensus or voter model and record snapshot ensembles");
    cmd_sim->add_option("--model", sim.model, "consensus or voter")->capture_default_str();
    cmd_sim->add_option("--graph", sim.graph_file, "Edge-list file")->required();
    cmd_sim->add_option("--k-max", sim.k_max, "Simulation horizon")->capture_default_str();
    cmd_sim->add_option("--snapshot-times", sim.snapshot_times,
                        "Comma-separated record times, each <= k-max")
        ->capture_default_str();
    cmd_sim->add_option("--ensemble-size", sim.ensemble_size, "Instances to simulate")
        ->capture_default_str();
    cmd_sim->add_option("--seed", sim.seed, "Stream seed")->capture_default_str();
    cmd_sim->add_option("--input-node", sim.input_node,
                        "Consensus input node (-1 draws one per instance)")
        ->capture_default_str();
    cmd_sim->add_option("--pins", sim.pins,
                        "Voter pins as node:status pairs, e.g. 0:0,199:1 "
                        "(default: 0:0 and n-1:1; pass 'none' to disable)");
    cmd_sim->add_option("--initial", sim.initial,
                        "Voter initial state: coin, all-zeros, or all-ones")
        ->capture_default_str();
    cmd_sim->add_option("--out-dir", sim.out_dir, "Output directory")->capture_default_str();

    CompressArgs comp;
    CLI::App* cmd_comp = app.add_subcommand(
        "compress", "K-sparse approximation study of a snapshot file against a graph");
    cmd_comp->add_option("--graph", comp.graph_file, "Edge-list file")->required();
    cmd_comp->add_option("--snapshots", comp.snapshots_file, "Snapshot CSV")->required();
    cmd_comp->add_option("--k-grid", comp.k_grid, "Comma-separated sparsity levels")
        ->capture_default_str();
    cmd_comp->add_option("--top", comp.top, "Dominant directions per snapshot")
        ->capture_default_str();
    cmd_comp->add_flag("--refit", comp.refit, "Least-squares refit on each selected support");
    cmd_comp->add_flag("--round", comp.round,
                       "Round reconstructions to 0/1 and report match fractions");
    cmd_comp->add_option("--round-k", comp.round_k, "Sparsity used for rounded matches")
        ->capture_default_str();
    cmd_comp->add_flag("--symmetrize", comp.symmetrize,
                       "Add missing reverse edges before building the Laplacian");
    cmd_comp->add_flag("--emit-basis", comp.emit_basis,
                       "Also export eigenvalues.csv and the dense basis matrix");
    cmd_comp->add_option("--label", comp.label, "Dataset label for the report");
    cmd_comp->add_option("--out-dir", comp.out_dir, "Output directory")->capture_default_str();

    StatsArgs stats;
    CLI::App* cmd_stats = app.add_subcommand(
        "stats", "Closed-form component covariance and whitening diagnostics");
    cmd_stats->add_option("--graph", stats.graph_file, "Edge-list file")->required();
    cmd_stats->add_option("--z", stats.z, "Input node")->capture_default_str();
    cmd_stats->add_option("--k", stats.k, "Time index")->capture_default_str();
    cmd_stats->add_flag("--exact", stats.exact, "Finite-k sums instead of the large-k limit");
    cmd_stats->add_flag("--whiten", stats.whiten,
                        "Also export the whitening variances and report");
    cmd_stats->add_flag("--symmetrize", stats.symmetrize,
                        "Add missing reverse edges before building the Laplacian");
    cmd_stats->add_option("--out-dir", stats.out_dir, "Output directory")
        ->capture_default_str();

    SynthArgs synth;
    CLI::App* cmd_synth = app.add_subcommand(
        "synth-field", "Generate synthetic daily field data on a contiguity graph");
    cmd_synth->add_option("--graph", synth.graph_file, "Edge-list file")->required();
    cmd_synth->add_option("--days", synth.days, "Days to generate")->capture_default_str();
    cmd_synth->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
    cmd_synth->add_option("--base", synth.params.base_level, "Network-wide mean level")
        ->capture_default_str();
    cmd_synth->add_option("--gradient", synth.params.gradient_scale,
                          "Amplitude of the smooth spatial modes")
        ->capture_default_str();
    cmd_synth->add_option("--texture", synth.params.texture_scale,
                          "Amplitude of the mid-frequency texture modes")
        ->capture_default_str();
    cmd_synth->add_option("--weekend-offset", synth.params.weekend_offset,
                          "Level shift applied on days 5 and 6 of each week")
        ->capture_default_str();
    cmd_synth->add_option("--noise", synth.params.noise_sigma, "Per-node daily noise sigma")
        ->capture_default_str();
    cmd_synth->add_option("--out-dir", synth.out_dir, "Output directory")
        ->capture_default_str();

    ReportArgs rep;
    CLI::App* cmd_rep = app.add_subcommand(
        "report", "Plot-ready figure data: ensemble curves, per-day curves, overlays");
    cmd_rep->add_option("--figure", rep.figure, "ensemble, daily, or overlay")
        ->capture_default_str();
    cmd_rep->add_option("--graph", rep.graph_file, "Edge-list file")->required();
    cmd_rep->add_option("--snapshots", rep.snapshots_file, "Snapshot CSV (ensemble/daily)");
    cmd_rep->add_option("--labels", rep.labels_file, "Node-label file (daily)");
    cmd_rep->add_option("--coords", rep.coords_file, "Coordinates CSV (overlay)");
    cmd_rep->add_option("--k-grid", rep.k_grid, "Comma-separated sparsity levels")
        ->capture_default_str();
    cmd_rep->add_option("--index", rep.index, "1-based basis direction (overlay)")
        ->capture_default_str();
    cmd_rep->add_option("--out-dir", rep.out_dir, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_gen->parsed()) return run_gen_graph(gen);
        if (cmd_sim->parsed()) return run_simulate(sim);
        if (cmd_comp->parsed()) return run_compress(comp);
        if (cmd_stats->parsed()) return run_stats(stats);
        if (cmd_synth->parsed()) return run_synth_field(synth);
        if (cmd_rep->parsed()) return run_report(rep);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
