// Acceptance suite: drives the full pipeline at the pinned tolerances and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.
//
// Usage: acceptance --cli <lapcompress binary> --data <data dir>
//                   [--out <scratch dir>] [--criterion N]...

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
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
#include "oracles.hpp"

using namespace lapcompress;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

std::string cli_bin;
fs::path data_dir;
fs::path out_dir;

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void in_band(const std::string& name, double value, double lo, double hi) {
        bool ok = value >= lo && value <= hi;
        pass = pass && ok;
        detail << name << "=" << format_double(value) << (ok ? " in [" : " OUTSIDE [")
               << format_double(lo) << "," << format_double(hi) << "] ";
    }
    void at_most(const std::string& name, double value, double limit) {
        bool ok = value <= limit;
        pass = pass && ok;
        detail << name << "=" << format_double(value) << (ok ? " <= " : " > ")
               << format_double(limit) << " ";
    }
    void require(const std::string& name, bool ok) {
        pass = pass && ok;
        detail << name << (ok ? " ok " : " FAILED ");
    }
};

// 200-node construction with a simple real spectrum: scans seeds until
// the closed-form covariance accepts the graph, since geometric placements
// with twin vertices carry exact eigenvalue multiplicities.
struct RegimeSetup {
    GeometricGraph gg;
    LaplacianBasis basis;
    std::uint64_t seed = 0;
};

RegimeSetup regime_graph(GeometricWeights weights, std::uint64_t first_seed) {
    for (std::uint64_t seed = first_seed; seed < first_seed + 64; ++seed) {
        try {
            RegimeSetup ps;
            ps.gg = random_geometric_graph(200, default_geometric_radius(200), 0.8, seed,
                                           weights);
            ps.basis = eigenbasis(build_laplacian(ps.gg.graph));
            component_covariance(ps.basis, 7, 10);  // regime probe
            ps.seed = seed;
            return ps;
        } catch (const Error&) {
        }
    }
    throw NumericError("no 200-node placement with a simple spectrum found");
}

std::optional<RegimeSetup> cached_rw;
std::optional<ConsensusResult> cached_rw_ensemble;
constexpr int kInput = 7;
constexpr int kTime = 400;
constexpr int kBigEnsemble = 5000;

const RegimeSetup& rw_setup() {
    if (!cached_rw) cached_rw = regime_graph(GeometricWeights::kInRowSum, 9);
    return *cached_rw;
}

const ConsensusResult& rw_ensemble() {
    if (!cached_rw_ensemble) {
        const RegimeSetup& ps = rw_setup();
        ConsensusConfig cfg;
        cfg.a = consensus_matrix(ps.gg.graph);
        cfg.input_node = kInput;
        cfg.k_max = kTime;
        cfg.ensemble_size = kBigEnsemble;
        cfg.seed = 600;
        cfg.snapshot_times = {kTime};
        cached_rw_ensemble = simulate_consensus(cfg);
    }
    return *cached_rw_ensemble;
}

// --- criterion 1: consensus-ensemble compressibility ------------------------

Check criterion1() {
    Check c;
    GeometricGraph gg = random_geometric_graph(200, default_geometric_radius(200), 0.8, 1001);
    LaplacianBasis basis = eigenbasis(build_laplacian(gg.graph));
    c.detail << "seed=1001 mean_degree=" << format_double(gg.mean_degree) << " ";
    c.in_band("mean_degree", gg.mean_degree, 7.0, 14.0);

    ConsensusConfig cfg;  // input node drawn per instance
    cfg.a = consensus_matrix(gg.graph);
    cfg.k_max = kTime;
    cfg.ensemble_size = 100;
    cfg.seed = 500;
    cfg.snapshot_times = {kTime};
    ConsensusResult result = simulate_consensus(cfg);
    EnergyCurve curve = energy_curve(basis, result.snapshots, {1, 20, 40});
    c.in_band("meanF1", curve.means[0].second, 0.45, 0.75);
    c.in_band("meanF20", curve.means[1].second, 0.70, 0.90);
    c.in_band("meanF40", curve.means[2].second, 0.82, 0.96);
    return c;
}

// --- criterion 2: closed form vs step recursion ------------------------------

Check criterion2() {
    Check c;
    const int k = 300;
    int graph_index = 0;
    for (auto [n, seed] : std::vector<std::pair<int, int>>{
             {5, 41}, {10, 42}, {20, 43}, {10, 44}, {20, 45}}) {
        NetworkGraph g = oracles::random_symmetric_graph(n, 0.6, 0.8, seed);
        LaplacianBasis basis = eigenbasis(build_laplacian(g));
        int z = n / 2;
        EnsembleStats stats = component_covariance(basis, z, k);
        Vector a(n);
        for (int i = 0; i < n; ++i) a[i] = 1.0 - basis.eigenvalues[i].re;
        Matrix oracle = oracles::lyapunov_moment_recursion(a, Vector(basis.W.col(z)), k);
        double worst = 0.0;
        for (int i = 1; i < n; ++i)
            for (int j = 1; j < n; ++j)
                worst = std::max(worst, std::abs(stats.sigma(i, j) - oracle(i, j)));
        c.at_most("g" + std::to_string(graph_index) + "_err", worst, 1e-6);
        double grow = static_cast<double>(k) * basis.W(0, z) * basis.W(0, z);
        c.at_most("g" + std::to_string(graph_index) + "_grow_rel",
                  std::abs(stats.sigma(0, 0) - grow) / grow, 1e-9);
        ++graph_index;
    }
    return c;
}

// --- criterion 3: Monte-Carlo consistency of the covariance diagonal ---------

Check criterion3() {
    Check c;
    const RegimeSetup& ps = rw_setup();
    c.detail << "seed=" << ps.seed << " z=" << kInput << " m=" << kBigEnsemble << " ";
    EnsembleStats stats = component_covariance(ps.basis, kInput, kTime);
    Matrix emp = ensemble_moment(rw_ensemble().snapshots, ps.basis);
    double worst = 0.0;
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        double truth = stats.sigma(i, i);
        if (truth <= 1e-6) continue;
        ++checked;
        worst = std::max(worst, std::abs(emp(i, i) - truth) / truth);
    }
    c.detail << "entries=" << checked << " ";
    c.require("entries_checked", checked > 100);
    c.at_most("worst_rel", worst, 0.10);
    return c;
}

// --- criterion 4: diagonal lower bound on the optimal sparse energy ----------

Check criterion4() {
    Check c;
    RegimeSetup ps = regime_graph(GeometricWeights::kUniformSymmetric, 9);
    c.detail << "seed=" << ps.seed << " ";
    c.require("orthonormal", ps.basis.orthonormal);

    ConsensusConfig cfg;
    cfg.a = consensus_matrix(ps.gg.graph);
    cfg.input_node = kInput;
    cfg.k_max = kTime;
    cfg.ensemble_size = kBigEnsemble;
    cfg.seed = 800;
    cfg.snapshot_times = {kTime};
    ConsensusResult ens = simulate_consensus(cfg);
    EnsembleStats stats = component_covariance(ps.basis, kInput, kTime);

    for (int K : {1, 5, 20}) {
        double bound = expected_energy_lower_bound(stats, K);
        double mean = 0.0, sq = 0.0;
        std::vector<double> buf(200);
        for (const Snapshot& s : ens.snapshots) {
            Vector comp = ps.basis.W * s.values;
            for (int i = 0; i < 200; ++i) buf[i] = comp[i] * comp[i];
            std::partial_sort(buf.begin(), buf.begin() + K, buf.end(), std::greater<>());
            double e = 0.0;
            for (int i = 0; i < K; ++i) e += buf[i];
            mean += e;
            sq += e * e;
        }
        const double m = static_cast<double>(ens.snapshots.size());
        mean /= m;
        double var = (sq - m * mean * mean) / (m - 1.0);
        double se = std::sqrt(var / m);
        c.require("K" + std::to_string(K) + "_bound", mean >= bound - 2.0 * se);
        c.detail << "K" << K << ": mc=" << format_double(mean)
                 << " bound=" << format_double(bound) << " se=" << format_double(se) << " ";
    }
    return c;
}

// --- criterion 5: whitening variance concentration and decay -----------------

Check criterion5() {
    Check c;
    const RegimeSetup& ps = rw_setup();
    EnsembleStats stats = component_covariance(ps.basis, kInput, kTime);
    WhiteningBasis wb = whitening_basis(ps.basis, stats);
    VarianceDecayProfile prof = variance_decay_profile(wb);
    c.in_band("components_89", prof.components_for_89, 2, 3);
    c.in_band("components_99", prof.components_for_99, 3, 5);
    c.in_band("components_999", prof.components_for_999, 4, 8);
    for (int i = 0; i < 4 && i < static_cast<int>(prof.ratios.size()); ++i)
        c.at_most("ratio" + std::to_string(i + 1), prof.ratios[i], 0.5);

    const ConsensusResult& ens = rw_ensemble();
    Matrix r(200, kBigEnsemble);
    for (int i = 0; i < kBigEnsemble; ++i)
        r.col(i) = wb.v_star.transpose() * (ps.basis.W * ens.snapshots[i].values);
    Matrix cov = (r * r.transpose()) / static_cast<double>(kBigEnsemble);
    double max_diag = cov.diagonal().maxCoeff();
    double max_off = 0.0;
    for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j)
            if (i != j) max_off = std::max(max_off, std::abs(cov(i, j)));
    c.at_most("offdiag_over_diag", max_off / max_diag, 0.05);
    return c;
}

// --- criterion 6: heuristic equals brute force on orthonormal bases ----------

Check criterion6() {
    Check c;
    std::mt19937_64 rng(606);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int n : {10, 12}) {
        NetworkGraph g = oracles::random_symmetric_graph(n, 0.6, 0.8, 200 + n);
        LaplacianBasis basis = eigenbasis(build_laplacian(g));
        for (int trial = 0; trial < 25; ++trial) {
            Vector x(n);
            for (int i = 0; i < n; ++i) x[i] = gauss(rng);
            Snapshot snap{x, 0, trial};
            for (int K = 1; K <= 4; ++K) {
                double ours = k_sparse(basis, snap, K).energy_fraction;
                double brute = oracles::brute_force_best_energy(basis.V, x, K);
                worst = std::max(worst, std::abs(ours - brute));
            }
        }
    }
    c.detail << "50 snapshots, K in {1..4} ";
    c.at_most("worst_gap", worst, 1e-9);
    return c;
}

// --- criterion 7: voter-ensemble compressibility and rounding ----------------

Check criterion7() {
    Check c;
    GeometricGraph gg = random_geometric_graph(200, default_geometric_radius(200), 0.8, 1001);
    LaplacianBasis basis = eigenbasis(build_laplacian(gg.graph));
    // pin the extremes of the slowest structural mode so the two camps stay
    // in maximal tension; the chosen nodes are printed for reproducibility
    int lo = 0, hi = 0;
    for (int i = 0; i < 200; ++i) {
        if (basis.V(i, 1) < basis.V(lo, 1)) lo = i;
        if (basis.V(i, 1) > basis.V(hi, 1)) hi = i;
    }
    c.detail << "pins=(" << lo << ":0," << hi << ":1) ";

    VoterConfig cfg;
    cfg.a = consensus_matrix(gg.graph);
    cfg.pinned = {{lo, 0}, {hi, 1}};
    cfg.k_max = 500;
    cfg.ensemble_size = 100;
    cfg.seed = 700;
    cfg.snapshot_times = {500};
    std::vector<Snapshot> snaps = simulate_voter(cfg);

    EnergyCurve curve = energy_curve(basis, snaps, {20, 40});
    c.in_band("meanF20", curve.means[0].second, 0.60, 0.85);
    c.in_band("meanF40", curve.means[1].second, 0.75, 0.92);

    double match20 = 0.0, match40 = 0.0;
    for (const Snapshot& s : snaps) {
        match20 +=
            match_fraction(round_to_binary(reconstruct(basis, k_sparse(basis, s, 20))), s.values);
        match40 +=
            match_fraction(round_to_binary(reconstruct(basis, k_sparse(basis, s, 40))), s.values);
    }
    c.in_band("match20", match20 / snaps.size(), 0.80, 0.95);
    c.in_band("match40", match40 / snaps.size(), 0.90, 0.995);
    return c;
}

// --- criterion 8: frozen field fixture stays compressible --------------------

Check criterion8() {
    Check c;
    FieldDataset ds =
        load_dataset(data_dir / "us_contiguity.edges", data_dir / "field_synthetic.csv");
    c.require("days_250", ds.snapshots.size() == 250);
    LaplacianBasis basis = eigenbasis(build_laplacian(ds.graph));
    c.require("orthonormal", basis.orthonormal);
    EnergyCurve curve = energy_curve(basis, ds.snapshots, {10}, CurveKey::kTime);
    double lo = 2.0;
    for (const EnergyCurveRow& row : curve.rows) lo = std::min(lo, row.energy_fraction);
    c.in_band("min_daily_F10", lo, 0.70, 1.0);
    c.in_band("mean_F10", curve.means[0].second, 0.78, 1.0);
    return c;
}

// --- criterion 9: CLI pipelines are byte-deterministic -----------------------

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("missing output file " + p.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

Check criterion9() {
    Check c;
    if (cli_bin.empty()) {
        c.require("cli_path_provided", false);
        return c;
    }
    fs::path root = out_dir / "determinism";
    std::vector<std::string> steps = {
        "gen-graph --n 60 --seed 4 --out-dir g",
        "gen-graph --n 40 --symmetric --seed 3 --out-dir gs",
        "simulate --model consensus --graph g/graph.edges --k-max 120 --snapshot-times "
        "60,120 --ensemble-size 12 --seed 10 --out-dir sim",
        "simulate --model voter --graph g/graph.edges --k-max 120 --snapshot-times 120 "
        "--ensemble-size 12 --pins 0:0,59:1 --seed 11 --out-dir vsim",
        "compress --graph g/graph.edges --snapshots sim/snapshots.csv --k-grid 1,5,20,60 "
        "--out-dir comp",
        "compress --graph g/graph.edges --snapshots vsim/snapshots.csv --k-grid 20 --round "
        "--round-k 20 --out-dir vcomp",
        "stats --graph gs/graph.edges --z 3 --k 300 --whiten --out-dir st",
        "synth-field --graph " + (data_dir / "us_contiguity.edges").string() +
            " --days 40 --seed 12 --out-dir field",
        "report --figure ensemble --graph g/graph.edges --snapshots sim/snapshots.csv --k-grid "
        "1,20 --out-dir figs_ens",
        "report --figure daily --graph " + (data_dir / "us_contiguity.edges").string() +
            " --snapshots field/field_snapshots.csv --k-grid 10 --out-dir figs_daily",
        "report --figure overlay --graph " + (data_dir / "us_contiguity.edges").string() +
            " --coords " + (data_dir / "us_state_coords.csv").string() +
            " --index 2 --out-dir ov",
    };
    for (const std::string tag : {"a", "b"}) {
        fs::path run_dir = root / tag;
        fs::remove_all(run_dir);
        fs::create_directories(run_dir);
        for (const std::string& step : steps) {
            std::string cmd = "cd " + run_dir.string() + " && " + cli_bin + " " + step +
                              " >/dev/null 2>/dev/null";
            if (WEXITSTATUS(std::system(cmd.c_str())) != 0) {
                c.require("step '" + step.substr(0, 24) + "...'", false);
                return c;
            }
        }
    }
    int compared = 0;
    bool all_equal = true;
    for (auto it = fs::recursive_directory_iterator(root / "a");
         it != fs::recursive_directory_iterator(); ++it) {
        if (!it->is_regular_file()) continue;
        fs::path rel = fs::relative(it->path(), root / "a");
        ++compared;
        if (file_bytes(it->path()) != file_bytes(root / "b" / rel)) {
            all_equal = false;
            c.detail << "differs: " << rel.string() << " ";
        }
    }
    c.detail << "files=" << compared << " ";
    c.require("enough_outputs", compared >= 20);
    c.require("byte_identical", all_equal);
    return c;
}

// --- criterion 10: module property suites ------------------------------------

Check criterion10() {
    Check c;
    std::mt19937_64 rng(1010);
    std::normal_distribution<double> gauss;

    // energy-fraction identities
    Vector x(2), half(2);
    x << 3.0, 4.0;
    half << 3.0, 0.0;
    c.require("energy_identities", energy_fraction(x, x) == 1.0 &&
                                       energy_fraction(x, Vector(Vector::Zero(2))) == 0.0 &&
                                       std::abs(energy_fraction(x, half) - 0.36) < 1e-15);

    // Parseval and monotonicity on an orthonormal basis
    NetworkGraph g = oracles::random_symmetric_graph(12, 0.6, 0.8, 77);
    LaplacianBasis basis = eigenbasis(build_laplacian(g));
    bool parseval = true, monotone = true, round_trip = true;
    for (int trial = 0; trial < 20; ++trial) {
        Vector v(12);
        for (int i = 0; i < 12; ++i) v[i] = gauss(rng);
        Vector s = components(basis, v);
        parseval = parseval &&
                   std::abs(s.squaredNorm() - v.squaredNorm()) <= 1e-8 * v.squaredNorm();
        round_trip = round_trip && (basis.V * s - v).norm() <= 1e-8 * v.norm();
        Snapshot snap{v, 0, trial};
        double prev = -1.0;
        for (int K = 1; K <= 12; ++K) {
            double f = k_sparse(basis, snap, K).energy_fraction;
            monotone = monotone && f >= prev - 1e-12;
            prev = f;
        }
    }
    c.require("parseval", parseval);
    c.require("monotone_in_K", monotone);
    c.require("vw_round_trip", round_trip);

    // rounding idempotence
    Vector probs(5);
    probs << 0.1, 0.49, 0.5, 0.51, 0.9;
    c.require("round_idempotent",
              (round_to_binary(round_to_binary(probs)) - round_to_binary(probs)).norm() == 0.0);

    // voter absorbing states, pins, and mean-field agreement
    GeometricGraph vg = random_geometric_graph(20, default_geometric_radius(20), 0.8, 33);
    VoterConfig vc;
    vc.a = consensus_matrix(vg.graph);
    vc.k_max = 40;
    vc.ensemble_size = 3;
    vc.seed = 5;
    vc.snapshot_times = {40};
    vc.initial_state = Vector::Ones(20);
    bool absorbing = true;
    for (const Snapshot& s : simulate_voter(vc)) absorbing = absorbing && s.values.minCoeff() == 1.0;
    c.require("absorbing_all_ones", absorbing);

    vc.initial_state.reset();
    vc.pinned = {{0, 0}, {19, 1}};
    vc.k_max = 600;
    vc.ensemble_size = 300;
    vc.snapshot_times = {400, 500, 600};
    std::vector<Snapshot> snaps = simulate_voter(vc);
    bool pins_hold = true;
    for (const Snapshot& s : snaps)
        pins_hold = pins_hold && s.values[0] == 0.0 && s.values[19] == 1.0;
    c.require("pins_hold", pins_hold);

    Vector fixed_point = voter_mean_field(vc);
    Matrix per_instance(20, 300);
    for (int inst = 0; inst < 300; ++inst) {
        Vector avg = Vector::Zero(20);
        for (int t = 0; t < 3; ++t) avg += snaps[static_cast<std::size_t>(inst) * 3 + t].values;
        per_instance.col(inst) = avg / 3.0;
    }
    Vector mean = per_instance.rowwise().mean();
    bool mf_ok = true;
    for (int i = 0; i < 20; ++i) {
        double var = (per_instance.row(i).array() - mean[i]).square().sum() / 299.0;
        double sem = std::sqrt(var / 300.0);
        mf_ok = mf_ok && std::abs(mean[i] - fixed_point[i]) <= 4.0 * sem + 1e-12;
    }
    c.require("mean_field_agreement", mf_ok);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::cerr << "missing value for " << arg << "\n";
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--cli")
            cli_bin = next();
        else if (arg == "--data")
            data_dir = next();
        else if (arg == "--out")
            out_dir = next();
        else if (arg == "--criterion")
            selected.push_back(std::stoi(next()));
        else {
            std::cerr << "usage: acceptance --cli BIN --data DIR [--out DIR] [--criterion N]\n";
            return 2;
        }
    }
    if (data_dir.empty()) {
        std::cerr << "--data is required\n";
        return 2;
    }
    data_dir = fs::absolute(data_dir);
    if (!cli_bin.empty()) cli_bin = fs::absolute(cli_bin).string();
    if (out_dir.empty()) out_dir = fs::temp_directory_path() / "lapcompress_acceptance";
    out_dir = fs::absolute(out_dir);
    fs::create_directories(out_dir);

    struct Entry {
        int id;
        const char* name;
        std::function<Check()> run;
    };
    std::vector<Entry> entries = {
        {1, "consensus-ensemble compressibility", criterion1},
        {2, "closed-form covariance vs step recursion", criterion2},
        {3, "Monte-Carlo covariance consistency", criterion3},
        {4, "diagonal lower bound on optimal sparse energy", criterion4},
        {5, "whitening concentration and decay", criterion5},
        {6, "brute-force optimality of the magnitude rule", criterion6},
        {7, "voter-ensemble compressibility and rounding", criterion7},
        {8, "field fixture compressibility", criterion8},
        {9, "CLI byte determinism", criterion9},
        {10, "module property suites", criterion10},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), entry.id) == selected.end())
            continue;
        auto start = Clock::now();
        Check result;
        try {
            result = entry.run();
        } catch (const std::exception& e) {
            result.pass = false;
            result.detail << "exception: " << e.what();
        }
        double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
        std::cout << (result.pass ? "[PASS]" : "[FAIL]") << " criterion " << entry.id << ": "
                  << entry.name << " (" << format_double(elapsed) << "s) -- "
                  << result.detail.str() << "\n";
        if (!result.pass) ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
