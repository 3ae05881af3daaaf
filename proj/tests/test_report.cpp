#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "lapcompress/errors.hpp"
#include "lapcompress/graph.hpp"
#include "lapcompress/ingest.hpp"
#include "lapcompress/io.hpp"
#include "lapcompress/report.hpp"
#include "oracles.hpp"

using namespace lapcompress;
namespace fs = std::filesystem;

namespace {

const fs::path kData = LAPCOMPRESS_DATA_DIR;

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "lapcompress_test_report";
    fs::create_directories(dir);
    return dir;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

CompressReport tiny_report(const LaplacianBasis& basis, const std::vector<Snapshot>& snaps) {
    CompressReport report;
    report.label = "tiny";
    report.n = basis.n;
    report.orthonormal = basis.orthonormal;
    report.eigenvalues = basis.eigenvalues;
    report.curve = energy_curve(basis, snaps, {1, basis.n});
    for (const Snapshot& s : snaps)
        report.dominant.push_back(
            {s.instance_id, s.time_index, dominant_basis_table(basis, s, 2)});
    report.provenance.emplace_back("seed", "7");
    return report;
}

}  // namespace

TEST_CASE("reports are byte-identical for identical inputs") {
    NetworkGraph g = oracles::random_symmetric_graph(6, 0.7, 0.8, 15);
    LaplacianBasis basis = eigenbasis(build_laplacian(g));
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    std::vector<Snapshot> snaps;
    for (int i = 0; i < 4; ++i) {
        Vector x(6);
        for (int j = 0; j < 6; ++j) x[j] = gauss(rng);
        snaps.push_back({x, 400, i});
    }
    CompressReport report = tiny_report(basis, snaps);
    std::string once = render_compress_report(report);
    std::string twice = render_compress_report(report);
    CHECK(once == twice);

    fs::path f1 = temp_dir() / "report1.json";
    fs::path f2 = temp_dir() / "report2.json";
    write_compress_report(report, f1);
    write_compress_report(report, f2);
    CHECK(read_bytes(f1) == read_bytes(f2));
    CHECK(once.find("\"schema_version\": 1") != std::string::npos);
}

TEST_CASE("report validation rejects impossible energy fractions") {
    NetworkGraph g = oracles::random_symmetric_graph(4, 0.9, 0.8, 2);
    LaplacianBasis basis = eigenbasis(build_laplacian(g));
    CompressReport report = tiny_report(basis, {{basis.V.col(0), 0, 0}});
    report.curve.rows[0].energy_fraction = 1.5;
    CHECK_THROWS_AS(write_compress_report(report, temp_dir() / "bad.json"), ValidationError);
    report = tiny_report(basis, {{basis.V.col(0), 0, 0}});
    report.dominant[0].table[0].basis_index = 99;
    CHECK_THROWS_AS(write_compress_report(report, temp_dir() / "bad2.json"), ValidationError);
}

TEST_CASE("single-instance ensemble: per-instance and mean tables coincide") {
    NetworkGraph g = oracles::random_symmetric_graph(5, 0.8, 0.8, 30);
    LaplacianBasis basis = eigenbasis(build_laplacian(g));
    std::vector<Snapshot> one{{basis.V.col(1) * 2.0 + basis.V.col(3), 400, 0}};
    fs::path per = temp_dir() / "per.csv";
    fs::path mean = temp_dir() / "mean.csv";
    EnergyCurve curve = figure_ensemble_data(basis, one, {1, 2, 5}, per, mean);
    REQUIRE(curve.rows.size() == 3);
    REQUIRE(curve.means.size() == 3);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(curve.rows[i].energy_fraction == curve.means[i].second);
    // K = n: all fractions are 1
    CHECK(curve.rows[2].energy_fraction == doctest::Approx(1.0).epsilon(1e-10));
    auto mean_lines = read_lines(mean);
    CHECK(mean_lines[0] == "K,mean_energy_fraction");
    CHECK(mean_lines.size() == 4);
}

TEST_CASE("per-day field table keyed by day") {
    FieldDataset ds = load_dataset(kData / "toy3.edges", kData / "toy3_snapshots.csv");
    LaplacianBasis basis = eigenbasis(build_laplacian(ds.graph));
    fs::path out = temp_dir() / "per_day.csv";
    EnergyCurve curve = figure_daily_data(basis, ds.snapshots, {1, 3}, out);
    CHECK(curve.key_kind == CurveKey::kTime);
    auto lines = read_lines(out);
    CHECK(lines[0] == "day,K,energy_fraction");
    // 5 days x 2 K values + 2 mean rows + header
    CHECK(lines.size() == 13);

    // a spatially constant snapshot is fully captured by the first direction
    std::vector<Snapshot> flat{{Vector::Constant(3, 0.4), 0, 0}};
    EnergyCurve fc = figure_daily_data(basis, flat, {1}, temp_dir() / "flat.csv");
    CHECK(fc.rows[0].energy_fraction == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigenvector overlays") {
    // constant eigenvector on a connected symmetric graph
    NetworkGraph g = oracles::random_symmetric_graph(7, 0.7, 0.8, 5);
    LaplacianBasis basis = eigenbasis(build_laplacian(g));
    std::vector<std::array<double, 2>> coords(7, {0.0, 0.0});
    for (int i = 0; i < 7; ++i) coords[i] = {0.1 * i, 0.2 * i};
    auto rows = eigenvector_overlay(basis, 0, coords);
    REQUIRE(rows.size() == 7);
    for (const OverlayRow& r : rows) {
        CHECK(r.value == doctest::Approx(rows[0].value).epsilon(1e-8));
        CHECK(r.classification == "positive");
    }

    // second direction of the 2-node exchange has opposite signs
    LaplacianMatrix lap{2, Matrix(2, 2)};
    lap.entries << 0.5, -0.5, -0.5, 0.5;
    LaplacianBasis two = eigenbasis(lap);
    auto pm = eigenvector_overlay(two, 1, {{0.0, 0.0}, {1.0, 0.0}});
    CHECK(pm[0].value * pm[1].value < 0.0);
    CHECK(pm[0].classification != pm[1].classification);

    CHECK_THROWS_AS(eigenvector_overlay(two, 5, {{0.0, 0.0}, {1.0, 0.0}}), ValidationError);
    CHECK_THROWS_AS(eigenvector_overlay(two, 0, {{0.0, 0.0}}), ValidationError);
}

TEST_CASE("a low-eigenvalue mode on the contiguity graph splits regions") {
    FieldDataset ds = load_dataset(kData / "us_contiguity.edges", kData / "field_synthetic.csv",
                                   kData / "us_state_labels.txt");
    LaplacianBasis basis = eigenbasis(build_laplacian(ds.graph));
    auto coords = read_coords_csv(kData / "us_state_coords.csv");

    // the first nonconstant mode splits the map into two sign regions
    auto fiedler = eigenvector_overlay(basis, 1, coords);
    int pos_sign = 0, neg_sign = 0;
    for (const OverlayRow& r : fiedler) (r.value > 0.0 ? pos_sign : neg_sign) += 1;
    CHECK(pos_sign >= 5);
    CHECK(neg_sign >= 5);

    auto rows = eigenvector_overlay(basis, 2, coords);
    int pos = 0, neg = 0;
    for (const OverlayRow& r : rows) {
        if (r.classification == "positive") ++pos;
        if (r.classification == "negative") ++neg;
    }
    CHECK(pos > 0);
    CHECK(neg > 0);
    fs::path out = temp_dir() / "overlay.csv";
    write_overlay_csv(rows, out);
    auto lines = read_lines(out);
    CHECK(lines[0] == "node,x,y,value,classification");
    CHECK(lines.size() == 50);
}
