#include "lapcompress/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "lapcompress/errors.hpp"
#include "lapcompress/io.hpp"

namespace lapcompress {

std::string render_compress_report(const CompressReport& report) {
    nlohmann::json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["label"] = report.label;

    nlohmann::json basis;
    basis["n"] = report.n;
    basis["orthonormal"] = report.orthonormal;
    nlohmann::json evs = nlohmann::json::array();
    for (const EigenvalueEntry& e : report.eigenvalues)
        evs.push_back({{"re", e.re}, {"im", e.im}, {"pair", static_cast<int>(e.pair)}});
    basis["eigenvalues"] = std::move(evs);
    doc["basis"] = std::move(basis);

    nlohmann::json energy;
    energy["key"] = report.curve.key_kind == CurveKey::kInstance ? "instance_id" : "day";
    nlohmann::json rows = nlohmann::json::array();
    for (const EnergyCurveRow& r : report.curve.rows)
        rows.push_back({{"key", r.key}, {"K", r.sparsity}, {"F", r.energy_fraction}});
    energy["rows"] = std::move(rows);
    nlohmann::json means = nlohmann::json::array();
    for (auto [k, f] : report.curve.means) means.push_back({{"K", k}, {"F", f}});
    energy["means"] = std::move(means);
    doc["energy"] = std::move(energy);

    nlohmann::json dominant = nlohmann::json::array();
    for (const SnapshotDominant& d : report.dominant) {
        nlohmann::json table = nlohmann::json::array();
        for (const DominantEntry& e : d.table)
            table.push_back({{"basis_index", e.basis_index + 1},  // 1-based, as tabulated
                             {"eigenvalue", e.eigenvalue},
                             {"component", e.component}});
        dominant.push_back({{"instance_id", d.instance_id},
                            {"time_index", d.time_index},
                            {"table", std::move(table)}});
    }
    doc["dominant"] = std::move(dominant);

    if (!report.matches.empty()) {
        nlohmann::json matches = nlohmann::json::array();
        for (const MatchRecord& m : report.matches)
            matches.push_back({{"instance_id", m.instance_id},
                               {"time_index", m.time_index},
                               {"K", m.sparsity},
                               {"fraction", m.fraction}});
        doc["matches"] = std::move(matches);
    }

    nlohmann::json prov;
    prov["tool_version"] = kToolVersion;
    for (const auto& [key, value] : report.provenance) prov[key] = value;
    doc["provenance"] = std::move(prov);

    return doc.dump(2) + "\n";
}

void write_compress_report(const CompressReport& report, const std::filesystem::path& file) {
    for (const SnapshotDominant& d : report.dominant)
        for (const DominantEntry& e : d.table)
            if (e.basis_index < 0 || e.basis_index >= report.n)
                throw ValidationError("report references basis index out of range");
    for (const EnergyCurveRow& r : report.curve.rows)
        if (r.energy_fraction > 1.0 + 1e-12)
            throw ValidationError("report has energy fraction > 1");
    atomic_write_text(file, render_compress_report(report));
}

EnergyCurve figure_ensemble_data(const LaplacianBasis& basis,
                                 const std::vector<Snapshot>& snapshots,
                                 const std::vector<int>& k_grid,
                                 const std::filesystem::path& per_instance_csv,
                                 const std::filesystem::path& mean_csv) {
    EnergyCurve curve = energy_curve(basis, snapshots, k_grid, CurveKey::kInstance);
    std::ostringstream per;
    per << "instance_id,K,energy_fraction\n";
    for (const EnergyCurveRow& r : curve.rows)
        per << r.key << "," << r.sparsity << "," << format_double(r.energy_fraction) << "\n";
    atomic_write_text(per_instance_csv, per.str());

    std::ostringstream mean;
    mean << "K,mean_energy_fraction\n";
    for (auto [k, f] : curve.means) mean << k << "," << format_double(f) << "\n";
    atomic_write_text(mean_csv, mean.str());
    return curve;
}

EnergyCurve figure_daily_data(const LaplacianBasis& basis,
                              const std::vector<Snapshot>& snapshots,
                              const std::vector<int>& k_grid,
                              const std::filesystem::path& per_day_csv) {
    EnergyCurve curve = energy_curve(basis, snapshots, k_grid, CurveKey::kTime);
    write_energy_curve_csv(curve, per_day_csv);
    return curve;
}

std::vector<OverlayRow> eigenvector_overlay(const LaplacianBasis& basis, int basis_index,
                                            const std::vector<std::array<double, 2>>& coords) {
    if (basis_index < 0 || basis_index >= basis.n)
        throw ValidationError("basis index " + std::to_string(basis_index) +
                              " outside [0, " + std::to_string(basis.n) + ")");
    if (static_cast<int>(coords.size()) != basis.n)
        throw ValidationError("need " + std::to_string(basis.n) + " node coordinates, got " +
                              std::to_string(coords.size()));
    double max_abs = basis.V.col(basis_index).cwiseAbs().maxCoeff();
    double threshold = 0.5 * max_abs;
    std::vector<OverlayRow> rows;
    rows.reserve(basis.n);
    for (int i = 0; i < basis.n; ++i) {
        OverlayRow row;
        row.node = i;
        row.x = coords[i][0];
        row.y = coords[i][1];
        row.value = basis.V(i, basis_index);
        if (row.value >= threshold)
            row.classification = "positive";
        else if (row.value <= -threshold)
            row.classification = "negative";
        else
            row.classification = "neutral";
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_overlay_csv(const std::vector<OverlayRow>& rows, const std::filesystem::path& file) {
    std::ostringstream out;
    out << "node,x,y,value,classification\n";
    for (const OverlayRow& r : rows)
        out << r.node << "," << format_double(r.x) << "," << format_double(r.y) << ","
            << format_double(r.value) << "," << r.classification << "\n";
    atomic_write_text(file, out.str());
}

}  // namespace lapcompress
