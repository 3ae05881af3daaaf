#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lapcompress/compress.hpp"
#include "lapcompress/spectral.hpp"
#include "lapcompress/types.hpp"

namespace lapcompress {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct SnapshotDominant {
    int instance_id = 0;
    int time_index = 0;
    std::vector<DominantEntry> table;
};

struct MatchRecord {
    int instance_id = 0;
    int time_index = 0;
    int sparsity = 0;
    double fraction = 0.0;
};

// Everything the JSON compress report carries. The report layer only
// formats: every number here was produced by compress/spectral operations.
struct CompressReport {
    std::string label;
    int n = 0;
    bool orthonormal = false;
    std::vector<EigenvalueEntry> eigenvalues;
    EnergyCurve curve;
    std::vector<SnapshotDominant> dominant;
    std::vector<MatchRecord> matches;  // present only for rounded runs
    std::vector<std::pair<std::string, std::string>> provenance;
};

std::string render_compress_report(const CompressReport& report);
void write_compress_report(const CompressReport& report, const std::filesystem::path& file);

// Ensemble energy-fraction tables: per-instance rows and per-K means,
// written as two CSVs. Returns the curve for reuse.
EnergyCurve figure_ensemble_data(const LaplacianBasis& basis,
                                 const std::vector<Snapshot>& snapshots,
                                 const std::vector<int>& k_grid,
                                 const std::filesystem::path& per_instance_csv,
                                 const std::filesystem::path& mean_csv);

// Per-day energy-fraction table for field data, keyed by day.
EnergyCurve figure_daily_data(const LaplacianBasis& basis,
                              const std::vector<Snapshot>& snapshots,
                              const std::vector<int>& k_grid,
                              const std::filesystem::path& per_day_csv);

struct OverlayRow {
    int node = 0;
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
    // "positive" / "negative" when |value| >= 0.5 * max|entry|, else "neutral"
    std::string classification;
};

// Plot-ready table of one eigenvector over node coordinates.
std::vector<OverlayRow> eigenvector_overlay(const LaplacianBasis& basis, int basis_index,
                                            const std::vector<std::array<double, 2>>& coords);

void write_overlay_csv(const std::vector<OverlayRow>& rows, const std::filesystem::path& file);

}  // namespace lapcompress
