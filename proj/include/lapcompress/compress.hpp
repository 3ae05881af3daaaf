#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lapcompress/spectral.hpp"
#include "lapcompress/types.hpp"

namespace lapcompress {

struct RetainedComponent {
    int basis_index = 0;  // 0-based column of V
    double value = 0.0;
};

// K-sparse approximation of one snapshot in a given basis. `retained` holds
// the surviving components sorted by basis index. When a least-squares refit
// on the selected support was requested, `refit` carries the refit
// coefficients and their (never worse) energy fraction.
struct SparseApprox {
    int n = 0;
    int k = 0;
    std::vector<RetainedComponent> retained;
    double energy_fraction = 0.0;
    std::optional<std::vector<RetainedComponent>> refit;
    std::optional<double> refit_energy_fraction;
};

// F = 1 - |x - x_approx|^2 / |x|^2. Throws ValidationError for |x| = 0.
double energy_fraction(const Vector& x, const Vector& x_approx);

// Keeps the K largest-magnitude entries of s = W x (ties to the lower basis
// index), zeroes the rest, and scores the reconstruction V s against x. For
// orthonormal bases this is the optimal K-sparse approximation.
SparseApprox k_sparse(const LaplacianBasis& basis, const Snapshot& x, int K,
                      bool refit = false);

// V s for the sparse component vector s (heuristic values, not the refit).
Vector reconstruct(const LaplacianBasis& basis, const SparseApprox& approx);

// Entry-wise threshold: >= 0.5 maps to 1, else 0.
Vector round_to_binary(const Vector& x_approx);

// Fraction of positions where two 0/1 vectors agree.
double match_fraction(const Vector& a, const Vector& b);

enum class CurveKey {
    kInstance,  // rows keyed by snapshot.instance_id
    kTime,      // rows keyed by snapshot.time_index (field data, per day)
};

struct EnergyCurveRow {
    int key = 0;
    int sparsity = 0;
    double energy_fraction = 0.0;
};

struct EnergyCurve {
    CurveKey key_kind = CurveKey::kInstance;
    std::vector<EnergyCurveRow> rows;                // ordered by (key, K)
    std::vector<std::pair<int, double>> means;       // (K, ensemble mean F)
};

EnergyCurve energy_curve(const LaplacianBasis& basis,
                         const std::vector<Snapshot>& snapshots,
                         const std::vector<int>& k_values,
                         CurveKey key_kind = CurveKey::kInstance);

struct DominantEntry {
    int basis_index = 0;  // 0-based
    double eigenvalue = 0.0;
    double component = 0.0;
};

// The `top` largest-magnitude components of s = W x with their eigenvalue
// real parts, sorted by descending |component| (ties to the lower index).
std::vector<DominantEntry> dominant_basis_table(const LaplacianBasis& basis,
                                                const Snapshot& x, int top);

// Header `instance_id,K,energy_fraction` (or the curve's key name); ensemble
// mean rows carry key -1.
void write_energy_curve_csv(const EnergyCurve& curve, const std::filesystem::path& file);

// Header `rank,basis_index,eigenvalue,component`; basis_index is written
// 1-based so direction 1 is the zero-eigenvalue column, as tabulated in
// reports.
void write_dominant_table_csv(const std::vector<DominantEntry>& table,
                              const std::filesystem::path& file);

}  // namespace lapcompress
