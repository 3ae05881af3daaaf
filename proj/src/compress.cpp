#include "lapcompress/compress.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "lapcompress/errors.hpp"
#include "lapcompress/io.hpp"

namespace lapcompress {

double energy_fraction(const Vector& x, const Vector& x_approx) {
    if (x.size() != x_approx.size())
        throw ValidationError("energy_fraction: dimension mismatch (" +
                              std::to_string(x.size()) + " vs " +
                              std::to_string(x_approx.size()) + ")");
    double denom = x.squaredNorm();
    if (denom <= 0.0)
        throw ValidationError("energy fraction is undefined for a zero-energy snapshot");
    return 1.0 - (x - x_approx).squaredNorm() / denom;
}

namespace {

// Indices of the K largest-magnitude entries, ties to the lower index.
std::vector<int> top_k_indices(const Vector& s, int k) {
    std::vector<int> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&s](int a, int b) {
        double ma = std::abs(s[a]), mb = std::abs(s[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

SparseApprox k_sparse_from_components(const LaplacianBasis& basis, const Vector& x,
                                      const Vector& s, int K, bool refit) {
    SparseApprox approx;
    approx.n = basis.n;
    approx.k = K;
    std::vector<int> keep = top_k_indices(s, K);

    Vector recon = Vector::Zero(basis.n);
    approx.retained.reserve(keep.size());
    for (int idx : keep) {
        approx.retained.push_back({idx, s[idx]});
        recon += s[idx] * basis.V.col(idx);
    }
    approx.energy_fraction = energy_fraction(x, recon);

    if (refit) {
        Matrix v_s(basis.n, K);
        for (int c = 0; c < K; ++c) v_s.col(c) = basis.V.col(keep[c]);
        Vector coef = v_s.colPivHouseholderQr().solve(x);
        std::vector<RetainedComponent> refit_retained;
        refit_retained.reserve(keep.size());
        for (int c = 0; c < K; ++c) refit_retained.push_back({keep[c], coef[c]});
        approx.refit = std::move(refit_retained);
        approx.refit_energy_fraction = energy_fraction(x, v_s * coef);
    }
    return approx;
}

}  // namespace

SparseApprox k_sparse(const LaplacianBasis& basis, const Snapshot& x, int K, bool refit) {
    validate_snapshot(x);
    if (K < 1 || K > basis.n)
        throw ValidationError("K = " + std::to_string(K) + " is outside [1, " +
                              std::to_string(basis.n) + "]");
    if (x.values.squaredNorm() <= 0.0)
        throw ValidationError("cannot sparse-approximate a zero snapshot");
    Vector s = components(basis, x.values);
    return k_sparse_from_components(basis, x.values, s, K, refit);
}

Vector reconstruct(const LaplacianBasis& basis, const SparseApprox& approx) {
    if (approx.n != basis.n)
        throw ValidationError("sparse approximation dimension " + std::to_string(approx.n) +
                              " does not match basis dimension " + std::to_string(basis.n));
    Vector x = Vector::Zero(basis.n);
    for (const RetainedComponent& r : approx.retained) {
        if (r.basis_index < 0 || r.basis_index >= basis.n)
            throw ValidationError("retained basis index " + std::to_string(r.basis_index) +
                                  " out of range");
        x += r.value * basis.V.col(r.basis_index);
    }
    return x;
}

Vector round_to_binary(const Vector& x_approx) {
    Vector out(x_approx.size());
    for (Eigen::Index i = 0; i < x_approx.size(); ++i)
        out[i] = x_approx[i] >= 0.5 ? 1.0 : 0.0;
    return out;
}

double match_fraction(const Vector& a, const Vector& b) {
    if (a.size() != b.size())
        throw ValidationError("match_fraction: length mismatch (" + std::to_string(a.size()) +
                              " vs " + std::to_string(b.size()) + ")");
    if (a.size() == 0) throw ValidationError("match_fraction: empty vectors");
    Eigen::Index agree = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if ((a[i] >= 0.5) == (b[i] >= 0.5)) ++agree;
    return static_cast<double>(agree) / static_cast<double>(a.size());
}

EnergyCurve energy_curve(const LaplacianBasis& basis, const std::vector<Snapshot>& snapshots,
                         const std::vector<int>& k_values, CurveKey key_kind) {
    if (snapshots.empty()) throw ValidationError("energy_curve: no snapshots");
    if (k_values.empty()) throw ValidationError("energy_curve: no K values");

    EnergyCurve curve;
    curve.key_kind = key_kind;
    std::vector<int> ks = k_values;
    std::sort(ks.begin(), ks.end());
    for (int k : ks)
        if (k < 1 || k > basis.n)
            throw ValidationError("energy_curve: K = " + std::to_string(k) +
                                  " is outside [1, " + std::to_string(basis.n) + "]");

    std::map<int, double> sums;
    for (const Snapshot& snap : snapshots) {
        validate_snapshot(snap);
        if (snap.values.squaredNorm() <= 0.0)
            throw ValidationError("energy_curve: zero snapshot (instance " +
                                  std::to_string(snap.instance_id) + ", time " +
                                  std::to_string(snap.time_index) + ")");
        int key = key_kind == CurveKey::kInstance ? snap.instance_id : snap.time_index;
        Vector s = components(basis, snap.values);
        for (int k : ks) {
            SparseApprox approx = k_sparse_from_components(basis, snap.values, s, k, false);
            curve.rows.push_back({key, k, approx.energy_fraction});
            sums[k] += approx.energy_fraction;
        }
    }
    std::stable_sort(curve.rows.begin(), curve.rows.end(),
                     [](const EnergyCurveRow& a, const EnergyCurveRow& b) {
                         if (a.key != b.key) return a.key < b.key;
                         return a.sparsity < b.sparsity;
                     });
    for (auto [k, total] : sums)
        curve.means.push_back({k, total / static_cast<double>(snapshots.size())});
    return curve;
}

std::vector<DominantEntry> dominant_basis_table(const LaplacianBasis& basis,
                                                const Snapshot& x, int top) {
    if (top < 1 || top > basis.n)
        throw ValidationError("dominant_basis_table: top = " + std::to_string(top) +
                              " is outside [1, " + std::to_string(basis.n) + "]");
    Vector s = components(basis, x);
    std::vector<int> order = top_k_indices(s, top);
    std::sort(order.begin(), order.end(), [&s](int a, int b) {
        double ma = std::abs(s[a]), mb = std::abs(s[b]);
        if (ma != mb) return ma > mb;
        return a < b;
    });
    std::vector<DominantEntry> table;
    table.reserve(order.size());
    for (int idx : order)
        table.push_back({idx, basis.eigenvalues[idx].re, s[idx]});
    return table;
}

void write_energy_curve_csv(const EnergyCurve& curve, const std::filesystem::path& file) {
    std::ostringstream out;
    out << (curve.key_kind == CurveKey::kInstance ? "instance_id" : "day")
        << ",K,energy_fraction\n";
    for (const EnergyCurveRow& row : curve.rows)
        out << row.key << "," << row.sparsity << "," << format_double(row.energy_fraction)
            << "\n";
    for (auto [k, mean] : curve.means)
        out << "-1," << k << "," << format_double(mean) << "\n";
    atomic_write_text(file, out.str());
}

void write_dominant_table_csv(const std::vector<DominantEntry>& table,
                              const std::filesystem::path& file) {
    std::ostringstream out;
    out << "rank,basis_index,eigenvalue,component\n";
    for (std::size_t i = 0; i < table.size(); ++i)
        out << (i + 1) << "," << (table[i].basis_index + 1) << ","
            << format_double(table[i].eigenvalue) << "," << format_double(table[i].component)
            << "\n";
    atomic_write_text(file, out.str());
}

}  // namespace lapcompress
