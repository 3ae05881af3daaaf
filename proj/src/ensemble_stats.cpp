#include "lapcompress/ensemble_stats.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "lapcompress/detail.hpp"
#include "lapcompress/errors.hpp"
#include "lapcompress/io.hpp"

namespace lapcompress {

namespace {

// The closed forms need 0 = lambda_1 < lambda_2 < ... < lambda_n < 2, all
// real and simple.
void require_real_simple_spectrum(const LaplacianBasis& basis) {
    for (const EigenvalueEntry& e : basis.eigenvalues)
        if (e.pair != PairRole::kNone)
            throw ValidationError("outside the real-simple-eigenvalue regime: "
                                  "complex eigenvalue pair present");
    for (int i = 0; i + 1 < basis.n; ++i)
        if (basis.eigenvalues[i + 1].re - basis.eigenvalues[i].re <= 1e-10)
            throw ValidationError("outside the real-simple-eigenvalue regime: eigenvalues " +
                                  std::to_string(i + 1) + " and " + std::to_string(i + 2) +
                                  " coincide within 1e-10");
    if (std::abs(basis.eigenvalues.front().re) > 1e-8)
        throw ValidationError("smallest eigenvalue is not 0");
    if (basis.eigenvalues.back().re >= 2.0)
        throw ValidationError("outside the real-simple-eigenvalue regime: eigenvalue " +
                              format_double(basis.eigenvalues.back().re) + " >= 2");
}

// Finite-k geometric sum of (a b)^l for l = 0..k-1.
double geometric_sum(double ab, int k) {
    double q = 1.0 - ab;
    if (std::abs(q) < 1e-14) return static_cast<double>(k);
    return (1.0 - std::pow(ab, k)) / q;
}

}  // namespace

EnsembleStats component_covariance(const LaplacianBasis& basis, int input_node, int k,
                                   bool exact) {
    if (input_node < 0 || input_node >= basis.n)
        throw ValidationError("input node " + std::to_string(input_node) + " outside [0, " +
                              std::to_string(basis.n) + ")");
    if (k < 1) throw ValidationError("time index k must be positive");
    require_real_simple_spectrum(basis);

    const int n = basis.n;
    EnsembleStats stats;
    stats.k = k;
    stats.input_node = input_node;
    stats.exact = exact;
    stats.q = basis.W.col(input_node);

    // a_i = 1 - lambda_i are the consensus-matrix eigenvalues; a_1 = 1.
    Vector a(n);
    for (int i = 0; i < n; ++i) a[i] = 1.0 - basis.eigenvalues[i].re;

    stats.c.resize(n, n);
    if (exact) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = geometric_sum(a[i] * a[j], k);
                stats.c(i, j) = v;
                stats.c(j, i) = v;
            }
    } else {
        stats.c(0, 0) = static_cast<double>(k);
        for (int j = 1; j < n; ++j) {
            double v = 1.0 / basis.eigenvalues[j].re;
            stats.c(0, j) = v;
            stats.c(j, 0) = v;
        }
        for (int i = 1; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = 1.0 / (1.0 - a[i] * a[j]);
                stats.c(i, j) = v;
                stats.c(j, i) = v;
            }
    }
    stats.sigma = stats.q.asDiagonal() * stats.c * stats.q.asDiagonal();
    return stats;
}

double expected_energy_lower_bound(const EnsembleStats& stats, int K) {
    const int n = static_cast<int>(stats.sigma.rows());
    if (K < 1 || K > n)
        throw ValidationError("K = " + std::to_string(K) + " is outside [1, " +
                              std::to_string(n) + "]");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        double di = stats.sigma(i, i), dj = stats.sigma(j, j);
        if (di != dj) return di > dj;
        return i < j;
    });
    double bound = 0.0;
    for (int i = 0; i < K; ++i) bound += stats.sigma(order[i], order[i]);
    return bound;
}

WhiteningBasis whitening_basis(const LaplacianBasis& basis, const EnsembleStats& stats) {
    const int n = basis.n;
    if (stats.sigma.rows() != n || stats.sigma.cols() != n)
        throw ValidationError("covariance dimension does not match basis");
    double scale = std::max(1.0, stats.sigma.cwiseAbs().maxCoeff());
    if ((stats.sigma - stats.sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw NumericError("cannot whiten: covariance is not symmetric");

    Matrix sym = 0.5 * (stats.sigma + stats.sigma.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw NumericError("covariance eigendecomposition failed");

    WhiteningBasis wb;
    wb.v_star.resize(n, n);
    wb.d.resize(n);
    // descending variances
    for (int i = 0; i < n; ++i) {
        wb.d[i] = solver.eigenvalues()[n - 1 - i];
        wb.v_star.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    double d_max = std::max(wb.d[0], 0.0);
    if (wb.d[n - 1] < -1e-8 * std::max(1.0, d_max))
        throw NumericError("covariance is not positive semidefinite (eigenvalue " +
                           format_double(wb.d[n - 1]) + ")");
    // variances decay exponentially and bottom out in rounding noise
    for (int i = 0; i < n; ++i)
        if (wb.d[i] < 1e-14 * d_max) wb.d[i] = 0.0;
    for (int c = 0; c < n; ++c) detail::fix_column_sign(wb.v_star.col(c));
    wb.phi = basis.V * wb.v_star;
    return wb;
}

VarianceDecayProfile variance_decay_profile(const WhiteningBasis& wb) {
    VarianceDecayProfile profile;
    const int n = static_cast<int>(wb.d.size());
    double total = wb.d.sum();
    if (total <= 0.0) throw ValidationError("variance profile of an all-zero spectrum");
    for (int i = 0; i + 1 < n && wb.d[i + 1] > 0.0; ++i)
        profile.ratios.push_back(wb.d[i + 1] / wb.d[i]);

    auto components_for = [&](double fraction) {
        double cum = 0.0;
        for (int i = 0; i < n; ++i) {
            cum += wb.d[i];
            if (cum >= fraction * total) return i + 1;
        }
        return n;
    };
    profile.components_for_89 = components_for(0.89);
    profile.components_for_99 = components_for(0.99);
    profile.components_for_999 = components_for(0.999);
    return profile;
}

void write_sigma_csv(const EnsembleStats& stats, const std::filesystem::path& file) {
    std::ostringstream out;
    const int n = static_cast<int>(stats.sigma.rows());
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (c) out << ",";
            out << format_double(stats.sigma(r, c));
        }
        out << "\n";
    }
    atomic_write_text(file, out.str());
}

void write_variances_csv(const WhiteningBasis& wb, const std::filesystem::path& file) {
    std::ostringstream out;
    out << "index,variance\n";
    for (Eigen::Index i = 0; i < wb.d.size(); ++i)
        out << (i + 1) << "," << format_double(wb.d[i]) << "\n";
    atomic_write_text(file, out.str());
}

void write_whitening_report_json(const EnsembleStats& stats, const WhiteningBasis& wb,
                                 const std::filesystem::path& file) {
    VarianceDecayProfile profile = variance_decay_profile(wb);
    nlohmann::json doc;
    doc["k"] = stats.k;
    doc["z"] = stats.input_node;
    doc["components_for_89pct"] = profile.components_for_89;
    doc["components_for_99pct"] = profile.components_for_99;
    doc["components_for_99_9pct"] = profile.components_for_999;
    doc["decay_ratios"] = profile.ratios;
    atomic_write_text(file, doc.dump(2) + "\n");
}

}  // namespace lapcompress
