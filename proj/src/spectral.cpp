#include "lapcompress/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "lapcompress/detail.hpp"
#include "lapcompress/errors.hpp"
#include "lapcompress/io.hpp"

namespace lapcompress {

namespace {

using detail::fix_column_sign;

void normalize_column(Eigen::Ref<Vector> col) {
    double norm = col.norm();
    if (norm == 0.0) throw NumericError("zero-norm eigenvector column");
    col /= norm;
}

struct EigGroup {
    double re = 0.0;
    double im_mag = 0.0;  // 0 for real eigenvalues
    int solver_index = 0;
    Vector col_re;
    Vector col_im;  // empty for real eigenvalues
};

LaplacianBasis general_eigenbasis(const Matrix& l) {
    const int n = static_cast<int>(l.rows());
    Eigen::EigenSolver<Matrix> solver(l);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigensolver failed to converge");

    Eigen::VectorXcd lambdas = solver.eigenvalues();
    Eigen::MatrixXcd vectors = solver.eigenvectors();

    double scale = std::max(1.0, lambdas.cwiseAbs().maxCoeff());
    const double imag_tol = 1e-12 * scale;

    std::vector<EigGroup> groups;
    std::vector<char> used(n, 0);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        used[i] = 1;
        std::complex<double> lam = lambdas[i];
        if (std::abs(lam.imag()) <= imag_tol) {
            EigGroup g;
            g.re = lam.real();
            g.solver_index = i;
            g.col_re = vectors.col(i).real();
            groups.push_back(std::move(g));
            continue;
        }
        // locate the conjugate partner
        int partner = -1;
        double best = std::numeric_limits<double>::max();
        for (int j = i + 1; j < n; ++j) {
            if (used[j]) continue;
            double d = std::abs(lambdas[j] - std::conj(lam));
            if (d < best) {
                best = d;
                partner = j;
            }
        }
        if (partner < 0 || best > 1e-8 * scale)
            throw NumericError("unpaired complex eigenvalue at solver index " +
                               std::to_string(i));
        used[partner] = 1;
        // represent the pair by the eigenvalue with positive imaginary part
        Eigen::VectorXcd rep =
            lam.imag() > 0.0 ? vectors.col(i) : vectors.col(partner);
        EigGroup g;
        g.re = lam.real();
        g.im_mag = std::abs(lam.imag());
        g.solver_index = i;
        g.col_re = rep.real();
        g.col_im = rep.imag();
        groups.push_back(std::move(g));
    }

    std::stable_sort(groups.begin(), groups.end(), [](const EigGroup& a, const EigGroup& b) {
        if (a.re != b.re) return a.re < b.re;
        if (a.im_mag != b.im_mag) return a.im_mag < b.im_mag;
        return a.solver_index < b.solver_index;
    });

    LaplacianBasis basis;
    basis.n = n;
    basis.V.resize(n, n);
    basis.eigenvalues.reserve(n);
    int col = 0;
    for (EigGroup& g : groups) {
        if (g.col_im.size() == 0) {
            basis.V.col(col) = g.col_re;
            basis.eigenvalues.push_back({g.re, 0.0, PairRole::kNone});
            ++col;
        } else {
            basis.V.col(col) = g.col_re;
            basis.V.col(col + 1) = g.col_im;
            basis.eigenvalues.push_back({g.re, g.im_mag, PairRole::kFirst});
            basis.eigenvalues.push_back({g.re, -g.im_mag, PairRole::kSecond});
            col += 2;
        }
    }

    for (int c = 0; c < n; ++c) {
        normalize_column(basis.V.col(c));
        fix_column_sign(basis.V.col(c));
    }
    return basis;
}

LaplacianBasis symmetric_eigenbasis(const Matrix& l) {
    const int n = static_cast<int>(l.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(l);
    if (solver.info() != Eigen::Success)
        throw NumericError("eigensolver failed to converge");
    LaplacianBasis basis;
    basis.n = n;
    basis.orthonormal = true;
    basis.V = solver.eigenvectors();  // ascending eigenvalues, orthonormal
    basis.eigenvalues.reserve(n);
    for (int i = 0; i < n; ++i)
        basis.eigenvalues.push_back({solver.eigenvalues()[i], 0.0, PairRole::kNone});
    for (int c = 0; c < n; ++c) fix_column_sign(basis.V.col(c));
    return basis;
}

}  // namespace

LaplacianBasis eigenbasis(const LaplacianMatrix& laplacian) {
    validate_laplacian(laplacian);
    const Matrix& l = laplacian.entries;
    const int n = laplacian.n;

    double sym_scale = std::max(1.0, l.cwiseAbs().maxCoeff());
    bool symmetric = (l - l.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * sym_scale;

    LaplacianBasis basis = symmetric ? symmetric_eigenbasis(l) : general_eigenbasis(l);

    if (basis.orthonormal) {
        basis.W = basis.V.transpose();
    } else {
        Eigen::BDCSVD<Matrix> svd(basis.V);
        double smin = svd.singularValues()[n - 1];
        double smax = svd.singularValues()[0];
        if (smin <= 0.0 || smax / smin > 1e12)
            throw NumericError("defective or ill-conditioned eigenbasis (condition estimate " +
                               format_double(smin > 0.0 ? smax / smin : INFINITY) + ")");
        basis.W = basis.V.partialPivLu().inverse();
        double residual = (basis.V * basis.W - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
        if (residual > 1e-10) {
            // one Newton refinement step on the inverse
            basis.W = basis.W * (2.0 * Matrix::Identity(n, n) - basis.V * basis.W);
            residual = (basis.V * basis.W - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
        }
        if (residual > 1e-8)
            throw NumericError("eigenbasis inversion residual " + format_double(residual) +
                               " exceeds 1e-8");
    }
    return basis;
}

Vector components(const LaplacianBasis& basis, const Vector& x) {
    if (x.size() != basis.n)
        throw ValidationError("vector length " + std::to_string(x.size()) +
                              " does not match basis dimension " + std::to_string(basis.n));
    return basis.W * x;
}

Vector components(const LaplacianBasis& basis, const Snapshot& x) {
    validate_snapshot(x);
    return components(basis, x.values);
}

void write_eigenvalues_csv(const LaplacianBasis& basis, const std::filesystem::path& file) {
    std::ostringstream out;
    out << "index,eigenvalue_real,eigenvalue_imag,pair_flag\n";
    for (int i = 0; i < basis.n; ++i) {
        const EigenvalueEntry& e = basis.eigenvalues[i];
        out << (i + 1) << "," << format_double(e.re) << "," << format_double(e.im) << ","
            << static_cast<int>(e.pair) << "\n";
    }
    atomic_write_text(file, out.str());
}

void write_basis_matrix_csv(const LaplacianBasis& basis, const std::filesystem::path& file) {
    std::ostringstream out;
    for (int r = 0; r < basis.n; ++r) {
        for (int c = 0; c < basis.n; ++c) {
            if (c) out << ",";
            out << format_double(basis.V(r, c));
        }
        out << "\n";
    }
    atomic_write_text(file, out.str());
}

}  // namespace lapcompress
