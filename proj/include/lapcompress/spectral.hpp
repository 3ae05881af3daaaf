#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lapcompress/graph.hpp"
#include "lapcompress/types.hpp"

namespace lapcompress {

enum class PairRole : std::uint8_t {
    kNone = 0,    // real eigenvalue
    kFirst = 1,   // realified real part of a conjugate pair
    kSecond = 2,  // realified imaginary part of a conjugate pair
};

struct EigenvalueEntry {
    double re = 0.0;
    // Signed imaginary part: +|im| on the first column of a pair, -|im| on
    // the second, 0 for real eigenvalues.
    double im = 0.0;
    PairRole pair = PairRole::kNone;
};

// Laplacian-eigenvector basis. Columns of V are unit-two-norm; complex
// conjugate eigenvector pairs are replaced by their normalized real and
// imaginary parts. Column order: ascending eigenvalue real part, ties by
// ascending |imag| then solver order. Each column's sign is fixed so its
// largest-magnitude entry (lowest index on ties) is positive. W = V^-1.
struct LaplacianBasis {
    int n = 0;
    std::vector<EigenvalueEntry> eigenvalues;
    Matrix V;
    Matrix W;
    bool orthonormal = false;  // true iff L was symmetric within 1e-12
};

LaplacianBasis eigenbasis(const LaplacianMatrix& laplacian);

// Component vector s = W x. The reconstruction V s reproduces x to within
// 1e-8 * |x|.
Vector components(const LaplacianBasis& basis, const Vector& x);
Vector components(const LaplacianBasis& basis, const Snapshot& x);

// CSV with columns index,eigenvalue_real,eigenvalue_imag,pair_flag
// (index 1-based to match basis-direction numbering in reports).
void write_eigenvalues_csv(const LaplacianBasis& basis, const std::filesystem::path& file);

// Dense V as plain CSV, one row per node.
void write_basis_matrix_csv(const LaplacianBasis& basis, const std::filesystem::path& file);

}  // namespace lapcompress
