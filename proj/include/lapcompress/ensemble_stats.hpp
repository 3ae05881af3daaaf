#pragma once

#include <filesystem>
#include <vector>

#include "lapcompress/spectral.hpp"
#include "lapcompress/types.hpp"

namespace lapcompress {

// Closed-form second moment of the component vector s[k] = W x[k] for the
// driven consensus model with input at node z. Sigma = Q C Q where Q is
// diagonal with entries w_{iz} (column z of W) and C couples the eigenvalue
// geometric series. Valid when all Laplacian eigenvalues are real and
// simple with 0 = lambda_1 < ... < lambda_n < 2.
struct EnsembleStats {
    int k = 0;
    int input_node = 0;
    bool exact = false;  // finite-k sums instead of the large-k limit
    Vector q;            // diagonal of Q
    Matrix c;
    Matrix sigma;
};

// Large-k limit by default: c_11 = k (exact in k), c_1j = 1/lambda_j,
// c_ij = 1 / (1 - (1-lambda_i)(1-lambda_j)). With exact = true every entry
// uses the finite-k geometric sum instead. Throws ValidationError outside
// the real-simple-eigenvalue regime.
EnsembleStats component_covariance(const LaplacianBasis& basis, int input_node,
                                   int k, bool exact = false);

// Sum of the K largest diagonal entries of Sigma (ties to the lower index):
// a lower bound on the expected energy of the optimal K-sparse approximation
// when the basis is orthonormal.
double expected_energy_lower_bound(const EnsembleStats& stats, int K);

// Basis in which the model's snapshot components are uncorrelated. Sigma is
// eigendecomposed as V* D V*^T (D sorted descending); the state basis is
// Phi = V V*, so the components r = Phi^-1 x have covariance D. Variances
// below 1e-14 * D_max are floored to zero.
struct WhiteningBasis {
    Matrix phi;
    Matrix v_star;
    Vector d;
};

WhiteningBasis whitening_basis(const LaplacianBasis& basis, const EnsembleStats& stats);

struct VarianceDecayProfile {
    std::vector<double> ratios;   // d[i+1] / d[i] over entries above the floor
    int components_for_89 = 0;    // components to reach 89% cumulative variance
    int components_for_99 = 0;
    int components_for_999 = 0;   // 99.9%
};

VarianceDecayProfile variance_decay_profile(const WhiteningBasis& wb);

void write_sigma_csv(const EnsembleStats& stats, const std::filesystem::path& file);
void write_variances_csv(const WhiteningBasis& wb, const std::filesystem::path& file);

// JSON object {k, z, components_for_89pct, components_for_99pct,
// components_for_99_9pct, decay_ratios}.
void write_whitening_report_json(const EnsembleStats& stats, const WhiteningBasis& wb,
                                 const std::filesystem::path& file);

}  // namespace lapcompress
