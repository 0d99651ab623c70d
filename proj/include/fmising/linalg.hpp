#pragma once

#include <cstddef>
#include <vector>

namespace fmising {

/// Dense symmetric matrix, row-major storage.
struct SymMatrix {
    int n = 0;
    std::vector<double> a;  // n*n entries

    SymMatrix() = default;
    explicit SymMatrix(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

    /// Builds from arbitrary row-major entries, symmetrizing (A + A^T)/2.
    static SymMatrix from_entries(int dim, const std::vector<double>& entries);

    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
};

/// Full eigendecomposition of a symmetric matrix. Eigenvalues are sorted
/// descending; column m of `eigenvectors` pairs with eigenvalues[m]. The
/// sign convention makes the first nonzero component of each eigenvector
/// positive so repeated calls and degenerate spectra reproduce the same U.
struct EigenDecomposition {
    int n = 0;
    std::vector<double> eigenvalues;   // length n, nonincreasing
    std::vector<double> eigenvectors;  // n x n row-major, orthogonal

    double vec(int i, int m) const { return eigenvectors[static_cast<std::size_t>(i) * n + m]; }
};

/// Cyclic Jacobi eigensolver. Converges when the off-diagonal norm drops
/// below 1e-12 * ||A||_F, at most 100 sweeps. Deterministic: identical
/// input yields bit-identical output. Throws std::invalid_argument on
/// non-finite entries and on dimensions above 2048.
EigenDecomposition eigh(const SymMatrix& m);

/// sqrt of the sum of squared entries.
double frobenius(const SymMatrix& m);

}  // namespace fmising
