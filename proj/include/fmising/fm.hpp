#pragma once

#include <vector>

#include "fmising/ising.hpp"
#include "fmising/linalg.hpp"

namespace fmising {

/// Sign convention of the model equation. The two variants behave
/// differently because <v_i, v_j> forms a PSD Gram matrix.
enum class FmSign { positive, negative };

inline double sign_factor(FmSign s) { return s == FmSign::positive ? 1.0 : -1.0; }
const char* to_string(FmSign s);

/// Factorization machine over spin inputs:
///   f(x) = s * (w0 + sum_i w_i x_i + sum_{i<j} <v_i, v_j> x_i x_j)
/// with s = +1 (positive) or -1 (negative). Row i of `v` is the
/// K-dimensional factor vector of spin i.
struct FmParams {
    int n = 0;
    int k = 0;
    FmSign sign = FmSign::negative;
    double w0 = 0.0;
    std::vector<double> w;  // length n
    std::vector<double> v;  // n x k row-major

    double vat(int i, int kk) const { return v[static_cast<std::size_t>(i) * k + kk]; }
    double& vat(int i, int kk) { return v[static_cast<std::size_t>(i) * k + kk]; }
};

/// Gradient of the squared residual with respect to each parameter.
struct FmGrad {
    double w0 = 0.0;
    std::vector<double> w;
    std::vector<double> v;
};

/// O(KN) forward pass using the spin identity
///   sum_{i<j} <v_i,v_j> x_i x_j = 1/2 sum_k [(sum_i v_ik x_i)^2 - sum_i v_ik^2]
/// valid because x_i^2 = 1.
double forward(const FmParams& p, const SpinConfig& x);

/// Gradient of (f(x) - y)^2 given residual = f(x) - y. O(KN).
FmGrad grad(const FmParams& p, const SpinConfig& x, double residual);

/// Gram matrix G = V V^T whose (i,j) entry is <v_i, v_j>.
SymMatrix coupling_matrix(const FmParams& p);

}  // namespace fmising
