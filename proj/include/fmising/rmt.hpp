#pragma once

#include <cstdint>
#include <vector>

#include "fmising/linalg.hpp"

namespace fmising {

/// GOE-like ensemble: off-diagonal entries N(mu, sigma^2), diagonal
/// entries N(mu, 2*sigma^2).
struct EnsembleParams {
    int n = 0;
    double mu = 0.0;
    double sigma = 1.0;
};

enum class RmtBranch { small_j, large_j };
const char* to_string(RmtBranch b);

/// Predicted FM rank K*(alpha) = N * (1 - P(normalized eigenvalue < alpha)).
struct RankPrediction {
    double r = 0.0;      // expected normalized second-largest eigenvalue; 1 in the large_j branch
    double alpha = 0.0;  // threshold ratio in (0, 1)
    double k_star = 0.0; // possibly fractional
    RmtBranch branch = RmtBranch::large_j;
};

struct EigenvalueLandmarks {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda_n = 0.0;
};

struct CdfPoint {
    double x = 0.0;
    double p = 0.0;
};

/// Expected largest, second-largest and smallest eigenvalues:
/// lambda1 ~ N*mu + sigma^2/mu (semicircle edge 2*sqrt(N)*sigma when mu = 0),
/// lambda2 ~ 2*sqrt(N)*sigma, lambdaN ~ -2*sqrt(N)*sigma.
EigenvalueLandmarks eigenvalue_landmarks(const EnsembleParams& e);

/// Affine map (lambda - lambda_N) / (lambda_1 - lambda_N) for a descending
/// spectrum; the largest value maps to 1, the smallest to 0. Throws on a
/// constant spectrum.
std::vector<double> normalize_spectrum(const std::vector<double>& descending);

/// Approximate CDF of the normalized eigenvalues, piecewise in the
/// small_j branch (sqrt(N)|mu| >= sigma) and a pure shifted semicircle in
/// the large_j branch. The semicircle integral is evaluated in closed form.
double approx_cdf(const EnsembleParams& e, double x);

/// Closed-form K*(alpha), branch-selected by sqrt(N)|mu| vs sigma.
/// Consistent with N * (1 - approx_cdf(e, alpha)).
RankPrediction predicted_rank(const EnsembleParams& e, double alpha);

/// Right-continuous empirical CDF steps over normalized eigenvalues.
std::vector<CdfPoint> empirical_cdf(const std::vector<double>& normalized);

/// Samples a GOE-like matrix; entry (i, j) is keyed by (seed, i, j).
SymMatrix sample_goe(const EnsembleParams& e, std::uint64_t seed);

/// Sup-distance between the empirical CDF of the normalized eigenvalues
/// and the approximate CDF.
double ks_distance(const std::vector<double>& normalized, const EnsembleParams& e);

}  // namespace fmising
