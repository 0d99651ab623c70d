#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fmising/fm.hpp"
#include "fmising/ising.hpp"

namespace fmising {

/// Moments of the off-diagonal coupling distribution. `sigma2` follows the
/// unbiased convention; `mean_sq` is the plain average of J_ij^2 over the
/// N(N-1)/2 upper-triangle entries.
struct CouplingStats {
    double mu = 0.0;
    double sigma2 = 0.0;
    double mean_sq = 0.0;
};

/// Component distribution v_ik ~ N(mu_v, sigma2_v) used by the random
/// initializers. The second parameter is a variance.
struct RandomInitSpec {
    double mu_v = 0.0;
    double sigma2_v = 0.0;
};

/// Sample moments of the given model's off-diagonal couplings.
CouplingStats coupling_stats(const IsingModel& model);

/// Population moments of an SK ensemble: mu = j0/n, sigma2 = j1^2/n.
CouplingStats population_stats(const SkParams& params);

/// Energy-distribution matching: mu_v = 0, sigma2_v = sqrt(mean_sq / k),
/// which equates the expected interaction-energy variances of model and FM.
RandomInitSpec energy_init_spec(double mean_sq, int k);

/// Coupling-distribution matching for nonnegative mean mu_abs:
/// mu_v = sqrt(mu_abs/k), sigma2_v = (sqrt(mu_abs^2 + k*sigma2) - mu_abs)/k,
/// giving E[<v_i,v_j>] = mu_abs and Var[<v_i,v_j>] = sigma2 exactly.
RandomInitSpec coupling_init_spec(double mu_abs, double sigma2, int k);

/// Constant and linear terms reproducing c - sum_i h_i x_i exactly:
/// (c, -h) for the positive FM, (-c, +h) for the negative FM.
std::pair<double, std::vector<double>> match_linear(const IsingModel& model, FmSign sign);

/// Rank-k warm start from the shifted eigendecomposition of J (negative FM)
/// or -J (positive FM): eigenvalues are shifted by the smallest one so the
/// kept spectrum is nonnegative, and V = U_k diag(sqrt(lambda'_m)).
/// Exact at k = N-1. Requires 1 <= k <= N-1.
FmParams low_rank_init(const IsingModel& model, int k, FmSign sign);

/// Frobenius error of the rank-k truncation of J' = J - lambda_N I:
/// sqrt(sum_{i>k} (lambda_i - lambda_N)^2). Nonincreasing in k, zero at
/// k = N-1. Requires 1 <= k <= N.
double truncation_error(const IsingModel& model, int k);

/// Random initialization matching the interaction-energy distribution.
/// Uses sample moments unless explicit stats are supplied.
FmParams energy_random_init(const IsingModel& model, int k, FmSign sign, std::uint64_t seed);
FmParams energy_random_init(const IsingModel& model, int k, FmSign sign, std::uint64_t seed,
                            const CouplingStats& stats);

/// Random initialization matching the coupling-coefficient distribution.
/// Picks the negative FM when the coupling mean is >= 0, otherwise the
/// positive FM on the negated mean.
FmParams coupling_random_init(const IsingModel& model, int k, std::uint64_t seed);
FmParams coupling_random_init(const IsingModel& model, int k, std::uint64_t seed,
                              const CouplingStats& stats);

/// Coupling error Delta J = || J - diag J - s*(G - diag G) ||_F with
/// s = +1 for the negative FM and -1 for the positive FM.
double coupling_error(const IsingModel& model, const FmParams& p);

}  // namespace fmising
