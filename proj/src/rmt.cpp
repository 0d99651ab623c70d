#include "fmising/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fmising/random.hpp"

namespace fmising {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_ensemble(const EnsembleParams& e) {
    if (e.n < 2) throw std::invalid_argument("ensemble dimension must be at least 2");
    if (!(e.sigma > 0.0)) throw std::invalid_argument("ensemble sigma must be positive");
}

// Expected normalized second-largest eigenvalue. The branch operates on
// |mu|; the spectrum of -J mirrors that of J.
double r_of(const EnsembleParams& e) {
    const double m = std::sqrt(static_cast<double>(e.n)) * std::abs(e.mu);
    const double s = e.sigma;
    return 4.0 * m * s / ((m + s) * (m + s));
}

bool small_j_branch(const EnsembleParams& e) {
    return std::sqrt(static_cast<double>(e.n)) * std::abs(e.mu) >= e.sigma;
}

// int_0^x sqrt(R^2 - (2t - R)^2) dt, the circular-segment area under the
// shifted semicircle of radius R. Equals pi R^2 / 4 at x = R.
double semicircle_integral(double x, double radius) {
    const double z = std::clamp((2.0 * x - radius) / radius, -1.0, 1.0);
    const double chord = radius * std::sqrt(std::max(0.0, 1.0 - z * z));
    return ((2.0 * x - radius) * chord + radius * radius * (std::asin(z) + kPi / 2.0)) / 4.0;
}

// f(x) = arccos(2x - 1) - 2 sqrt(x(1-x)) (2x - 1); f(0) = pi, f(1) = 0.
double rank_integral(double x) {
    const double z = std::clamp(2.0 * x - 1.0, -1.0, 1.0);
    return std::acos(z) - 2.0 * std::sqrt(std::max(0.0, x * (1.0 - x))) * z;
}

}  // namespace

const char* to_string(RmtBranch b) { return b == RmtBranch::small_j ? "small_j" : "large_j"; }

EigenvalueLandmarks eigenvalue_landmarks(const EnsembleParams& e) {
    check_ensemble(e);
    const double edge = 2.0 * std::sqrt(static_cast<double>(e.n)) * e.sigma;
    EigenvalueLandmarks lm;
    lm.lambda2 = edge;
    lm.lambda_n = -edge;
    const double m = std::abs(e.mu);
    lm.lambda1 = m > 0.0 ? e.n * m + e.sigma * e.sigma / m : edge;
    return lm;
}

std::vector<double> normalize_spectrum(const std::vector<double>& descending) {
    if (descending.empty()) throw std::invalid_argument("normalize_spectrum: empty spectrum");
    const double top = descending.front();
    const double bottom = descending.back();
    if (!(top > bottom)) throw std::invalid_argument("normalize_spectrum: degenerate spectrum");
    std::vector<double> out(descending.size());
    const double span = top - bottom;
    for (std::size_t i = 0; i < descending.size(); ++i) out[i] = (descending[i] - bottom) / span;
    return out;
}

double approx_cdf(const EnsembleParams& e, double x) {
    check_ensemble(e);
    if (x < 0.0 || x > 1.0) throw std::domain_error("approx_cdf: x outside [0, 1]");
    const double n = static_cast<double>(e.n);
    if (small_j_branch(e)) {
        const double r = r_of(e);
        if (x >= 1.0) return 1.0;
        if (x > r) return 1.0 + (x - 1.0) / ((1.0 - r) * n);
        return 1.0 / n + 4.0 * (n - 2.0) / (kPi * n * r * r) * semicircle_integral(x, r);
    }
    return 1.0 / n + 4.0 * (n - 1.0) / (kPi * n) * semicircle_integral(x, 1.0);
}

RankPrediction predicted_rank(const EnsembleParams& e, double alpha) {
    check_ensemble(e);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("predicted_rank: alpha must lie in (0, 1)");

    RankPrediction out;
    out.alpha = alpha;
    const double n = static_cast<double>(e.n);
    if (small_j_branch(e)) {
        out.branch = RmtBranch::small_j;
        out.r = r_of(e);
        if (alpha > out.r)
            out.k_star = (1.0 - alpha) / (1.0 - out.r);
        else
            out.k_star = 1.0 + (n - 2.0) / kPi * rank_integral(alpha / out.r);
    } else {
        out.branch = RmtBranch::large_j;
        out.r = 1.0;
        out.k_star = (n - 1.0) / kPi * rank_integral(alpha);
    }
    return out;
}

std::vector<CdfPoint> empirical_cdf(const std::vector<double>& normalized) {
    if (normalized.empty()) throw std::invalid_argument("empirical_cdf: empty input");
    std::vector<double> sorted = normalized;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<CdfPoint> steps;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double p = static_cast<double>(i + 1) / n;
        if (!steps.empty() && steps.back().x == sorted[i])
            steps.back().p = p;  // merge duplicates into one step
        else
            steps.push_back({sorted[i], p});
    }
    return steps;
}

SymMatrix sample_goe(const EnsembleParams& e, std::uint64_t seed) {
    check_ensemble(e);
    SymMatrix m(e.n);
    const double diag_sd = std::sqrt(2.0) * e.sigma;
    for (int i = 0; i < e.n; ++i)
        for (int j = i; j < e.n; ++j) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i),
                                static_cast<std::uint64_t>(j)));
            const double value = e.mu + (i == j ? diag_sd : e.sigma) * rng.normal();
            m(i, j) = value;
            m(j, i) = value;
        }
    return m;
}

double ks_distance(const std::vector<double>& normalized, const EnsembleParams& e) {
    if (normalized.empty()) throw std::invalid_argument("ks_distance: empty input");
    std::vector<double> sorted = normalized;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double x = std::clamp(sorted[i], 0.0, 1.0);
        const double f = approx_cdf(e, x);
        sup = std::max(sup, std::abs(f - static_cast<double>(i) / n));
        sup = std::max(sup, std::abs(f - static_cast<double>(i + 1) / n));
    }
    return sup;
}

}  // namespace fmising
