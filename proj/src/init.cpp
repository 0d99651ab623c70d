#include "fmising/init.hpp"

#include <cmath>
#include <stdexcept>

#include "fmising/random.hpp"

namespace fmising {

namespace {

FmParams make_random_fm(const IsingModel& model, int k, FmSign sign,
                        const RandomInitSpec& spec, std::uint64_t seed) {
    FmParams p;
    p.n = model.n;
    p.k = k;
    p.sign = sign;
    std::tie(p.w0, p.w) = match_linear(model, sign);
    p.v.resize(static_cast<std::size_t>(model.n) * k);
    const double sd = std::sqrt(spec.sigma2_v);
    Rng rng(derive_seed(seed, 0x696e6974ULL));
    for (double& value : p.v) value = spec.mu_v + sd * rng.normal();
    return p;
}

}  // namespace

CouplingStats coupling_stats(const IsingModel& model) {
    const std::size_t pairs = static_cast<std::size_t>(model.n) * (model.n - 1) / 2;
    if (pairs == 0) throw std::invalid_argument("coupling_stats: model has no couplings");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < model.n; ++i)
        for (int j = i + 1; j < model.n; ++j) {
            const double v = model.j(i, j);
            sum += v;
            sum_sq += v * v;
        }
    CouplingStats stats;
    stats.mu = sum / static_cast<double>(pairs);
    stats.mean_sq = sum_sq / static_cast<double>(pairs);
    stats.sigma2 = pairs > 1
                       ? (sum_sq - sum * stats.mu) / static_cast<double>(pairs - 1)
                       : 0.0;
    if (stats.sigma2 < 0.0) stats.sigma2 = 0.0;  // roundoff
    return stats;
}

CouplingStats population_stats(const SkParams& params) {
    CouplingStats stats;
    stats.mu = params.j0 / params.n;
    stats.sigma2 = params.j1 * params.j1 / params.n;
    stats.mean_sq = stats.mu * stats.mu + stats.sigma2;
    return stats;
}

RandomInitSpec energy_init_spec(double mean_sq, int k) {
    if (k < 1) throw std::invalid_argument("energy_init_spec: rank must be at least 1");
    if (mean_sq < 0.0) throw std::invalid_argument("energy_init_spec: mean square is negative");
    return {0.0, std::sqrt(mean_sq / k)};
}

RandomInitSpec coupling_init_spec(double mu_abs, double sigma2, int k) {
    if (k < 1) throw std::invalid_argument("coupling_init_spec: rank must be at least 1");
    if (mu_abs < 0.0 || sigma2 < 0.0)
        throw std::invalid_argument("coupling_init_spec: moments must be nonnegative");
    RandomInitSpec spec;
    spec.mu_v = std::sqrt(mu_abs / k);
    spec.sigma2_v = (std::sqrt(mu_abs * mu_abs + k * sigma2) - mu_abs) / k;
    if (spec.sigma2_v < 0.0) spec.sigma2_v = 0.0;  // roundoff
    return spec;
}

std::pair<double, std::vector<double>> match_linear(const IsingModel& model, FmSign sign) {
    const double s = sign_factor(sign);
    std::vector<double> w(model.h.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = -s * model.h[i];
    return {s * model.c, std::move(w)};
}

FmParams low_rank_init(const IsingModel& model, int k, FmSign sign) {
    if (k < 1 || k > model.n - 1)
        throw std::out_of_range("low_rank_init: rank must satisfy 1 <= k <= N-1");

    SymMatrix target = model.j;
    if (sign == FmSign::positive)
        for (double& v : target.a) v = -v;

    const EigenDecomposition ed = eigh(target);
    const double lambda_min = ed.eigenvalues.back();

    FmParams p;
    p.n = model.n;
    p.k = k;
    p.sign = sign;
    std::tie(p.w0, p.w) = match_linear(model, sign);
    p.v.resize(static_cast<std::size_t>(model.n) * k);
    for (int m = 0; m < k; ++m) {
        const double shifted = ed.eigenvalues[m] - lambda_min;
        const double root = std::sqrt(shifted > 0.0 ? shifted : 0.0);
        for (int i = 0; i < model.n; ++i) p.vat(i, m) = root * ed.vec(i, m);
    }
    return p;
}

double truncation_error(const IsingModel& model, int k) {
    if (k < 1 || k > model.n)
        throw std::out_of_range("truncation_error: rank must satisfy 1 <= k <= N");
    const EigenDecomposition ed = eigh(model.j);
    const double lambda_min = ed.eigenvalues.back();
    double acc = 0.0;
    for (int i = k; i < model.n; ++i) {
        const double shifted = ed.eigenvalues[i] - lambda_min;
        acc += shifted * shifted;
    }
    return std::sqrt(acc);
}

FmParams energy_random_init(const IsingModel& model, int k, FmSign sign, std::uint64_t seed) {
    return energy_random_init(model, k, sign, seed, coupling_stats(model));
}

FmParams energy_random_init(const IsingModel& model, int k, FmSign sign, std::uint64_t seed,
                            const CouplingStats& stats) {
    return make_random_fm(model, k, sign, energy_init_spec(stats.mean_sq, k), seed);
}

FmParams coupling_random_init(const IsingModel& model, int k, std::uint64_t seed) {
    return coupling_random_init(model, k, seed, coupling_stats(model));
}

FmParams coupling_random_init(const IsingModel& model, int k, std::uint64_t seed,
                              const CouplingStats& stats) {
    // Nonnegative mean pairs with the negative FM; a negative mean flips
    // both the FM sign and the mean fed to the spec.
    const FmSign sign = stats.mu >= 0.0 ? FmSign::negative : FmSign::positive;
    const RandomInitSpec spec = coupling_init_spec(std::abs(stats.mu), stats.sigma2, k);
    return make_random_fm(model, k, sign, spec, seed);
}

double coupling_error(const IsingModel& model, const FmParams& p) {
    if (p.n != model.n)
        throw std::invalid_argument("coupling_error: dimension mismatch");
    const double s = sign_factor(p.sign) < 0.0 ? 1.0 : -1.0;  // negative FM: G ~ J
    double acc = 0.0;
    for (int i = 0; i < model.n; ++i)
        for (int j = i + 1; j < model.n; ++j) {
            double dot = 0.0;
            for (int kk = 0; kk < p.k; ++kk) dot += p.vat(i, kk) * p.vat(j, kk);
            const double diff = model.j(i, j) - s * dot;
            acc += 2.0 * diff * diff;
        }
    return std::sqrt(acc);
}

}  // namespace fmising
