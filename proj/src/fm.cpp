#include "fmising/fm.hpp"

#include <stdexcept>

namespace fmising {

namespace {

void check_dims(const FmParams& p, const SpinConfig& x) {
    if (x.size() != p.n)
        throw std::invalid_argument("spin configuration length does not match FM dimension");
    if (p.k < 1) throw std::invalid_argument("FM rank must be at least 1");
    if (p.w.size() != static_cast<std::size_t>(p.n) ||
        p.v.size() != static_cast<std::size_t>(p.n) * p.k)
        throw std::invalid_argument("FM parameter sizes are inconsistent");
}

}  // namespace

const char* to_string(FmSign s) { return s == FmSign::positive ? "positive" : "negative"; }

double forward(const FmParams& p, const SpinConfig& x) {
    check_dims(p, x);
    double acc = p.w0;
    for (int i = 0; i < p.n; ++i) acc += p.w[static_cast<std::size_t>(i)] * x[i];

    double pair = 0.0;
    for (int kk = 0; kk < p.k; ++kk) {
        double q = 0.0;
        double sum_sq = 0.0;
        for (int i = 0; i < p.n; ++i) {
            const double vik = p.vat(i, kk);
            q += vik * x[i];
            sum_sq += vik * vik;
        }
        pair += q * q - sum_sq;
    }
    return sign_factor(p.sign) * (acc + 0.5 * pair);
}

FmGrad grad(const FmParams& p, const SpinConfig& x, double residual) {
    check_dims(p, x);
    const double scale = 2.0 * residual * sign_factor(p.sign);

    FmGrad g;
    g.w0 = scale;
    g.w.resize(static_cast<std::size_t>(p.n));
    g.v.resize(static_cast<std::size_t>(p.n) * p.k);
    for (int i = 0; i < p.n; ++i) g.w[static_cast<std::size_t>(i)] = scale * x[i];
    for (int kk = 0; kk < p.k; ++kk) {
        double q = 0.0;
        for (int i = 0; i < p.n; ++i) q += p.vat(i, kk) * x[i];
        for (int i = 0; i < p.n; ++i)
            g.v[static_cast<std::size_t>(i) * p.k + kk] =
                scale * x[i] * (q - p.vat(i, kk) * x[i]);
    }
    return g;
}

SymMatrix coupling_matrix(const FmParams& p) {
    SymMatrix g(p.n);
    for (int i = 0; i < p.n; ++i)
        for (int j = i; j < p.n; ++j) {
            double dot = 0.0;
            for (int kk = 0; kk < p.k; ++kk) dot += p.vat(i, kk) * p.vat(j, kk);
            g(i, j) = dot;
            g(j, i) = dot;
        }
    return g;
}

}  // namespace fmising
