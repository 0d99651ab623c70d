#include "fmising/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fmising {

namespace {

constexpr int kMaxDim = 2048;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const std::vector<double>& a, int n) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = a[static_cast<std::size_t>(i) * n + j];
            acc += 2.0 * v * v;
        }
    return std::sqrt(acc);
}

// One Jacobi rotation zeroing a_pq, accumulating into u.
void rotate(std::vector<double>& a, std::vector<double>& u, int n, int p, int q) {
    const auto at = [n](std::vector<double>& m, int i, int j) -> double& {
        return m[static_cast<std::size_t>(i) * n + j];
    };
    const double apq = at(a, p, q);
    const double theta = (at(a, q, q) - at(a, p, p)) / (2.0 * apq);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 1.0 / (2.0 * theta);  // avoids overflow in theta*theta
    } else {
        t = ((theta >= 0.0) ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const double tau = s / (1.0 + c);

    const double app = at(a, p, p);
    const double aqq = at(a, q, q);
    at(a, p, p) = app - t * apq;
    at(a, q, q) = aqq + t * apq;
    at(a, p, q) = 0.0;
    at(a, q, p) = 0.0;
    for (int r = 0; r < n; ++r) {
        if (r != p && r != q) {
            const double arp = at(a, r, p);
            const double arq = at(a, r, q);
            at(a, r, p) = arp - s * (arq + tau * arp);
            at(a, p, r) = at(a, r, p);
            at(a, r, q) = arq + s * (arp - tau * arq);
            at(a, q, r) = at(a, r, q);
        }
        const double urp = at(u, r, p);
        const double urq = at(u, r, q);
        at(u, r, p) = urp - s * (urq + tau * urp);
        at(u, r, q) = urq + s * (urp - tau * urq);
    }
}

}  // namespace

SymMatrix SymMatrix::from_entries(int dim, const std::vector<double>& entries) {
    if (dim < 0 || entries.size() != static_cast<std::size_t>(dim) * dim)
        throw std::invalid_argument("SymMatrix: entry count does not match dimension");
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            m(i, j) = 0.5 * (entries[static_cast<std::size_t>(i) * dim + j] +
                             entries[static_cast<std::size_t>(j) * dim + i]);
    return m;
}

double frobenius(const SymMatrix& m) {
    double acc = 0.0;
    for (const double v : m.a) acc += v * v;
    return std::sqrt(acc);
}

EigenDecomposition eigh(const SymMatrix& m) {
    const int n = m.n;
    if (n <= 0) throw std::invalid_argument("eigh: empty matrix");
    if (n > kMaxDim) throw std::invalid_argument("eigh: dimension exceeds 2048");
    for (const double v : m.a)
        if (!std::isfinite(v)) throw std::invalid_argument("eigh: non-finite entry");

    std::vector<double> a = m.a;
    std::vector<double> u(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i) * n + i] = 1.0;

    const double threshold = 1e-12 * frobenius(m);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a, n) <= threshold) break;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q)
                if (a[static_cast<std::size_t>(p) * n + q] != 0.0) rotate(a, u, n, p, q);
    }

    // Sort descending; exact ties ordered by the sign-fixed column entries
    // so degenerate spectra still reproduce the same U.
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = a[static_cast<std::size_t>(i) * n + i];

    std::vector<std::vector<double>> columns(n, std::vector<double>(n));
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) columns[c][r] = u[static_cast<std::size_t>(r) * n + c];
        int first = 0;
        while (first < n - 1 && std::abs(columns[c][first]) <= 1e-12) ++first;
        if (columns[c][first] < 0.0)
            for (double& v : columns[c]) v = -v;
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int lhs, int rhs) {
        if (values[lhs] != values[rhs]) return values[lhs] > values[rhs];
        return columns[lhs] > columns[rhs];
    });

    EigenDecomposition out;
    out.n = n;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(static_cast<std::size_t>(n) * n);
    for (int c = 0; c < n; ++c) {
        out.eigenvalues[c] = values[order[c]];
        for (int r = 0; r < n; ++r)
            out.eigenvectors[static_cast<std::size_t>(r) * n + c] = columns[order[c]][r];
    }
    return out;
}

}  // namespace fmising
