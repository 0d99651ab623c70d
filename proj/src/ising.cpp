#include "fmising/ising.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "fmising/random.hpp"

namespace fmising {

namespace {

void check_dims(const IsingModel& model, const SpinConfig& x) {
    if (x.size() != model.n)
        throw std::invalid_argument("spin configuration length does not match model dimension");
}

SpinConfig random_spins(int n, Rng& rng) {
    SpinConfig x;
    x.s.resize(static_cast<std::size_t>(n));
    std::uint64_t word = 0;
    int bits = 0;
    for (int i = 0; i < n; ++i) {
        if (bits == 0) {
            word = rng.next_u64();
            bits = 64;
        }
        x.s[static_cast<std::size_t>(i)] = (word & 1u) ? 1.0 : -1.0;
        word >>= 1;
        --bits;
    }
    return x;
}

std::string pack_key(const SpinConfig& x) {
    std::string key((static_cast<std::size_t>(x.size()) + 7) / 8, '\0');
    for (int i = 0; i < x.size(); ++i)
        if (x[i] > 0.0) key[static_cast<std::size_t>(i) / 8] |= static_cast<char>(1 << (i % 8));
    return key;
}

// -sum_{i<j} J_ij x_i x_j via the zero-diagonal quadratic form.
double interaction_energy(const IsingModel& model, const SpinConfig& x) {
    double quad = 0.0;
    for (int i = 0; i < model.n; ++i) {
        double row = 0.0;
        for (int j = 0; j < model.n; ++j) row += model.j(i, j) * x[j];
        quad += x[i] * row;
    }
    return -0.5 * quad;
}

}  // namespace

bool spins_valid(const SpinConfig& x) {
    for (const double v : x.s)
        if (v != 1.0 && v != -1.0) return false;
    return true;
}

IsingModel generate_sk(const SkParams& params) {
    if (params.n < 2) throw std::invalid_argument("generate_sk: dimension must be at least 2");
    if (!(params.j1 > 0.0)) throw std::invalid_argument("generate_sk: j1 must be positive");

    IsingModel model;
    model.n = params.n;
    model.c = 0.0;
    model.h.assign(static_cast<std::size_t>(params.n), 0.0);
    model.j = SymMatrix(params.n);

    const double mean = params.j0 / params.n;
    const double sd = params.j1 / std::sqrt(static_cast<double>(params.n));
    for (int i = 0; i < params.n; ++i)
        for (int j = i + 1; j < params.n; ++j) {
            Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(i),
                                static_cast<std::uint64_t>(j)));
            const double value = mean + sd * rng.normal();
            model.j(i, j) = value;
            model.j(j, i) = value;
        }
    return model;
}

double energy(const IsingModel& model, const SpinConfig& x) {
    check_dims(model, x);
    double acc = model.c;
    for (int i = 0; i < model.n; ++i) acc -= model.h[static_cast<std::size_t>(i)] * x[i];
    return acc + interaction_energy(model, x);
}

Dataset build_dataset(const IsingModel& model, std::size_t d, std::uint64_t seed) {
    if (model.n < 63) {
        const std::uint64_t capacity = 1ULL << model.n;
        if (d > capacity) throw std::invalid_argument("build_dataset: d exceeds 2^N");
    }

    Dataset data;
    data.configs.reserve(d);
    data.energies.reserve(d);
    Rng rng(derive_seed(seed, 0x64617461ULL));
    std::unordered_set<std::string> seen;
    seen.reserve(d * 2);
    while (data.configs.size() < d) {
        SpinConfig x = random_spins(model.n, rng);
        if (!seen.insert(pack_key(x)).second) continue;
        data.energies.push_back(energy(model, x));
        data.configs.push_back(std::move(x));
    }
    return data;
}

double interaction_energy_variance_mc(const IsingModel& model, std::size_t samples,
                                      std::uint64_t seed) {
    if (samples < 2) throw std::invalid_argument("variance estimate needs at least 2 samples");
    Rng rng(derive_seed(seed, 0x766172ULL));
    double mean = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const SpinConfig x = random_spins(model.n, rng);
        const double value = interaction_energy(model, x);
        const double delta = value - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (value - mean);
    }
    return m2 / static_cast<double>(samples - 1);
}

}  // namespace fmising
