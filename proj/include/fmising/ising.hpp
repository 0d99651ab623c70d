#pragma once

#include <cstdint>
#include <vector>

#include "fmising/linalg.hpp"

namespace fmising {

/// Spin configuration: every component is exactly +1 or -1.
struct SpinConfig {
    std::vector<double> s;

    SpinConfig() = default;
    explicit SpinConfig(std::vector<double> spins) : s(std::move(spins)) {}

    int size() const { return static_cast<int>(s.size()); }
    double operator[](int i) const { return s[static_cast<std::size_t>(i)]; }
};

bool spins_valid(const SpinConfig& x);

/// Ising model H(x) = c - sum_i h_i x_i - sum_{i<j} J_ij x_i x_j.
/// J is symmetric with an identically zero diagonal; diagonal terms are a
/// constant on {+-1}^N and never enter the Hamiltonian.
struct IsingModel {
    int n = 0;
    double c = 0.0;
    std::vector<double> h;  // length n
    SymMatrix j;            // n x n, symmetric, zero diagonal
};

/// Sherrington-Kirkpatrick ensemble: J_ij ~ N(j0/n, j1^2/n) for i < j.
struct SkParams {
    int n = 0;
    double j0 = 1.0;
    double j1 = 0.1;
    std::uint64_t seed = 0;
};

/// Unique spin configurations paired with their Ising energies.
struct Dataset {
    std::vector<SpinConfig> configs;
    std::vector<double> energies;

    std::size_t size() const { return configs.size(); }
};

/// Draws an SK instance with c = 0, h = 0. Each coupling is keyed by
/// (seed, i, j), so changing j0/j1 rescales the same underlying Gaussian
/// pattern and the instance is reproducible entry by entry.
IsingModel generate_sk(const SkParams& params);

/// Hamiltonian value at x.
double energy(const IsingModel& model, const SpinConfig& x);

/// Samples d distinct spin configurations uniformly without replacement
/// and pairs them with their energies. Throws if d exceeds 2^N.
Dataset build_dataset(const IsingModel& model, std::size_t d, std::uint64_t seed);

/// Monte Carlo estimate of Var_x[H2(x)] with H2 = -sum_{i<j} J_ij x_i x_j
/// under uniform spins. Converges to sum_{i<j} J_ij^2.
double interaction_energy_variance_mc(const IsingModel& model, std::size_t samples,
                                      std::uint64_t seed);

}  // namespace fmising
