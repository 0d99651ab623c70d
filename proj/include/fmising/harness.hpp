#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fmising/rmt.hpp"
#include "fmising/train.hpp"

namespace fmising {

enum class Figure { fig1, fig2, fig3, fig4, fig5 };
const char* to_string(Figure f);

enum class InitMethod {
    low_rank_pos,
    low_rank_neg,
    energy_pos,
    energy_neg,
    coupling_pos,
    coupling_neg,
};
const char* to_string(InitMethod m);

/// Sweep configuration. Desk-scale defaults; the paper protocol uses
/// repetitions = 50 and epochs = 10000.
struct ExperimentConfig {
    Figure figure = Figure::fig1;
    std::vector<int> dims{10};          // fig4 sweeps several N; others use dims[0]
    double j0 = 1.0;
    std::vector<double> j1_values{0.1};
    std::vector<std::size_t> dataset_sizes{10};
    std::vector<int> ranks{2, 4, 6, 8};
    int repetitions = 10;               // fig4: instances per (N, J1)
    double alpha = 0.15;
    TrainConfig train;
    std::uint64_t master_seed = 1;
    std::string output_path;            // directory; empty = no files written
    std::optional<std::string> instance_path;  // fig1/fig2: load model instead of generating
    int threads = 0;                    // 0 = hardware concurrency
    bool dump_traces = false;
};

struct SweepCellStats {
    double mean = 0.0;
    double stddev = 0.0;
    int count = 0;
};

/// One sweep cell: min-coupling-error statistics over repetitions.
struct SweepRecord {
    InitMethod method = InitMethod::coupling_neg;
    int rank = 0;
    std::size_t dataset_size = 0;
    double j1 = 0.0;
    SweepCellStats stats;
    std::vector<double> raw;  // per-repetition values, index = repetition
};

/// One encoded paper-direction claim, evaluated on the sweep results.
struct AssertionResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Empirical-vs-approximate CDF table for one generated instance.
struct CdfTable {
    int n = 0;
    double j1 = 0.0;
    int instance = 0;
    std::vector<CdfPoint> points;      // x = normalized eigenvalue, p = empirical
    std::vector<double> approx;        // approx_cdf at the same x
    double sup_distance = 0.0;
};

struct KStarRecord {
    int n = 0;
    double alpha = 0.0;
    RankPrediction prediction;
};

struct FigureResult {
    Figure figure = Figure::fig1;
    std::vector<SweepRecord> records;
    std::vector<CdfTable> cdf_tables;       // fig4
    std::vector<KStarRecord> rank_predictions;  // fig5
    std::vector<AssertionResult> assertions;

    bool all_passed() const;
};

/// Deterministic child seed for one cell of one sweep. Distinct
/// coordinates under one master seed give distinct seeds; every run
/// scans its full grid for collisions.
std::uint64_t seed_schedule(std::uint64_t master_seed, std::span<const std::uint64_t> coordinates);

FigureResult run_fig1(const ExperimentConfig& cfg);
FigureResult run_fig2(const ExperimentConfig& cfg);
FigureResult run_fig3(const ExperimentConfig& cfg);
FigureResult run_fig4(const ExperimentConfig& cfg);
FigureResult run_fig5(const ExperimentConfig& cfg);
FigureResult run_figure(const ExperimentConfig& cfg);

/// Writes raw + summary CSVs and a JSON config sidecar into
/// cfg.output_path. No-op when the path is empty.
void write_outputs(const ExperimentConfig& cfg, const FigureResult& result);

}  // namespace fmising
