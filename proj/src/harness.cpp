#include "fmising/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "fmising/random.hpp"
#include "fmising/serialize.hpp"

namespace fmising {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Coordinate tags keep the seed streams of different purposes disjoint.
constexpr std::uint64_t kInstanceTag = 1;
constexpr std::uint64_t kDatasetTag = 2;
constexpr std::uint64_t kInitTag = 3;
constexpr std::uint64_t kEnsembleTag = 4;

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto body = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

SweepCellStats stats_of(const std::vector<double>& raw) {
    SweepCellStats s;
    s.count = static_cast<int>(raw.size());
    if (raw.empty()) return s;
    double sum = 0.0;
    for (const double v : raw) sum += v;
    s.mean = sum / static_cast<double>(raw.size());
    double acc = 0.0;
    for (const double v : raw) acc += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(raw.size()));
    return s;
}

void check_common(const ExperimentConfig& cfg) {
    if (cfg.dims.empty() || cfg.j1_values.empty()) throw std::invalid_argument("config: empty sweep list");
    if (cfg.repetitions < 1) throw std::invalid_argument("config: repetitions must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw std::invalid_argument("config: alpha must lie in (0,1)");
    for (const int n : cfg.dims)
        if (n < 2) throw std::invalid_argument("config: dimension must be at least 2");
    for (const double j1 : cfg.j1_values)
        if (!(j1 > 0.0)) throw std::invalid_argument("config: j1 must be positive");
}

void check_training_grid(const ExperimentConfig& cfg) {
    check_common(cfg);
    if (cfg.ranks.empty() || cfg.dataset_sizes.empty())
        throw std::invalid_argument("config: empty sweep list");
    const int n = cfg.dims.front();
    for (const int k : cfg.ranks)
        if (k < 1 || k > n - 1)
            throw std::invalid_argument("config: ranks must satisfy 1 <= K <= N-1");
    for (const std::size_t d : cfg.dataset_sizes) {
        if (d < 1) throw std::invalid_argument("config: dataset sizes must be >= 1");
        if (n < 63 && d > (1ULL << n))
            throw std::invalid_argument("config: dataset size exceeds 2^N");
    }
}

void scan_for_collisions(const std::vector<std::uint64_t>& seeds) {
    std::vector<std::uint64_t> sorted = seeds;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::logic_error("seed schedule collision across the sweep grid");
}

FmParams make_init(InitMethod method, const IsingModel& model, int rank,
                   const CouplingStats& stats, std::uint64_t seed) {
    switch (method) {
        case InitMethod::low_rank_pos: return low_rank_init(model, rank, FmSign::positive);
        case InitMethod::low_rank_neg: return low_rank_init(model, rank, FmSign::negative);
        case InitMethod::energy_pos:
            return energy_random_init(model, rank, FmSign::positive, seed, stats);
        case InitMethod::energy_neg:
            return energy_random_init(model, rank, FmSign::negative, seed, stats);
        case InitMethod::coupling_pos:
        case InitMethod::coupling_neg: return coupling_random_init(model, rank, seed, stats);
    }
    throw std::logic_error("unknown init method");
}

std::uint64_t method_id(InitMethod m) { return static_cast<std::uint64_t>(m); }

const SweepRecord* find_record(const std::vector<SweepRecord>& records, InitMethod method,
                               int rank, std::size_t d, double j1) {
    for (const SweepRecord& r : records)
        if (r.method == method && r.rank == rank && r.dataset_size == d && r.j1 == j1) return &r;
    return nullptr;
}

// Runs the init -> train -> min-coupling-error protocol over the full
// (method x rank x dataset x j1 x repetition) grid. Methods that draw
// random parameters get a fresh seed per cell; datasets are resampled per
// repetition and shared across methods, ranks and j1 values so that
// comparisons are paired.
FigureResult run_training_figure(const ExperimentConfig& cfg,
                                 const std::vector<InitMethod>& requested_methods) {
    check_training_grid(cfg);
    const int n = cfg.dims.front();
    const std::uint64_t fig_id = static_cast<std::uint64_t>(cfg.figure);

    if (cfg.instance_path && cfg.j1_values.size() != 1)
        throw std::invalid_argument("config: a loaded instance needs exactly one j1 label");

    // One instance per figure; for generated SK models each j1 rescales
    // the same Gaussian pattern. Moments: population values for SK,
    // sample moments when an explicit instance was supplied.
    const std::uint64_t instance_seed =
        seed_schedule(cfg.master_seed, std::array<std::uint64_t, 2>{fig_id, kInstanceTag});
    std::vector<IsingModel> models;
    std::vector<CouplingStats> stats;
    for (std::size_t j = 0; j < cfg.j1_values.size(); ++j) {
        if (cfg.instance_path) {
            models.push_back(load_model(*cfg.instance_path));
            stats.push_back(coupling_stats(models.back()));
            if (models.back().n != n)
                throw std::invalid_argument("config: instance dimension does not match --n");
        } else {
            const SkParams sk{n, cfg.j0, cfg.j1_values[j], instance_seed};
            models.push_back(generate_sk(sk));
            stats.push_back(population_stats(sk));
        }
    }

    // Resolve the coupling-distribution method label by the sign the
    // initializer will actually pick.
    std::vector<InitMethod> methods = requested_methods;
    for (InitMethod& m : methods)
        if (m == InitMethod::coupling_neg || m == InitMethod::coupling_pos)
            m = stats.front().mu >= 0.0 ? InitMethod::coupling_neg : InitMethod::coupling_pos;

    // Datasets per (dataset size, repetition, j1); the spin sets depend
    // only on (dataset size, repetition).
    const std::size_t n_d = cfg.dataset_sizes.size();
    const std::size_t n_j = cfg.j1_values.size();
    const std::size_t reps = static_cast<std::size_t>(cfg.repetitions);
    std::vector<Dataset> datasets(n_d * n_j * reps);
    std::vector<std::uint64_t> all_seeds{instance_seed};
    for (std::size_t di = 0; di < n_d; ++di)
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const std::uint64_t data_seed = seed_schedule(
                cfg.master_seed, std::array<std::uint64_t, 4>{fig_id, kDatasetTag, di, rep});
            all_seeds.push_back(data_seed);
            for (std::size_t ji = 0; ji < n_j; ++ji)
                datasets[(di * n_j + ji) * reps + rep] =
                    build_dataset(models[ji], cfg.dataset_sizes[di], data_seed);
        }

    struct Job {
        std::size_t record_index;
        std::size_t method_index;
        int rank;
        std::size_t d_index;
        std::size_t j1_index;
        std::size_t rep;
        std::uint64_t init_seed;
    };

    FigureResult result;
    result.figure = cfg.figure;
    std::vector<Job> jobs;
    for (std::size_t mi = 0; mi < methods.size(); ++mi)
        for (const int rank : cfg.ranks)
            for (std::size_t di = 0; di < n_d; ++di)
                for (std::size_t ji = 0; ji < n_j; ++ji) {
                    SweepRecord record;
                    record.method = methods[mi];
                    record.rank = rank;
                    record.dataset_size = cfg.dataset_sizes[di];
                    record.j1 = cfg.j1_values[ji];
                    record.raw.assign(reps, 0.0);
                    const std::size_t record_index = result.records.size();
                    result.records.push_back(std::move(record));
                    for (std::size_t rep = 0; rep < reps; ++rep) {
                        const std::uint64_t init_seed = seed_schedule(
                            cfg.master_seed,
                            std::array<std::uint64_t, 7>{fig_id, kInitTag, method_id(methods[mi]),
                                                         static_cast<std::uint64_t>(rank), di, ji,
                                                         rep});
                        all_seeds.push_back(init_seed);
                        jobs.push_back({record_index, mi, rank, di, ji, rep, init_seed});
                    }
                }
    scan_for_collisions(all_seeds);

    const bool dump = cfg.dump_traces && !cfg.output_path.empty();
    if (dump) fs::create_directories(fs::path(cfg.output_path) / "traces");

    parallel_for(jobs.size(), cfg.threads, [&](std::size_t index) {
        const Job& job = jobs[index];
        const IsingModel& model = models[job.j1_index];
        const Dataset& data = datasets[(job.d_index * n_j + job.j1_index) * reps + job.rep];
        const FmParams p0 =
            make_init(methods[job.method_index], model, job.rank, stats[job.j1_index], job.init_seed);
        const TrainResult tr = train(p0, data, model, cfg.train);
        result.records[job.record_index].raw[job.rep] = tr.best_coupling_error;
        if (dump) {
            std::ostringstream name;
            name << to_string(cfg.figure) << '_' << to_string(methods[job.method_index]) << "_k"
                 << job.rank << "_d" << cfg.dataset_sizes[job.d_index] << "_j1"
                 << format_double(cfg.j1_values[job.j1_index]) << "_rep" << job.rep << ".csv";
            std::ofstream out(fs::path(cfg.output_path) / "traces" / name.str());
            write_trace_csv(tr, out);
        }
    });

    for (SweepRecord& record : result.records) record.stats = stats_of(record.raw);
    return result;
}

double method_mean(const std::vector<SweepRecord>& records, InitMethod method, int rank,
                   std::size_t d, double j1) {
    const SweepRecord* r = find_record(records, method, rank, d, j1);
    if (!r) throw std::logic_error("sweep record lookup failed");
    return r->stats.mean;
}

InitMethod coupling_label(const std::vector<SweepRecord>& records) {
    for (const SweepRecord& r : records)
        if (r.method == InitMethod::coupling_pos) return InitMethod::coupling_pos;
    return InitMethod::coupling_neg;
}

void assert_data_scaling(const ExperimentConfig& cfg, FigureResult& result,
                         const std::vector<InitMethod>& methods) {
    if (cfg.dataset_sizes.size() < 2) return;
    const auto [min_d, max_d] =
        std::minmax_element(cfg.dataset_sizes.begin(), cfg.dataset_sizes.end());
    const int top_rank = *std::max_element(cfg.ranks.begin(), cfg.ranks.end());
    const double j1 = cfg.j1_values.front();
    bool ok = true;
    std::ostringstream detail;
    for (const InitMethod m : methods) {
        const double big = method_mean(result.records, m, top_rank, *max_d, j1);
        const double small = method_mean(result.records, m, top_rank, *min_d, j1);
        detail << to_string(m) << ": D=" << *max_d << " mean " << format_double(big) << " vs D="
               << *min_d << " mean " << format_double(small) << "; ";
        ok = ok && big <= small;
    }
    result.assertions.push_back(
        {"more_data_reduces_error_at_top_rank", ok, detail.str()});
}

FigureResult run_fig1_impl(const ExperimentConfig& cfg) {
    FigureResult result = run_training_figure(
        cfg, {InitMethod::energy_pos, InitMethod::energy_neg, InitMethod::coupling_neg});
    const InitMethod coupling = coupling_label(result.records);

    assert_data_scaling(cfg, result,
                        {InitMethod::energy_pos, InitMethod::energy_neg, coupling});

    // Coupling-distribution init leads the random methods in the
    // small-data regime at the majority of ranks.
    const std::size_t min_d = *std::min_element(cfg.dataset_sizes.begin(), cfg.dataset_sizes.end());
    const double j1 = cfg.j1_values.front();
    int wins = 0;
    for (const int rank : cfg.ranks) {
        const double c = method_mean(result.records, coupling, rank, min_d, j1);
        const double e_pos = method_mean(result.records, InitMethod::energy_pos, rank, min_d, j1);
        const double e_neg = method_mean(result.records, InitMethod::energy_neg, rank, min_d, j1);
        if (c <= e_pos && c <= e_neg) ++wins;
    }
    std::ostringstream detail;
    detail << wins << " of " << cfg.ranks.size() << " ranks at D=" << min_d;
    result.assertions.push_back({"coupling_init_leads_small_data",
                                 wins * 2 > static_cast<int>(cfg.ranks.size()), detail.str()});
    return result;
}

FigureResult run_fig2_impl(const ExperimentConfig& cfg) {
    FigureResult result = run_training_figure(
        cfg, {InitMethod::low_rank_pos, InitMethod::low_rank_neg, InitMethod::coupling_neg});
    const InitMethod coupling = coupling_label(result.records);
    const int n = cfg.dims.front();
    const double j1 = cfg.j1_values.front();

    assert_data_scaling(cfg, result,
                        {InitMethod::low_rank_pos, InitMethod::low_rank_neg, coupling});

    if (std::find(cfg.ranks.begin(), cfg.ranks.end(), n - 1) != cfg.ranks.end()) {
        bool ok = true;
        double worst = 0.0;
        for (const SweepRecord& r : result.records)
            if (r.rank == n - 1 &&
                (r.method == InitMethod::low_rank_pos || r.method == InitMethod::low_rank_neg))
                for (const double v : r.raw) {
                    worst = std::max(worst, v);
                    ok = ok && v <= 1e-8;
                }
        result.assertions.push_back({"full_rank_low_rank_exact", ok,
                                     "max coupling error " + format_double(worst) + " at K=N-1"});
    }

    const std::size_t min_d = *std::min_element(cfg.dataset_sizes.begin(), cfg.dataset_sizes.end());
    bool ok = true;
    std::ostringstream detail;
    for (const int rank : cfg.ranks) {
        const double lr = method_mean(result.records, InitMethod::low_rank_neg, rank, min_d, j1);
        const double cp = method_mean(result.records, coupling, rank, min_d, j1);
        detail << "K=" << rank << ": " << format_double(lr) << " vs " << format_double(cp) << "; ";
        ok = ok && lr <= cp;
    }
    result.assertions.push_back({"low_rank_leads_small_data", ok, detail.str()});
    return result;
}

FigureResult run_fig3_impl(const ExperimentConfig& cfg) {
    if (cfg.ranks.size() != 1 || cfg.dataset_sizes.size() != 1)
        throw std::invalid_argument("fig3 fixes one rank and one dataset size");
    FigureResult result = run_training_figure(
        cfg, {InitMethod::low_rank_pos, InitMethod::low_rank_neg, InitMethod::coupling_neg});
    const InitMethod coupling = coupling_label(result.records);
    const int rank = cfg.ranks.front();
    const std::size_t d = cfg.dataset_sizes.front();

    std::vector<double> j1s = cfg.j1_values;
    std::sort(j1s.begin(), j1s.end());
    if (j1s.size() < 2) return result;

    bool grows = true;
    std::ostringstream growth_detail;
    for (const InitMethod m : {InitMethod::low_rank_pos, InitMethod::low_rank_neg, coupling}) {
        growth_detail << to_string(m) << ':';
        for (std::size_t i = 0; i < j1s.size(); ++i) {
            const double mean = method_mean(result.records, m, rank, d, j1s[i]);
            growth_detail << ' ' << format_double(mean);
            if (i > 0) grows = grows && mean > method_mean(result.records, m, rank, d, j1s[i - 1]);
        }
        growth_detail << "; ";
    }
    result.assertions.push_back({"error_grows_with_j1", grows, growth_detail.str()});

    const auto gap = [&](double j1) {
        return method_mean(result.records, coupling, rank, d, j1) -
               method_mean(result.records, InitMethod::low_rank_neg, rank, d, j1);
    };
    const double gap_low = gap(j1s.front());
    const double gap_high = gap(j1s.back());
    result.assertions.push_back({"low_rank_advantage_widens", gap_high >= gap_low,
                                 "gap(J1=" + format_double(j1s.back()) + ") = " +
                                     format_double(gap_high) + " vs gap(J1=" +
                                     format_double(j1s.front()) + ") = " + format_double(gap_low)});
    return result;
}

FigureResult run_fig4_impl(const ExperimentConfig& cfg) {
    check_common(cfg);
    FigureResult result;
    result.figure = cfg.figure;
    const std::uint64_t fig_id = static_cast<std::uint64_t>(cfg.figure);
    const std::size_t reps = static_cast<std::size_t>(cfg.repetitions);

    struct Key {
        std::size_t dim_index;
        std::size_t j1_index;
        std::size_t instance;
    };
    std::vector<Key> keys;
    std::vector<std::uint64_t> seeds;
    for (std::size_t ni = 0; ni < cfg.dims.size(); ++ni)
        for (std::size_t ji = 0; ji < cfg.j1_values.size(); ++ji)
            for (std::size_t inst = 0; inst < reps; ++inst) {
                keys.push_back({ni, ji, inst});
                seeds.push_back(seed_schedule(
                    cfg.master_seed,
                    std::array<std::uint64_t, 5>{fig_id, kEnsembleTag, ni, ji, inst}));
            }
    scan_for_collisions(seeds);

    result.cdf_tables.resize(keys.size());
    parallel_for(keys.size(), cfg.threads, [&](std::size_t index) {
        const Key& key = keys[index];
        const int n = cfg.dims[key.dim_index];
        const double j1 = cfg.j1_values[key.j1_index];
        const EnsembleParams ensemble{n, cfg.j0 / n, j1 / std::sqrt(static_cast<double>(n))};
        const SymMatrix matrix = sample_goe(ensemble, seeds[index]);
        const std::vector<double> normalized = normalize_spectrum(eigh(matrix).eigenvalues);

        CdfTable table;
        table.n = n;
        table.j1 = j1;
        table.instance = static_cast<int>(key.instance);
        table.points = empirical_cdf(normalized);
        table.approx.reserve(table.points.size());
        for (const CdfPoint& point : table.points)
            table.approx.push_back(approx_cdf(ensemble, std::clamp(point.x, 0.0, 1.0)));
        table.sup_distance = ks_distance(normalized, ensemble);
        result.cdf_tables[index] = std::move(table);
    });

    const auto mean_sup = [&](int n, double j1) {
        double acc = 0.0;
        int count = 0;
        for (const CdfTable& t : result.cdf_tables)
            if (t.n == n && t.j1 == j1) {
                acc += t.sup_distance;
                ++count;
            }
        return acc / std::max(count, 1);
    };

    if (cfg.dims.size() >= 2) {
        const auto [min_n, max_n] = std::minmax_element(cfg.dims.begin(), cfg.dims.end());
        bool ok = true;
        std::ostringstream detail;
        for (const double j1 : cfg.j1_values) {
            const double big = mean_sup(*max_n, j1);
            const double small = mean_sup(*min_n, j1);
            detail << "J1=" << format_double(j1) << ": N=" << *max_n << " mean sup "
                   << format_double(big) << " vs N=" << *min_n << " " << format_double(small)
                   << "; ";
            ok = ok && big <= small;
        }
        result.assertions.push_back({"agreement_improves_with_n", ok, detail.str()});
    }
    const int max_n = *std::max_element(cfg.dims.begin(), cfg.dims.end());
    if (max_n >= 100) {
        const double j1 = cfg.j1_values.front();
        const double sup = mean_sup(max_n, j1);
        result.assertions.push_back({"cdf_fit_at_large_n", sup <= 0.08,
                                     "mean sup-distance " + format_double(sup) + " at N=" +
                                         std::to_string(max_n) + ", J1=" + format_double(j1)});
    }
    return result;
}

FigureResult run_fig5_impl(const ExperimentConfig& cfg) {
    FigureResult result = run_training_figure(cfg, {InitMethod::low_rank_neg});
    const int n = cfg.dims.front();
    const std::size_t d = cfg.dataset_sizes.front();

    // K* is computed once from the smallest-J1 ensemble and reused across
    // J1 curves; the bulk of the spectrum is J1-independent after
    // normalization.
    const double j1_ref = *std::min_element(cfg.j1_values.begin(), cfg.j1_values.end());
    const EnsembleParams ensemble{n, cfg.j0 / n, j1_ref / std::sqrt(static_cast<double>(n))};
    KStarRecord kstar;
    kstar.n = n;
    kstar.alpha = cfg.alpha;
    kstar.prediction = predicted_rank(ensemble, cfg.alpha);
    result.rank_predictions.push_back(kstar);

    if (cfg.ranks.size() < 2) return result;

    const int k_ceil = static_cast<int>(std::ceil(kstar.prediction.k_star));
    std::vector<int> ranks = cfg.ranks;
    std::sort(ranks.begin(), ranks.end());
    int ref_rank = -1;
    for (const int rank : ranks)
        if (rank <= k_ceil - 2) ref_rank = rank;  // nearest plotted rank at or below K*-2
    const bool have_high = ranks.back() >= k_ceil;

    if (ref_rank > 0 && have_high) {
        bool ok = true;
        std::ostringstream detail;
        for (const double j1 : cfg.j1_values) {
            const double ref =
                method_mean(result.records, InitMethod::low_rank_neg, ref_rank, d, j1) / j1;
            detail << "J1=" << format_double(j1) << " ref(K=" << ref_rank << ")="
                   << format_double(ref) << ':';
            for (const int rank : ranks)
                if (rank >= k_ceil) {
                    const double at =
                        method_mean(result.records, InitMethod::low_rank_neg, rank, d, j1) / j1;
                    detail << " K" << rank << '=' << format_double(at);
                    ok = ok && at < ref;
                }
            detail << "; ";
        }
        result.assertions.push_back(
            {"error_suppressed_at_predicted_rank", ok,
             "ceil(K*) = " + std::to_string(k_ceil) + "; " + detail.str()});
    }

    if (cfg.j1_values.size() >= 2) {
        const double j1_low = j1_ref;
        const double j1_high = *std::max_element(cfg.j1_values.begin(), cfg.j1_values.end());
        bool ok = true;
        std::ostringstream detail;
        for (const int rank : ranks) {
            const SweepRecord* low =
                find_record(result.records, InitMethod::low_rank_neg, rank, d, j1_low);
            const SweepRecord* high =
                find_record(result.records, InitMethod::low_rank_neg, rank, d, j1_high);
            const double mean_low = low->stats.mean / j1_low;
            const double mean_high = high->stats.mean / j1_high;
            const double spread = low->stats.stddev / j1_low + high->stats.stddev / j1_high;
            detail << "K=" << rank << ": |" << format_double(mean_low) << " - "
                   << format_double(mean_high) << "| vs " << format_double(spread) << "; ";
            ok = ok && std::abs(mean_low - mean_high) <= spread;
        }
        result.assertions.push_back({"normalized_curves_consistent_across_j1", ok, detail.str()});
    }
    return result;
}

void write_summary_csv(const ExperimentConfig& cfg, const FigureResult& result,
                       const fs::path& dir) {
    const bool normalized = cfg.figure == Figure::fig5;
    std::ofstream out(dir / (std::string(to_string(cfg.figure)) + "_summary.csv"));
    out << "method,rank,dataset_size,j1,mean_delta_j,std_delta_j,count";
    if (normalized) out << ",mean_delta_j_over_j1,std_delta_j_over_j1";
    out << '\n';
    for (const SweepRecord& r : result.records) {
        out << to_string(r.method) << ',' << r.rank << ',' << r.dataset_size << ','
            << format_double(r.j1) << ',' << format_double(r.stats.mean) << ','
            << format_double(r.stats.stddev) << ',' << r.stats.count;
        if (normalized)
            out << ',' << format_double(r.stats.mean / r.j1) << ','
                << format_double(r.stats.stddev / r.j1);
        out << '\n';
    }
}

void write_raw_csv(const ExperimentConfig& cfg, const FigureResult& result, const fs::path& dir) {
    std::ofstream out(dir / (std::string(to_string(cfg.figure)) + "_raw.csv"));
    out << "method,rank,dataset_size,j1,rep,delta_j\n";
    for (const SweepRecord& r : result.records)
        for (std::size_t rep = 0; rep < r.raw.size(); ++rep)
            out << to_string(r.method) << ',' << r.rank << ',' << r.dataset_size << ','
                << format_double(r.j1) << ',' << rep << ',' << format_double(r.raw[rep]) << '\n';
}

void write_cdf_csv(const FigureResult& result, const fs::path& dir) {
    std::ofstream out(dir / "fig4_cdf.csv");
    out << "n,j1,instance,x,p_empirical,p_approx\n";
    for (const CdfTable& t : result.cdf_tables)
        for (std::size_t i = 0; i < t.points.size(); ++i)
            out << t.n << ',' << format_double(t.j1) << ',' << t.instance << ','
                << format_double(t.points[i].x) << ',' << format_double(t.points[i].p) << ','
                << format_double(t.approx[i]) << '\n';

    std::ofstream summary(dir / "fig4_summary.csv");
    summary << "n,j1,instances,mean_sup_distance,std_sup_distance\n";
    std::set<std::pair<int, double>> cells;
    for (const CdfTable& t : result.cdf_tables) cells.insert({t.n, t.j1});
    for (const auto& [n, j1] : cells) {
        std::vector<double> sups;
        for (const CdfTable& t : result.cdf_tables)
            if (t.n == n && t.j1 == j1) sups.push_back(t.sup_distance);
        const SweepCellStats s = stats_of(sups);
        summary << n << ',' << format_double(j1) << ',' << s.count << ','
                << format_double(s.mean) << ',' << format_double(s.stddev) << '\n';
    }
}

void write_config_json(const ExperimentConfig& cfg, const FigureResult& result,
                       const fs::path& dir) {
    json doc;
    doc["figure"] = to_string(cfg.figure);
    doc["dims"] = cfg.dims;
    doc["j0"] = cfg.j0;
    doc["j1_values"] = cfg.j1_values;
    doc["dataset_sizes"] = cfg.dataset_sizes;
    doc["ranks"] = cfg.ranks;
    doc["repetitions"] = cfg.repetitions;
    doc["alpha"] = cfg.alpha;
    doc["master_seed"] = cfg.master_seed;
    doc["threads"] = cfg.threads;
    doc["train"] = {{"learning_rate", cfg.train.learning_rate},
                    {"epochs", cfg.train.epochs},
                    {"eval_interval", cfg.train.eval_interval},
                    {"beta1", cfg.train.beta1},
                    {"beta2", cfg.train.beta2},
                    {"eps", cfg.train.eps},
                    {"weight_decay", cfg.train.weight_decay}};
    if (cfg.instance_path) doc["instance_path"] = *cfg.instance_path;
    json checks = json::array();
    for (const AssertionResult& a : result.assertions)
        checks.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    doc["assertions"] = checks;
    std::ofstream out(dir / (std::string(to_string(cfg.figure)) + "_config.json"));
    out << doc.dump(2) << '\n';
}

void write_kstar_csv(const FigureResult& result, const fs::path& dir) {
    std::ofstream out(dir / "fig5_kstar.csv");
    out << "n,alpha,r,k_star,branch\n";
    for (const KStarRecord& k : result.rank_predictions)
        out << k.n << ',' << format_double(k.alpha) << ',' << format_double(k.prediction.r) << ','
            << format_double(k.prediction.k_star) << ',' << to_string(k.prediction.branch) << '\n';
}

void write_instances(const ExperimentConfig& cfg, const fs::path& dir) {
    if (cfg.instance_path || cfg.figure == Figure::fig4) return;
    const std::uint64_t instance_seed = seed_schedule(
        cfg.master_seed,
        std::array<std::uint64_t, 2>{static_cast<std::uint64_t>(cfg.figure), kInstanceTag});
    for (const double j1 : cfg.j1_values) {
        const IsingModel model = generate_sk({cfg.dims.front(), cfg.j0, j1, instance_seed});
        save_model(model, (dir / ("instance_j1_" + format_double(j1) + ".json")).string());
    }
}

}  // namespace

const char* to_string(Figure f) {
    switch (f) {
        case Figure::fig1: return "fig1";
        case Figure::fig2: return "fig2";
        case Figure::fig3: return "fig3";
        case Figure::fig4: return "fig4";
        case Figure::fig5: return "fig5";
    }
    return "?";
}

const char* to_string(InitMethod m) {
    switch (m) {
        case InitMethod::low_rank_pos: return "low_rank_pos";
        case InitMethod::low_rank_neg: return "low_rank_neg";
        case InitMethod::energy_pos: return "energy_pos";
        case InitMethod::energy_neg: return "energy_neg";
        case InitMethod::coupling_pos: return "coupling_pos";
        case InitMethod::coupling_neg: return "coupling_neg";
    }
    return "?";
}

bool FigureResult::all_passed() const {
    for (const AssertionResult& a : assertions)
        if (!a.passed) return false;
    return true;
}

std::uint64_t seed_schedule(std::uint64_t master_seed,
                            std::span<const std::uint64_t> coordinates) {
    std::uint64_t h = splitmix64(master_seed ^ 0x5eedc0de5eedc0deULL);
    for (const std::uint64_t c : coordinates) h = hash_combine(h, c);
    return h;
}

FigureResult run_fig1(const ExperimentConfig& cfg) { return run_fig1_impl(cfg); }
FigureResult run_fig2(const ExperimentConfig& cfg) { return run_fig2_impl(cfg); }
FigureResult run_fig3(const ExperimentConfig& cfg) { return run_fig3_impl(cfg); }
FigureResult run_fig4(const ExperimentConfig& cfg) { return run_fig4_impl(cfg); }
FigureResult run_fig5(const ExperimentConfig& cfg) { return run_fig5_impl(cfg); }

FigureResult run_figure(const ExperimentConfig& cfg) {
    switch (cfg.figure) {
        case Figure::fig1: return run_fig1(cfg);
        case Figure::fig2: return run_fig2(cfg);
        case Figure::fig3: return run_fig3(cfg);
        case Figure::fig4: return run_fig4(cfg);
        case Figure::fig5: return run_fig5(cfg);
    }
    throw std::logic_error("unknown figure");
}

void write_outputs(const ExperimentConfig& cfg, const FigureResult& result) {
    if (cfg.output_path.empty()) return;
    const fs::path dir(cfg.output_path);
    fs::create_directories(dir);
    write_config_json(cfg, result, dir);
    if (cfg.figure == Figure::fig4) {
        write_cdf_csv(result, dir);
    } else {
        write_summary_csv(cfg, result, dir);
        write_raw_csv(cfg, result, dir);
        write_instances(cfg, dir);
    }
    if (cfg.figure == Figure::fig5) write_kstar_csv(result, dir);
}

}  // namespace fmising
