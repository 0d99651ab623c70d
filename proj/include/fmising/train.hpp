#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "fmising/fm.hpp"
#include "fmising/init.hpp"
#include "fmising/ising.hpp"

namespace fmising {

/// Full-batch AdamW settings. Defaults follow the standard constants;
/// weight decay is off because the objective is to reproduce couplings.
struct TrainConfig {
    double learning_rate = 0.001;
    int epochs = 10000;
    int eval_interval = 100;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;
};

struct TracePoint {
    int epoch = 0;
    double coupling_error = 0.0;
    double loss = 0.0;
};

struct TrainResult {
    FmParams best_params;                 // checkpoint with the least coupling error
    double best_coupling_error = 0.0;     // min over error_trace
    std::vector<TracePoint> error_trace;  // entry 0 is the pre-training measurement
    double final_loss = 0.0;
};

/// Thrown when the training loss becomes non-finite or exceeds 1e12.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(int at_epoch, double loss_value);
    int epoch() const { return epoch_; }

private:
    int epoch_;
};

/// Mean squared residual over the dataset. Throws on an empty dataset.
double mse_loss(const FmParams& p, const Dataset& data);

/// Full-batch AdamW training. The coupling error against `model` is
/// measured at epoch 0 and every cfg.eval_interval epochs; the checkpoint
/// with the least error is returned. Deterministic for identical inputs;
/// `seed` is reserved for stochastic batch schedules and unused here.
TrainResult train(const FmParams& p0, const Dataset& data, const IsingModel& model,
                  const TrainConfig& cfg, std::uint64_t seed = 0);

/// Trace dump, one `epoch,loss,coupling_error` row per measurement.
void write_trace_csv(const TrainResult& result, std::ostream& out);

}  // namespace fmising
