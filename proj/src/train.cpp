#include "fmising/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace fmising {

namespace {

constexpr double kDivergenceCap = 1e12;

void validate(const FmParams& p0, const Dataset& data, const IsingModel& model,
              const TrainConfig& cfg) {
    if (data.size() == 0) throw std::invalid_argument("train: dataset is empty");
    if (p0.n != model.n) throw std::invalid_argument("train: FM and model dimensions differ");
    for (const SpinConfig& x : data.configs)
        if (x.size() != p0.n) throw std::invalid_argument("train: dataset dimension mismatch");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("train: learning rate must be positive");
    if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be positive");
    if (cfg.eval_interval < 1 || cfg.eval_interval > cfg.epochs)
        throw std::invalid_argument("train: eval_interval must be in [1, epochs]");
    if (!(cfg.beta1 > 0.0 && cfg.beta1 < 1.0 && cfg.beta2 > 0.0 && cfg.beta2 < 1.0))
        throw std::invalid_argument("train: betas must lie in (0, 1)");
    if (!(cfg.eps > 0.0)) throw std::invalid_argument("train: eps must be positive");
    if (cfg.weight_decay < 0.0) throw std::invalid_argument("train: weight decay must be nonnegative");
}

// Adds the gradient of (f(x)-y)^2, scaled by 1/D, into the flat buffer
// laid out as [w0 | w | v]. Returns the squared residual.
double accumulate_grad(const FmParams& p, const SpinConfig& x, double y, double inv_d,
                       std::vector<double>& g, std::vector<double>& q) {
    const double s = sign_factor(p.sign);
    double acc = p.w0;
    for (int i = 0; i < p.n; ++i) acc += p.w[static_cast<std::size_t>(i)] * x[i];
    double pair = 0.0;
    for (int kk = 0; kk < p.k; ++kk) {
        double qk = 0.0;
        double sum_sq = 0.0;
        for (int i = 0; i < p.n; ++i) {
            const double vik = p.vat(i, kk);
            qk += vik * x[i];
            sum_sq += vik * vik;
        }
        q[static_cast<std::size_t>(kk)] = qk;
        pair += qk * qk - sum_sq;
    }
    const double residual = s * (acc + 0.5 * pair) - y;
    const double scale = 2.0 * residual * s * inv_d;

    g[0] += scale;
    double* gw = g.data() + 1;
    double* gv = g.data() + 1 + p.n;
    for (int i = 0; i < p.n; ++i) gw[i] += scale * x[i];
    for (int i = 0; i < p.n; ++i) {
        const double xi = x[i];
        const double* vi = p.v.data() + static_cast<std::size_t>(i) * p.k;
        double* gvi = gv + static_cast<std::size_t>(i) * p.k;
        for (int kk = 0; kk < p.k; ++kk)
            gvi[kk] += scale * xi * (q[static_cast<std::size_t>(kk)] - vi[kk] * xi);
    }
    return residual * residual;
}

}  // namespace

DivergenceError::DivergenceError(int at_epoch, double loss_value)
    : std::runtime_error("training diverged at epoch " + std::to_string(at_epoch) +
                         " (loss = " + std::to_string(loss_value) + ")"),
      epoch_(at_epoch) {}

double mse_loss(const FmParams& p, const Dataset& data) {
    if (data.size() == 0) throw std::invalid_argument("mse_loss: dataset is empty");
    double acc = 0.0;
    for (std::size_t d = 0; d < data.size(); ++d) {
        const double r = forward(p, data.configs[d]) - data.energies[d];
        acc += r * r;
    }
    return acc / static_cast<double>(data.size());
}

TrainResult train(const FmParams& p0, const Dataset& data, const IsingModel& model,
                  const TrainConfig& cfg, std::uint64_t /*seed*/) {
    validate(p0, data, model, cfg);

    FmParams p = p0;
    const std::size_t n_params = 1 + static_cast<std::size_t>(p.n) +
                                 static_cast<std::size_t>(p.n) * p.k;
    std::vector<double> g(n_params, 0.0);
    std::vector<double> m1(n_params, 0.0);
    std::vector<double> m2(n_params, 0.0);
    std::vector<double> q(static_cast<std::size_t>(p.k), 0.0);
    const double inv_d = 1.0 / static_cast<double>(data.size());

    TrainResult result;
    double best = std::numeric_limits<double>::infinity();
    const auto record = [&](int epoch, double loss) {
        const double dj = coupling_error(model, p);
        result.error_trace.push_back({epoch, dj, loss});
        if (dj < best) {
            best = dj;
            result.best_params = p;
        }
    };

    double loss = mse_loss(p, data);
    record(0, loss);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::fill(g.begin(), g.end(), 0.0);
        loss = 0.0;
        for (std::size_t d = 0; d < data.size(); ++d)
            loss += accumulate_grad(p, data.configs[d], data.energies[d], inv_d, g, q);
        loss *= inv_d;
        if (!std::isfinite(loss) || loss > kDivergenceCap) throw DivergenceError(epoch, loss);

        const double bc1 = 1.0 - std::pow(cfg.beta1, epoch);
        const double bc2 = 1.0 - std::pow(cfg.beta2, epoch);
        const auto step = [&](double& theta, std::size_t idx) {
            m1[idx] = cfg.beta1 * m1[idx] + (1.0 - cfg.beta1) * g[idx];
            m2[idx] = cfg.beta2 * m2[idx] + (1.0 - cfg.beta2) * g[idx] * g[idx];
            const double update = (m1[idx] / bc1) / (std::sqrt(m2[idx] / bc2) + cfg.eps);
            theta -= cfg.learning_rate * (update + cfg.weight_decay * theta);
        };
        std::size_t idx = 0;
        step(p.w0, idx++);
        for (int i = 0; i < p.n; ++i) step(p.w[static_cast<std::size_t>(i)], idx++);
        for (double& value : p.v) step(value, idx++);

        if (epoch % cfg.eval_interval == 0) {
            const double eval_loss = mse_loss(p, data);
            if (!std::isfinite(eval_loss) || eval_loss > kDivergenceCap)
                throw DivergenceError(epoch, eval_loss);
            record(epoch, eval_loss);
        }
    }

    result.best_coupling_error = best;
    result.final_loss = mse_loss(p, data);
    return result;
}

void write_trace_csv(const TrainResult& result, std::ostream& out) {
    out << "epoch,loss,coupling_error\n";
    for (const TracePoint& point : result.error_trace)
        out << point.epoch << ',' << point.loss << ',' << point.coupling_error << '\n';
}

}  // namespace fmising
