// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The beamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMLEARN_TRAINER_HPP
#define BEAMLEARN_TRAINER_HPP

#include "beamlearn/codebook.hpp"
#include "beamlearn/dataset.hpp"
#include "beamlearn/error.hpp"
#include "beamlearn/forward.hpp"
#include "beamlearn/kv_config.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace beamlearn {

/// L = (1/B) sum_b (g_b - p_b)^2
inline double mse_loss(std::span<const double> gains, std::span<const double> labels) {
    detail::require_dims(gains.size() == labels.size(), "mse_loss: gains and labels differ in length");
    detail::require_dims(!gains.empty(), "mse_loss: empty batch");
    double sum = 0.0;
    for (std::size_t b = 0; b < gains.size(); ++b) {
        const double r = gains[b] - labels[b];
        sum += r * r;
    }
    return sum / static_cast<double>(gains.size());
}

/// Contribution of one sample to the gradient of (g - p)^2. Only the column of
/// the winning beam is non-zero, so only that column is stored.
struct SampleGradient {
    int best_index = 0;
    double gain = 0.0;
    double residual = 0.0;  // g - p
    Eigen::VectorXd column; // d(g - p)^2 / d theta_{m, best_index}
};

/// With z_n = sum_m conj(w_mn) h_m and conj(w_mn) = exp(-j theta_mn)/sqrt(M):
///   dq_n/dtheta_mn = 2 Im(conj(z_n) conj(w_mn) h_m)
/// and the max routes the whole error to the lowest-index argmax beam.
inline SampleGradient sample_gradient(const ComplexCodebook& w, const Sample& sample) {
    const auto r = forward(w, sample.channel);
    SampleGradient out;
    out.best_index = r.best_index;
    out.gain = r.best_gain;
    out.residual = r.best_gain - sample.label;
    const Complex zc = std::conj(r.z[r.best_index]);
    const auto wcol = w.weights().col(r.best_index);
    out.column.resize(w.antennas());
    const double outer = 2.0 * out.residual;
    for (int m = 0; m < w.antennas(); ++m)
        out.column[m] = outer * 2.0 * (zc * std::conj(wcol[m]) * sample.channel[m]).imag();
    return out;
}

struct LossAndGradient {
    double loss = 0.0;
    Eigen::MatrixXd gradient;
};

/// Batch MSE and its gradient with respect to the phases, averaged with 1/B.
/// Per-sample contributions are added in batch order.
inline LossAndGradient loss_and_gradient(const PhaseCodebook& theta, std::span<const Sample> batch) {
    detail::require_dims(!batch.empty(), "loss_gradient: empty batch");
    const ComplexCodebook w(theta);
    LossAndGradient out;
    out.gradient = Eigen::MatrixXd::Zero(theta.antennas(), theta.beams());
    double sq = 0.0;
    for (const auto& s : batch) {
        detail::require_dims(s.channel.size() == theta.antennas(), "loss_gradient: channel length does not match codebook M");
        const auto g = sample_gradient(w, s);
        out.gradient.col(g.best_index) += g.column;
        sq += g.residual * g.residual;
    }
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    out.gradient *= inv_b;
    out.loss = sq * inv_b;
    return out;
}

inline Eigen::MatrixXd loss_gradient(const PhaseCodebook& theta, std::span<const Sample> batch) {
    return loss_and_gradient(theta, batch).gradient;
}

enum class OptimizerKind { GradientDescent, Adam };

inline OptimizerKind parse_optimizer(const std::string& name) {
    if (name == "gradient-descent" || name == "sgd")
        return OptimizerKind::GradientDescent;
    if (name == "adam" || name == "adaptive-moment")
        return OptimizerKind::Adam;
    throw ConfigError("unknown optimizer '" + name + "'");
}

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::Adam;
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    void validate() const {
        detail::require(std::isfinite(learning_rate) && learning_rate >= 0.0, "optimizer: learning_rate must be >= 0");
        detail::require(beta1 > 0.0 && beta1 < 1.0, "optimizer: beta1 must be in (0, 1)");
        detail::require(beta2 > 0.0 && beta2 < 1.0, "optimizer: beta2 must be in (0, 1)");
        detail::require(epsilon > 0.0, "optimizer: epsilon must be > 0");
    }
};

/// Moment estimates of the adaptive optimizer; unused by plain gradient descent.
struct OptimizerState {
    Eigen::MatrixXd first_moment;
    Eigen::MatrixXd second_moment;
    std::int64_t steps = 0;
};

struct StepResult {
    PhaseCodebook codebook;
    OptimizerState state;
};

/// One parameter update.
///   plain:    theta - lr * grad
///   adaptive: bias-corrected first/second moment update
inline StepResult step(const PhaseCodebook& theta, const Eigen::MatrixXd& gradient, const OptimizerState& state,
                       const OptimizerConfig& cfg) {
    detail::require_dims(gradient.rows() == theta.antennas() && gradient.cols() == theta.beams(),
                         "step: gradient shape does not match codebook");
    StepResult out{theta, state};
    auto& p = out.codebook.phases();
    if (cfg.kind == OptimizerKind::GradientDescent) {
        p -= cfg.learning_rate * gradient;
        ++out.state.steps;
        return out;
    }
    auto& m = out.state.first_moment;
    auto& v = out.state.second_moment;
    if (m.size() == 0) {
        m = Eigen::MatrixXd::Zero(gradient.rows(), gradient.cols());
        v = Eigen::MatrixXd::Zero(gradient.rows(), gradient.cols());
    }
    detail::require_dims(m.rows() == gradient.rows() && m.cols() == gradient.cols(), "step: optimizer state shape mismatch");
    ++out.state.steps;
    const auto t = static_cast<double>(out.state.steps);
    m = cfg.beta1 * m + (1.0 - cfg.beta1) * gradient;
    v = cfg.beta2 * v + (1.0 - cfg.beta2) * gradient.cwiseAbs2();
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);
    p.array() -= cfg.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + cfg.epsilon);
    return out;
}

enum class QuantizeMode {
    PostTraining, // train continuous phases, snap once at the end
    EachStep,     // forward and gradient on the snapped phases, latent phases stay continuous
};

struct TrainConfig {
    int batch_size = 32;
    int num_epochs = 100;
    OptimizerConfig optimizer;
    std::uint64_t rng_seed = 0;
    bool shuffle = true;
    InitStrategy init = InitStrategy::ChannelSample;
    double antenna_spacing = 0.5; // for dft-warm-start
    std::optional<int> quantize_bits;
    QuantizeMode quantize_mode = QuantizeMode::PostTraining;
    // stop when the epoch loss changed by less than 1e-6 (relative) over 10 epochs
    bool plateau_stop = false;

    void validate() const {
        detail::require(batch_size >= 1, "TrainConfig: batch_size must be >= 1");
        detail::require(num_epochs >= 1, "TrainConfig: num_epochs must be >= 1");
        optimizer.validate();
        if (quantize_bits)
            QuantizerSpec{*quantize_bits}.validate();
    }
};

struct TrainReport {
    std::vector<double> epoch_loss;   // mean per-sample squared error, measured before each step
    std::vector<double> holdout_gain; // mean best gain on the holdout set after each epoch
    PhaseCodebook initial_codebook;
    PhaseCodebook continuous_codebook; // final phases before any quantization
    PhaseCodebook codebook;            // final codebook (quantized if requested)
    int epochs_run = 0;
    std::int64_t steps_run = 0;
};

inline void write_report_csv(std::ostream& out, const TrainReport& report) {
    out << "epoch,loss,holdout_gain\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int e = 0; e < report.epochs_run; ++e)
        out << e + 1 << ',' << report.epoch_loss[static_cast<std::size_t>(e)] << ','
            << report.holdout_gain[static_cast<std::size_t>(e)] << '\n';
}

inline void save_report_csv(const std::string& path, const TrainReport& report) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open '" + path + "' for writing");
    write_report_csv(out, report);
    if (!out)
        throw ParseError("failed writing report to '" + path + "'");
}

/// Mini-batch training of an N-beam codebook.
///
/// One generator seeded from cfg.rng_seed drives initialization and then the
/// per-epoch shuffles. Each cycle runs forward + loss + gradient on the batch
/// and one optimizer step. `holdout` may be empty, in which case the epoch gain
/// is measured on the training set.
inline TrainReport train(const ChannelDataset& train_set, std::span<const ChannelVector> holdout, int beams,
                         const TrainConfig& cfg) {
    cfg.validate();
    detail::require(beams >= 1, "train: codebook size must be >= 1");
    detail::require(!train_set.empty(), "train: empty training set");
    const int antennas = train_set.antennas();
    for (const auto& h : holdout)
        detail::require_dims(h.size() == antennas, "train: holdout channel length does not match training set");

    std::mt19937_64 rng(cfg.rng_seed);
    const auto train_channels = train_set.channels();
    const std::span<const ChannelVector> monitor = holdout.empty() ? std::span<const ChannelVector>(train_channels) : holdout;

    TrainReport report;
    PhaseCodebook theta = init_codebook(antennas, beams, cfg.init, rng, train_channels, cfg.antenna_spacing);
    report.initial_codebook = theta;

    const bool each_step = cfg.quantize_bits && cfg.quantize_mode == QuantizeMode::EachStep;
    const auto effective = [&](const PhaseCodebook& p) {
        return each_step ? quantize(p, QuantizerSpec{*cfg.quantize_bits}) : p;
    };

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<Sample> batch;
    batch.reserve(static_cast<std::size_t>(cfg.batch_size));
    OptimizerState state;

    for (int epoch = 0; epoch < cfg.num_epochs; ++epoch) {
        if (cfg.shuffle)
            std::shuffle(order.begin(), order.end(), rng);
        double sq_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
            const auto stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            batch.clear();
            for (std::size_t i = start; i < stop; ++i)
                batch.push_back(train_set[order[i]]);
            const auto lg = loss_and_gradient(effective(theta), batch);
            sq_sum += lg.loss * static_cast<double>(batch.size());
            auto next = step(theta, lg.gradient, state, cfg.optimizer);
            theta = std::move(next.codebook);
            state = std::move(next.state);
        }
        report.epoch_loss.push_back(sq_sum / static_cast<double>(order.size()));
        report.holdout_gain.push_back(population_gain(to_complex(effective(theta)), monitor));
        ++report.epochs_run;

        if (cfg.plateau_stop && report.epochs_run > 10) {
            const double now = report.epoch_loss.back();
            const double before = report.epoch_loss[report.epoch_loss.size() - 11];
            const double scale = std::max(std::abs(before), std::numeric_limits<double>::min());
            if (std::abs(now - before) / scale < 1e-6)
                break;
        }
    }
    report.steps_run = state.steps;
    report.continuous_codebook = theta;
    report.codebook = cfg.quantize_bits ? quantize(theta, QuantizerSpec{*cfg.quantize_bits}) : theta;
    return report;
}

inline TrainReport train(const ChannelDataset& train_set, int beams, const TrainConfig& cfg) {
    return train(train_set, std::span<const ChannelVector>{}, beams, cfg);
}

inline TrainReport train(const ChannelDataset& train_set, const ChannelDataset& holdout, int beams, const TrainConfig& cfg) {
    const auto channels = holdout.channels();
    return train(train_set, std::span<const ChannelVector>(channels), beams, cfg);
}

/// Reads TrainConfig fields from `key = value` text; missing keys keep their defaults.
///
///   batch_size, epochs, learning_rate, optimizer (adam | gradient-descent),
///   beta1, beta2, epsilon, seed, shuffle, init (channel-sample | uniform-random |
///   dft-warm-start), antenna_spacing, quantize_bits, quantize_mode (post | each-step),
///   plateau_stop
inline TrainConfig train_config_from(const KeyValueConfig& kv, TrainConfig cfg = {}) {
    cfg.batch_size = static_cast<int>(kv.get_int("batch_size", cfg.batch_size));
    cfg.num_epochs = static_cast<int>(kv.get_int("epochs", cfg.num_epochs));
    cfg.optimizer.learning_rate = kv.get_double("learning_rate", cfg.optimizer.learning_rate);
    if (kv.contains("optimizer"))
        cfg.optimizer.kind = parse_optimizer(kv.get_string("optimizer", ""));
    cfg.optimizer.beta1 = kv.get_double("beta1", cfg.optimizer.beta1);
    cfg.optimizer.beta2 = kv.get_double("beta2", cfg.optimizer.beta2);
    cfg.optimizer.epsilon = kv.get_double("epsilon", cfg.optimizer.epsilon);
    const auto seed = kv.get_int("seed", static_cast<long long>(cfg.rng_seed));
    if (seed < 0)
        throw ParseError("key 'seed': must be non-negative");
    cfg.rng_seed = static_cast<std::uint64_t>(seed);
    cfg.shuffle = kv.get_bool("shuffle", cfg.shuffle);
    if (kv.contains("init"))
        cfg.init = parse_init_strategy(kv.get_string("init", ""));
    cfg.antenna_spacing = kv.get_double("antenna_spacing", cfg.antenna_spacing);
    if (kv.contains("quantize_bits"))
        cfg.quantize_bits = static_cast<int>(kv.get_int("quantize_bits", 0));
    if (kv.contains("quantize_mode")) {
        const auto mode = kv.get_string("quantize_mode", "");
        if (mode == "post")
            cfg.quantize_mode = QuantizeMode::PostTraining;
        else if (mode == "each-step")
            cfg.quantize_mode = QuantizeMode::EachStep;
        else
            throw ParseError("key 'quantize_mode': expected 'post' or 'each-step'");
    }
    cfg.plateau_stop = kv.get_bool("plateau_stop", cfg.plateau_stop);
    cfg.validate();
    return cfg;
}

} // namespace beamlearn

#endif // BEAMLEARN_TRAINER_HPP
