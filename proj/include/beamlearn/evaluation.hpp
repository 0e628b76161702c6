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

#ifndef BEAMLEARN_EVALUATION_HPP
#define BEAMLEARN_EVALUATION_HPP

#include "beamlearn/codebook.hpp"
#include "beamlearn/dataset.hpp"
#include "beamlearn/error.hpp"
#include "beamlearn/forward.hpp"
#include "beamlearn/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace beamlearn {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Mean EGC gain ||h||_1^2 / M over the set.
inline double egc_upper_bound(std::span<const ChannelVector> channels) {
    detail::require_dims(!channels.empty(), "egc_upper_bound: empty channel list");
    double sum = 0.0;
    for (const auto& h : channels)
        sum += egc_gain(h);
    return sum / static_cast<double>(channels.size());
}

/// Mean over users of log2(1 + snr * gain_scale * g_u), where g_u is a per-user
/// gain. `gain_scale` is the normalization factor Delta when the gains were
/// measured on normalized channels, so the SNR refers to raw channel power.
inline double mean_rate(std::span<const double> gains, double snr_db, double gain_scale = 1.0) {
    detail::require_dims(!gains.empty(), "achievable_rate: no users");
    const double snr = db_to_linear(snr_db);
    double sum = 0.0;
    for (double g : gains)
        sum += std::log2(1.0 + snr * gain_scale * g);
    return sum / static_cast<double>(gains.size());
}

inline double achievable_rate(const ComplexCodebook& w, std::span<const ChannelVector> channels, double snr_db,
                              double gain_scale = 1.0) {
    const auto gains = best_gains(w, channels);
    return mean_rate(gains, snr_db, gain_scale);
}

inline double achievable_rate(const ComplexCodebook& w, const ChannelDataset& ds, double snr_db) {
    const auto channels = ds.channels();
    return achievable_rate(w, channels, snr_db, ds.normalization_factor());
}

/// Rate reached by per-user EGC beams.
inline double egc_rate(std::span<const ChannelVector> channels, double snr_db, double gain_scale = 1.0) {
    std::vector<double> gains;
    gains.reserve(channels.size());
    for (const auto& h : channels)
        gains.push_back(egc_gain(h));
    return mean_rate(gains, snr_db, gain_scale);
}

struct EvalConfig {
    std::vector<double> snr_db{0.0, 5.0};
    std::vector<int> codebook_sizes{16};
    std::vector<int> quantizer_bits; // empty: no quantized rows
    double train_fraction = 0.7;
    std::uint64_t split_seed = 0;
    double antenna_spacing = 0.5; // for the DFT baseline

    void validate() const {
        detail::require(!snr_db.empty(), "EvalConfig: snr list is empty");
        detail::require(!codebook_sizes.empty(), "EvalConfig: codebook size list is empty");
        for (int n : codebook_sizes)
            detail::require(n >= 1, "EvalConfig: codebook sizes must be >= 1");
        for (int b : quantizer_bits)
            QuantizerSpec{b}.validate();
        detail::require(train_fraction > 0.0 && train_fraction < 1.0, "EvalConfig: train_fraction must be in (0, 1)");
        detail::require(antenna_spacing > 0.0, "EvalConfig: antenna_spacing must be > 0");
    }
};

struct ComparisonRow {
    std::string codebook; // "learned", "dft" or "egc"
    int beams = 0;        // 0 for the EGC row (one beam per user)
    std::optional<int> bits;
    double mean_gain = 0.0;      // on normalized channels
    double gain_fraction = 0.0;  // mean_gain / EGC bound
    std::vector<double> rate;    // per EvalConfig::snr_db
    std::vector<double> rate_fraction;
};

struct ComparisonReport {
    std::vector<double> snr_db;
    double egc_bound = 0.0;
    double normalization_factor = 1.0;
    std::size_t test_users = 0;
    std::vector<ComparisonRow> rows;
};

namespace detail {

inline ComparisonRow evaluate_row(std::string name, int beams, std::optional<int> bits, const PhaseCodebook& theta,
                                  std::span<const ChannelVector> test, double bound, std::span<const double> egc_rates,
                                  std::span<const double> snr_db, double gain_scale) {
    ComparisonRow row;
    row.codebook = std::move(name);
    row.beams = beams;
    row.bits = bits;
    const auto gains = best_gains(to_complex(theta), test);
    double sum = 0.0;
    for (double g : gains)
        sum += g;
    row.mean_gain = sum / static_cast<double>(gains.size());
    row.gain_fraction = row.mean_gain / bound;
    for (std::size_t i = 0; i < snr_db.size(); ++i) {
        row.rate.push_back(mean_rate(gains, snr_db[i], gain_scale));
        row.rate_fraction.push_back(row.rate.back() / egc_rates[i]);
    }
    return row;
}

} // namespace detail

/// Learned vs DFT codebooks on the held-out split for every requested size,
/// plus post-training quantized variants of each learned codebook and the EGC
/// bound row. The split normalizes both parts with the train-part Delta.
inline ComparisonReport compare(const ChannelDataset& dataset, const EvalConfig& eval_cfg, const TrainConfig& train_cfg) {
    eval_cfg.validate();
    train_cfg.validate();
    const auto parts = split(dataset, eval_cfg.train_fraction, eval_cfg.split_seed);
    const auto test = parts.test.channels();
    const double scale = parts.test.normalization_factor();

    ComparisonReport report;
    report.snr_db = eval_cfg.snr_db;
    report.egc_bound = egc_upper_bound(test);
    report.normalization_factor = scale;
    report.test_users = test.size();

    std::vector<double> egc_rates;
    for (double snr : eval_cfg.snr_db)
        egc_rates.push_back(egc_rate(test, snr, scale));

    for (int n : eval_cfg.codebook_sizes) {
        TrainConfig tc = train_cfg;
        tc.quantize_bits.reset();
        const auto trained = train(parts.train, test, n, tc);
        report.rows.push_back(detail::evaluate_row("learned", n, std::nullopt, trained.codebook, test, report.egc_bound,
                                                   egc_rates, eval_cfg.snr_db, scale));
        for (int b : eval_cfg.quantizer_bits)
            report.rows.push_back(detail::evaluate_row("learned", n, b, quantize(trained.codebook, QuantizerSpec{b}), test,
                                                       report.egc_bound, egc_rates, eval_cfg.snr_db, scale));
        report.rows.push_back(detail::evaluate_row("dft", n, std::nullopt,
                                                   dft_codebook(dataset.antennas(), n, eval_cfg.antenna_spacing), test,
                                                   report.egc_bound, egc_rates, eval_cfg.snr_db, scale));
    }

    ComparisonRow egc;
    egc.codebook = "egc";
    egc.mean_gain = report.egc_bound;
    egc.gain_fraction = 1.0;
    egc.rate = egc_rates;
    egc.rate_fraction.assign(egc_rates.size(), 1.0);
    report.rows.push_back(std::move(egc));
    return report;
}

/// Long-format CSV, one line per (row, SNR):
///   codebook,beams,bits,mean_gain,gain_fraction,snr_db,rate,rate_fraction
inline void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
    out << "codebook,beams,bits,mean_gain,gain_fraction,snr_db,rate,rate_fraction\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < report.snr_db.size(); ++i) {
            out << row.codebook << ',' << row.beams << ',';
            if (row.bits)
                out << *row.bits;
            else
                out << "none";
            out << ',' << row.mean_gain << ',' << row.gain_fraction << ',' << report.snr_db[i] << ',' << row.rate[i] << ','
                << row.rate_fraction[i] << '\n';
        }
    }
}

inline void print_comparison_table(std::ostream& out, const ComparisonReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "test users: %zu   EGC bound (normalized gain): %.12g   delta: %.12g\n", report.test_users,
                  report.egc_bound, report.normalization_factor);
    out << buf;
    std::snprintf(buf, sizeof buf, "%-9s %6s %5s %18s %18s", "codebook", "beams", "bits", "mean_gain", "%bound");
    out << buf;
    for (double snr : report.snr_db) {
        std::snprintf(buf, sizeof buf, " %18s %18s", ("rate@" + std::to_string(static_cast<int>(std::lround(snr))) + "dB").c_str(),
                      "%bound");
        out << buf;
    }
    out << '\n';
    for (const auto& row : report.rows) {
        const std::string beams = row.beams > 0 ? std::to_string(row.beams) : "-";
        const std::string bits = row.bits ? std::to_string(*row.bits) : "-";
        std::snprintf(buf, sizeof buf, "%-9s %6s %5s %18.12g %17.12g%%", row.codebook.c_str(), beams.c_str(), bits.c_str(),
                      row.mean_gain, 100.0 * row.gain_fraction);
        out << buf;
        for (std::size_t i = 0; i < row.rate.size(); ++i) {
            std::snprintf(buf, sizeof buf, " %18.12g %17.12g%%", row.rate[i], 100.0 * row.rate_fraction[i]);
            out << buf;
        }
        out << '\n';
    }
}

} // namespace beamlearn

#endif // BEAMLEARN_EVALUATION_HPP
