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

// beamlearn command line front end.
//
//   beamlearn generate --scenario los.cfg --out channels.csv
//   beamlearn train    --data channels.csv --beams 16 --out-codebook cb.csv --report report.csv
//   beamlearn eval     --data channels.csv --codebook cb.csv --snr-db 0,5 [--bits 3]
//   beamlearn compare  --data channels.csv --beams 8,16 --snr-db 0,5 [--bits 3] [--out cmp.csv]
//   beamlearn pattern  --codebook cb.csv --beam 0 --out pattern.csv
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include "beamlearn/beamlearn.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace beamlearn;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// Writes through a temporary file and renames it into place, so a failed run
// never leaves a truncated artifact behind.
void write_file_atomically(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out)
            throw ParseError("cannot open '" + path + "' for writing");
        writer(out);
        out.flush();
        if (!out)
            throw ParseError("failed writing '" + path + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g%%", 100.0 * fraction);
    return buf;
}

struct GenerateArgs {
    std::string scenario;
    std::string out;
    std::optional<long long> seed;
    std::optional<int> users;
};

int run_generate(const GenerateArgs& a) {
    auto kv = KeyValueConfig::load(a.scenario);
    if (a.seed)
        kv.set("seed", std::to_string(*a.seed));
    if (a.users)
        kv.set("num_users", std::to_string(*a.users));
    const auto cfg = scenario_from_config(kv);
    const ChannelDataset ds(generate_population(cfg));
    write_file_atomically(a.out, [&](std::ostream& out) { write_dataset(out, ds); });
    std::cout << "wrote " << ds.size() << " channels, M = " << ds.antennas() << " -> " << a.out << '\n';
    return 0;
}

struct TrainArgs {
    std::string data;
    int beams = 0;
    std::string config;
    std::string out_codebook;
    std::string report;
    std::optional<long long> seed;
    std::optional<int> epochs;
    std::optional<double> learning_rate;
    std::optional<double> train_fraction;
};

struct RunSettings {
    TrainConfig train;
    double train_fraction = 0.7;
    std::uint64_t split_seed = 0;
};

// Training settings from an optional key-value file. Besides the TrainConfig
// keys, the file may set train_fraction and split_seed.
RunSettings load_settings(const std::string& path, std::optional<long long> seed, std::optional<int> epochs,
                          std::optional<double> lr, std::optional<double> fraction) {
    KeyValueConfig kv;
    if (!path.empty())
        kv = KeyValueConfig::load(path);
    if (seed)
        kv.set("seed", std::to_string(*seed));
    if (epochs)
        kv.set("epochs", std::to_string(*epochs));
    if (lr) {
        std::ostringstream s;
        s.precision(17);
        s << *lr;
        kv.set("learning_rate", s.str());
    }
    RunSettings out;
    out.train = train_config_from(kv);
    out.train_fraction = fraction ? *fraction : kv.get_double("train_fraction", 0.7);
    const auto split_seed = kv.get_int("split_seed", static_cast<long long>(out.train.rng_seed));
    if (split_seed < 0)
        throw ParseError("key 'split_seed': must be non-negative");
    out.split_seed = static_cast<std::uint64_t>(split_seed);
    kv.reject_unknown_keys();
    return out;
}

int run_train(const TrainArgs& a) {
    if (a.beams < 1)
        throw ConfigError("--beams must be >= 1");
    const auto settings = load_settings(a.config, a.seed, a.epochs, a.learning_rate, a.train_fraction);
    const auto raw = load_dataset(a.data);

    // tiny datasets (or fraction 1) train and monitor on everything
    const bool no_split = raw.size() < 2 || settings.train_fraction >= 1.0;
    const auto parts = no_split ? DatasetSplit{raw.is_normalized() ? raw : normalize(raw), {}}
                                : split(raw, settings.train_fraction, settings.split_seed);
    const auto& holdout = no_split ? parts.train : parts.test;

    const auto report = train(parts.train, holdout, a.beams, settings.train);
    write_file_atomically(a.out_codebook, [&](std::ostream& out) { write_codebook(out, report.codebook); });
    write_file_atomically(a.report, [&](std::ostream& out) { write_report_csv(out, report); });

    const auto channels = holdout.channels();
    const double gain = population_gain(to_complex(report.codebook), channels);
    const double bound = egc_upper_bound(channels);
    std::cout << "trained " << a.beams << " beams on " << parts.train.size() << " channels for " << report.epochs_run
              << " epochs (" << report.steps_run << " steps)\n";
    std::cout << "holdout mean gain: " << gain << " (normalized), EGC bound: " << bound << '\n';
    std::cout << "percent of EGC bound: " << percent(gain / bound) << '\n';
    return 0;
}

struct EvalArgs {
    std::string data;
    std::string codebook;
    std::vector<double> snr_db;
    std::optional<int> bits;
};

int run_eval(const EvalArgs& a) {
    const auto ds = load_dataset(a.data);
    auto theta = load_codebook(a.codebook);
    if (theta.antennas() != ds.antennas())
        throw DimensionError("codebook has M = " + std::to_string(theta.antennas()) + " but data has M = " +
                             std::to_string(ds.antennas()));
    if (a.bits)
        theta = quantize(theta, QuantizerSpec{*a.bits});
    const auto channels = ds.channels();
    const double scale = ds.normalization_factor();
    const auto gains = best_gains(to_complex(theta), channels);
    double sum = 0.0;
    for (double g : gains)
        sum += g;
    const double gain = sum / static_cast<double>(gains.size());
    const double bound = egc_upper_bound(channels);
    std::cout << "users: " << channels.size() << ", beams: " << theta.beams()
              << ", bits: " << (theta.quantized_bits() ? std::to_string(*theta.quantized_bits()) : "none") << '\n';
    std::cout << "mean gain: " << gain * scale << ", EGC bound: " << bound * scale << " (" << percent(gain / bound)
              << " of bound)\n";
    for (double snr : a.snr_db) {
        const double rate = mean_rate(gains, snr, scale);
        const double bound_rate = egc_rate(channels, snr, scale);
        std::cout << "snr " << snr << " dB: rate " << rate << " bit/s/Hz, EGC " << bound_rate << " ("
                  << percent(rate / bound_rate) << ")\n";
    }
    return 0;
}

struct CompareArgs {
    std::string data;
    std::vector<int> beams;
    std::vector<double> snr_db;
    std::vector<int> bits;
    std::string config;
    std::string out;
    std::optional<long long> seed;
    std::optional<int> epochs;
    std::optional<double> train_fraction;
    double spacing = 0.5;
};

int run_compare(const CompareArgs& a) {
    const auto settings = load_settings(a.config, a.seed, a.epochs, std::nullopt, a.train_fraction);
    const auto ds = load_dataset(a.data);
    EvalConfig eval;
    eval.snr_db = a.snr_db;
    eval.codebook_sizes = a.beams;
    eval.quantizer_bits = a.bits;
    eval.train_fraction = settings.train_fraction;
    eval.split_seed = settings.split_seed;
    eval.antenna_spacing = a.spacing;
    const auto report = compare(ds, eval, settings.train);
    if (!a.out.empty())
        write_file_atomically(a.out, [&](std::ostream& out) { write_comparison_csv(out, report); });
    print_comparison_table(std::cout, report);
    return 0;
}

struct PatternArgs {
    std::string codebook;
    int beam = 0;
    std::string out;
    double spacing = 0.5;
    double step_deg = 1.0;
};

int run_pattern(const PatternArgs& a) {
    const auto theta = load_codebook(a.codebook);
    if (a.beam < 0 || a.beam >= theta.beams())
        throw ConfigError("--beam " + std::to_string(a.beam) + " out of range [0, " + std::to_string(theta.beams()) + ")");
    const ArrayConfig array{theta.antennas(), a.spacing};
    array.validate();
    const auto grid = angle_grid(a.step_deg);
    const auto pattern = beam_pattern(to_complex(theta).beam(a.beam), array, grid);
    write_file_atomically(a.out, [&](std::ostream& out) { write_pattern_csv(out, pattern); });
    const auto peak = std::max_element(pattern.begin(), pattern.end(),
                                       [](const PatternPoint& x, const PatternPoint& y) { return x.gain < y.gain; });
    std::cout << "beam " << a.beam << ": peak gain " << peak->gain << " at " << rad_to_deg(peak->angle) << " deg, "
              << pattern_lobes(pattern).size() << " lobe(s) above half peak -> " << a.out << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::cout << std::setprecision(12);
    CLI::App app{"Learn and evaluate phase-shifter beamforming codebooks"};
    app.require_subcommand(1, 1);

    GenerateArgs gen;
    auto* generate = app.add_subcommand("generate", "Synthesize a channel dataset from a scenario config");
    generate->add_option("--scenario", gen.scenario, "Scenario config file")->required()->check(CLI::ExistingFile);
    generate->add_option("--out", gen.out, "Output channel CSV")->required();
    generate->add_option("--seed", gen.seed, "Override the scenario seed");
    generate->add_option("--users", gen.users, "Override the number of users");

    TrainArgs tr;
    auto* train_cmd = app.add_subcommand("train", "Train a codebook");
    train_cmd->add_option("--data", tr.data, "Channel CSV")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--beams", tr.beams, "Codebook size N")->required();
    train_cmd->add_option("--config", tr.config, "Training config file")->check(CLI::ExistingFile);
    train_cmd->add_option("--out-codebook", tr.out_codebook, "Output codebook file")->required();
    train_cmd->add_option("--report", tr.report, "Output per-epoch report CSV")->required();
    train_cmd->add_option("--seed", tr.seed, "Override the training seed");
    train_cmd->add_option("--epochs", tr.epochs, "Override the number of epochs");
    train_cmd->add_option("--lr", tr.learning_rate, "Override the learning rate");
    train_cmd->add_option("--train-fraction", tr.train_fraction, "Train split fraction (1 = no split)");

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a codebook on a dataset");
    eval_cmd->add_option("--data", ev.data, "Channel CSV")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--codebook", ev.codebook, "Codebook file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--snr-db", ev.snr_db, "Receive SNR points in dB")->required()->delimiter(',');
    eval_cmd->add_option("--bits", ev.bits, "Quantize phases to this many bits first")->check(CLI::Range(1, 16));

    CompareArgs cmp;
    auto* compare_cmd = app.add_subcommand("compare", "Compare learned, DFT and EGC codebooks");
    compare_cmd->add_option("--data", cmp.data, "Channel CSV")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--beams", cmp.beams, "Codebook sizes")->required()->delimiter(',');
    compare_cmd->add_option("--snr-db", cmp.snr_db, "Receive SNR points in dB")->required()->delimiter(',');
    compare_cmd->add_option("--bits", cmp.bits, "Quantizer bit widths for learned codebooks")->delimiter(',');
    compare_cmd->add_option("--config", cmp.config, "Training config file")->check(CLI::ExistingFile);
    compare_cmd->add_option("--out", cmp.out, "Output comparison CSV");
    compare_cmd->add_option("--seed", cmp.seed, "Override the training seed");
    compare_cmd->add_option("--epochs", cmp.epochs, "Override the number of epochs");
    compare_cmd->add_option("--train-fraction", cmp.train_fraction, "Train split fraction");
    compare_cmd->add_option("--spacing", cmp.spacing, "Antenna spacing in wavelengths for the DFT baseline");

    PatternArgs pat;
    auto* pattern_cmd = app.add_subcommand("pattern", "Export the angular gain pattern of one beam");
    pattern_cmd->add_option("--codebook", pat.codebook, "Codebook file")->required()->check(CLI::ExistingFile);
    pattern_cmd->add_option("--beam", pat.beam, "Beam index")->required();
    pattern_cmd->add_option("--out", pat.out, "Output pattern CSV")->required();
    pattern_cmd->add_option("--spacing", pat.spacing, "Antenna spacing in wavelengths");
    pattern_cmd->add_option("--step-deg", pat.step_deg, "Angle grid step in degrees");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (generate->parsed())
            return run_generate(gen);
        if (train_cmd->parsed())
            return run_train(tr);
        if (eval_cmd->parsed())
            return run_eval(ev);
        if (compare_cmd->parsed())
            return run_compare(cmp);
        if (pattern_cmd->parsed())
            return run_pattern(pat);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
