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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include "beamlearn/beamlearn.hpp"
#include "test_support.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

using namespace beamlearn;
namespace bt = beamlearn::oracle;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::vector<Sample> random_batch(int size, int antennas, std::mt19937_64& rng) {
    return compute_labels(bt::random_channels(size, antennas, rng));
}

void gradient_check() {
    const auto start = Clock::now();
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> pick_m(1, 8), pick_n(1, 4), pick_b(1, 4);
    int checked = 0, skipped = 0;
    double worst = 0.0;
    while (checked < 200) {
        const int m = pick_m(rng), n = pick_n(rng), b = pick_b(rng);
        const auto theta = bt::random_phases(m, n, rng);
        const auto batch = random_batch(b, m, rng);
        bool near_tie = false;
        for (const auto& s : batch)
            near_tie = near_tie || bt::top_two_gap(theta.phases(), s.channel) < 1e-4;
        if (near_tie) {
            ++skipped;
            continue;
        }
        const auto analytic = loss_gradient(theta, batch);
        const auto numeric = bt::finite_difference_gradient(theta.phases(), batch, 1e-6);
        const double scale = std::max(numeric.cwiseAbs().maxCoeff(), 1e-8);
        worst = std::max(worst, (analytic - numeric).cwiseAbs().maxCoeff() / scale);
        ++checked;
    }
    const double elapsed = seconds_since(start);
    report(1, "gradient matches central differences", worst < 1e-5 && elapsed < 10.0,
           fmt("%d instances (%d near-tie skipped), max rel err %.3e, %.2f s", checked, skipped, worst, elapsed));
}

void masking_check() {
    std::mt19937_64 rng(102);
    int instances = 0;
    bool ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        const int m = 1 + trial % 8, n = 2 + trial % 7;
        const auto theta = bt::random_phases(m, n, rng);
        const auto batch = random_batch(1 + trial % 4, m, rng);
        std::vector<bool> winner(static_cast<std::size_t>(n), false);
        const auto w = to_complex(theta);
        for (const auto& s : batch)
            winner[static_cast<std::size_t>(forward(w, s.channel).best_index)] = true;
        const auto grad = loss_gradient(theta, batch);
        for (int col = 0; col < n; ++col)
            if (!winner[static_cast<std::size_t>(col)])
                for (int row = 0; row < m; ++row)
                    ok = ok && grad(row, col) == 0.0;
        ++instances;
    }
    report(2, "non-selected beams receive exactly zero gradient", ok, fmt("%d instances", instances));
}

void modulus_check() {
    std::mt19937_64 rng(103);
    const int m = 16, n = 4;
    const auto data = random_batch(64, m, rng);
    auto theta = init_codebook(m, n, InitStrategy::UniformRandom, rng);
    OptimizerState state;
    const OptimizerConfig opt;
    const double target = 1.0 / std::sqrt(double(m));
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
        const std::span<const Sample> batch(data.data() + (s % 8) * 8, 8);
        auto next = step(theta, loss_gradient(theta, batch), state, opt);
        theta = std::move(next.codebook);
        state = std::move(next.state);
        worst = std::max(worst, (to_complex(theta).weights().cwiseAbs().array() - target).abs().maxCoeff());
    }
    report(3, "constant modulus after every step", worst <= 1e-12, fmt("1000 steps, max deviation %.3e", worst));
}

void single_channel_check() {
    const auto start = Clock::now();
    std::mt19937_64 rng(104);
    const ChannelDataset ds({bt::random_channel(32, rng)});
    TrainConfig tc;
    tc.batch_size = 1;
    tc.num_epochs = 2000;
    tc.init = InitStrategy::UniformRandom;
    tc.rng_seed = 4;
    const auto result = train(ds, 1, tc);
    const double gain = forward(to_complex(result.codebook), ds[0].channel).best_gain;
    const double fraction = gain / ds[0].label;
    const double elapsed = seconds_since(start);
    report(4, "single channel reaches the EGC label", fraction >= 0.99 && elapsed < 30.0,
           fmt("N=1 M=32, %lld steps, gain/label %.6f, %.2f s", static_cast<long long>(result.steps_run), fraction,
               elapsed));
}

ScenarioConfig los_scenario(double lo_deg, double hi_deg, std::uint64_t seed) {
    ScenarioConfig sc;
    sc.array = {32, 0.5};
    sc.num_paths = 1;
    sc.num_users = 2000;
    sc.rng_seed = seed;
    sc.aoa.sector_lo = deg_to_rad(lo_deg);
    sc.aoa.sector_hi = deg_to_rad(hi_deg);
    sc.gain.kind = GainDistribution::Kind::Fixed;
    sc.gain.fixed = {Complex(1.0, 0.0)};
    return sc;
}

struct LosRun {
    double learned = 0.0, dft = 0.0, bound = 0.0;
    PhaseCodebook codebook;
    std::vector<ChannelVector> test;
};

LosRun los_run(double lo_deg, double hi_deg, std::uint64_t seed) {
    const ChannelDataset ds(generate_population(los_scenario(lo_deg, hi_deg, seed)));
    const auto parts = split(ds, 0.7, seed);
    TrainConfig tc;
    tc.rng_seed = seed;
    LosRun run;
    run.test = parts.test.channels();
    run.codebook = train(parts.train, run.test, 16, tc).codebook;
    run.learned = population_gain(to_complex(run.codebook), run.test);
    run.dft = population_gain(to_complex(dft_codebook(32, 16)), run.test);
    run.bound = egc_upper_bound(run.test);
    return run;
}

std::vector<LosRun> los_checks() {
    const auto start = Clock::now();
    std::vector<LosRun> runs;
    bool ok = true;
    std::string detail = "M=32 N=16, sector [30,90] deg:";
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        runs.push_back(los_run(30.0, 90.0, seed));
        const auto& r = runs.back();
        ok = ok && r.learned >= 0.90 * r.bound && r.learned > r.dft;
        detail += fmt(" seed %d learned %.4f dft %.4f of bound;", int(seed), r.learned / r.bound, r.dft / r.bound);
    }
    const double elapsed = seconds_since(start);
    report(5, "LOS sector learned >= 90% of EGC and beats DFT-16", ok && elapsed < 300.0,
           detail + fmt(" %.1f s", elapsed));

    const auto broadside = los_run(-30.0, 30.0, 1);
    std::printf("[INFO] LOS broadside sector [-30,30] deg, seed 1: learned %.4f dft %.4f of bound\n",
                broadside.learned / broadside.bound, broadside.dft / broadside.bound);
    return runs;
}

void nlos_check() {
    const auto start = Clock::now();
    bool ok = true;
    int max_lobes = 0;
    std::string detail = "M=64 N=16 L=3 clustered:";
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        ScenarioConfig sc;
        sc.array = {64, 0.5};
        sc.num_paths = 3;
        sc.num_users = 2000;
        sc.rng_seed = seed;
        sc.aoa.kind = AoaDistribution::Kind::Clusters;
        for (double c : {-40.0, 5.0, 35.0})
            sc.aoa.clusters.emplace_back(deg_to_rad(c - 2.0), deg_to_rad(c + 2.0));
        sc.gain.kind = GainDistribution::Kind::RandomPhase;
        const ChannelDataset ds(generate_population(sc));
        const auto parts = split(ds, 0.7, seed);
        const auto test = parts.test.channels();
        TrainConfig tc;
        tc.num_epochs = 60;
        tc.rng_seed = seed;
        const auto learned_cb = train(parts.train, test, 16, tc).codebook;
        const double learned = population_gain(to_complex(learned_cb), test);
        const double dft = population_gain(to_complex(dft_codebook(64, 64)), test);
        const double bound = egc_upper_bound(test);
        ok = ok && learned >= dft;

        // patterns go through the exported CSV
        const auto w = to_complex(learned_cb);
        const auto grid = angle_grid();
        int seed_lobes = 0;
        for (int n = 0; n < 16; ++n) {
            std::stringstream csv;
            write_pattern_csv(csv, beam_pattern(w.beam(n), sc.array, grid));
            std::vector<PatternPoint> pattern;
            std::string line;
            std::getline(csv, line);
            while (std::getline(csv, line)) {
                const auto comma = line.find(',');
                pattern.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
            }
            seed_lobes = std::max(seed_lobes, static_cast<int>(pattern_lobes(pattern, 0.5).size()));
        }
        max_lobes = std::max(max_lobes, seed_lobes);
        detail += fmt(" seed %d learned %.4f dft64 %.4f of bound, most lobes %d;", int(seed), learned / bound,
                      dft / bound, seed_lobes);
    }
    const double elapsed = seconds_since(start);
    report(6, "NLOS learned-16 matches DFT-64 with a multi-lobe beam", ok && max_lobes >= 2 && elapsed < 600.0,
           detail + fmt(" %.1f s", elapsed));
}

void quantization_check(const std::vector<LosRun>& runs) {
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        const double g3 = population_gain(to_complex(quantize(r.codebook, {3})), r.test) / r.learned;
        const double g16 = population_gain(to_complex(quantize(r.codebook, {16})), r.test) / r.learned;
        ok = ok && g3 >= 0.85 && g16 >= 0.999;
        detail += fmt(" seed %d: 3-bit %.4f 16-bit %.6f;", int(i + 1), g3, g16);
    }
    report(7, "post-training quantization retains gain", ok, "retained fraction" + detail);
}

void brute_force_check() {
    std::mt19937_64 rng(108);
    double worst_forward = 0.0, worst_population = 0.0;
    bool index_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const int m = 1 + trial % 16, n = 1 + trial % 9;
        const auto theta = bt::random_phases(m, n, rng);
        const auto w = to_complex(theta);
        const auto channels = bt::random_channels(1 + trial % 5, m, rng);
        double sum = 0.0;
        for (const auto& h : channels) {
            int index = -1;
            const double expected = bt::brute_best_gain(theta.phases(), h, &index);
            const auto r = forward(w, h);
            worst_forward = std::max(worst_forward, std::abs(r.best_gain - expected) / std::max(1.0, expected));
            index_ok = index_ok && r.best_index == index;
            sum += expected;
        }
        const double expected_mean = sum / static_cast<double>(channels.size());
        worst_population = std::max(worst_population,
                                    std::abs(population_gain(w, channels) - expected_mean) / std::max(1.0, expected_mean));
    }
    report(8, "forward and population gain match brute-force loops",
           worst_forward <= 1e-12 && worst_population <= 1e-12 && index_ok,
           fmt("1000 instances, max err forward %.3e population %.3e", worst_forward, worst_population));
}

struct RunArtifacts {
    std::string codebook, report, comparison;
};

RunArtifacts deterministic_run() {
    auto sc = los_scenario(30.0, 90.0, 9);
    sc.num_users = 400;
    std::ostringstream data;
    write_dataset(data, ChannelDataset(generate_population(sc)));
    std::istringstream data_in(data.str());
    const auto ds = read_dataset(data_in);
    const auto parts = split(ds, 0.7, 9);
    TrainConfig tc;
    tc.num_epochs = 20;
    tc.rng_seed = 9;
    const auto result = train(parts.train, parts.test, 8, tc);
    RunArtifacts out;
    std::ostringstream cb, rep, cmp;
    write_codebook(cb, result.codebook);
    write_report_csv(rep, result);
    EvalConfig ev;
    ev.codebook_sizes = {4, 8};
    ev.quantizer_bits = {3};
    tc.num_epochs = 5;
    write_comparison_csv(cmp, compare(ds, ev, tc));
    return {data.str() + cb.str(), rep.str(), cmp.str()};
}

void determinism_check() {
    const auto a = deterministic_run();
    const auto b = deterministic_run();
    report(9, "identical seeds give identical files", a.codebook == b.codebook && a.report == b.report &&
                                                           a.comparison == b.comparison,
           fmt("dataset+codebook %zu bytes, report %zu bytes, comparison %zu bytes", a.codebook.size(), a.report.size(),
               a.comparison.size()));
}

} // namespace

int main() {
    try {
        gradient_check();
        masking_check();
        modulus_check();
        single_channel_check();
        const auto los = los_checks();
        nlos_check();
        quantization_check(los);
        brute_force_check();
        determinism_check();
    } catch (const std::exception& e) {
        std::printf("[FAIL] acceptance aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
