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

#include "beamlearn/evaluation.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace beamlearn;

TEST(EgcUpperBound, SinglePathChannels) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> angle(-M_PI / 2, M_PI / 2);
    std::normal_distribution<double> n(0.0, 1.0);
    const int m = 16;
    std::vector<ChannelVector> channels;
    double expected = 0.0;
    for (int u = 0; u < 50; ++u) {
        const Complex alpha(n(rng), n(rng));
        channels.push_back(alpha * array_response({m, 0.5}, angle(rng)));
        expected += std::norm(alpha) * m; // ||a||_1 = M
    }
    EXPECT_NEAR(egc_upper_bound(channels), expected / 50, 1e-9 * expected);
}

TEST(EgcUpperBound, ZeroChannelContributesNothing) {
    std::vector<ChannelVector> channels{ChannelVector::Zero(4), ChannelVector::Ones(4)};
    EXPECT_DOUBLE_EQ(egc_upper_bound(channels), 2.0); // (0 + 16/4) / 2
    EXPECT_THROW(egc_upper_bound(std::vector<ChannelVector>{}), DimensionError);
}

TEST(EgcUpperBound, BoundsEveryCodebook) {
    std::mt19937_64 rng(62);
    const auto channels = oracle::random_channels(40, 8, rng);
    const double bound = egc_upper_bound(channels);
    for (int trial = 0; trial < 50; ++trial)
        EXPECT_LE(population_gain(to_complex(oracle::random_phases(8, 1 + trial % 20, rng)), channels), bound + 1e-9);
}

TEST(AchievableRate, Examples) {
    const std::vector<double> zeros{0.0, 0.0, 0.0};
    EXPECT_EQ(mean_rate(zeros, 5.0), 0.0);
    EXPECT_DOUBLE_EQ(mean_rate(std::vector<double>{1.0}, 0.0), 1.0);
    EXPECT_DOUBLE_EQ(mean_rate(std::vector<double>{1.0}, 0.0, 3.0), 2.0); // log2(1 + 3)
}

TEST(AchievableRate, NestedCodebooksAreMonotone) {
    std::mt19937_64 rng(63);
    const auto channels = oracle::random_channels(100, 8, rng);
    const auto big = oracle::random_phases(8, 12, rng);
    double previous = 0.0;
    for (int n = 1; n <= 12; ++n) {
        const PhaseCodebook sub(big.phases().leftCols(n));
        const double rate = achievable_rate(to_complex(sub), channels, 5.0);
        EXPECT_GE(rate, previous);
        previous = rate;
    }
}

TEST(AchievableRate, MonotoneInSnrAndUsesGainScale) {
    std::mt19937_64 rng(64);
    const auto raw = ChannelDataset(oracle::random_channels(50, 8, rng));
    const auto ds = normalize(raw);
    const auto w = to_complex(oracle::random_phases(8, 4, rng));
    double previous = 0.0;
    for (double snr = -10; snr <= 20; snr += 2.5) {
        const double rate = achievable_rate(w, ds, snr);
        EXPECT_GT(rate, previous);
        previous = rate;
        // de-normalized rate on normalized data equals the raw-data rate
        EXPECT_NEAR(rate, achievable_rate(w, raw.channels(), snr), 1e-9 * rate);
    }
}

namespace {

ChannelDataset sector_dataset(int users, std::uint64_t seed) {
    ScenarioConfig sc;
    sc.array = {16, 0.5};
    sc.num_users = users;
    sc.rng_seed = seed;
    sc.aoa.sector_lo = deg_to_rad(20);
    sc.aoa.sector_hi = deg_to_rad(60);
    return ChannelDataset(generate_population(sc));
}

} // namespace

TEST(Compare, RowLayoutAndBoundInvariant) {
    const auto ds = sector_dataset(300, 1);
    EvalConfig ev;
    ev.codebook_sizes = {4, 8};
    ev.snr_db = {0.0, 5.0};
    ev.quantizer_bits = {3};
    TrainConfig tc;
    tc.num_epochs = 10;
    const auto report = compare(ds, ev, tc);
    ASSERT_EQ(report.rows.size(), 7u); // per size: learned, learned@3, dft; plus egc
    int learned = 0, dft = 0, egc = 0;
    for (const auto& row : report.rows) {
        learned += row.codebook == "learned" && !row.bits;
        dft += row.codebook == "dft";
        egc += row.codebook == "egc";
        EXPECT_LE(row.mean_gain, report.egc_bound + 1e-9);
        ASSERT_EQ(row.rate.size(), 2u);
        EXPECT_LT(row.rate[0], row.rate[1]);
    }
    EXPECT_EQ(learned, 2);
    EXPECT_EQ(dft, 2);
    EXPECT_EQ(egc, 1);
    EXPECT_EQ(report.test_users, 90u);

    std::ostringstream csv;
    write_comparison_csv(csv, report);
    std::istringstream in(csv.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "codebook,beams,bits,mean_gain,gain_fraction,snr_db,rate,rate_fraction");
    int lines = 0;
    while (std::getline(in, line))
        ++lines;
    EXPECT_EQ(lines, 14);

    std::ostringstream table;
    print_comparison_table(table, report);
    EXPECT_NE(table.str().find("egc"), std::string::npos);
}

TEST(Compare, LearnedBeatsDftOnSectorUsers) {
    const auto ds = sector_dataset(600, 2);
    EvalConfig ev;
    ev.codebook_sizes = {8};
    ev.snr_db = {5.0};
    TrainConfig tc;
    tc.num_epochs = 40;
    const auto report = compare(ds, ev, tc);
    double learned = 0.0, dft = 0.0;
    for (const auto& row : report.rows) {
        if (row.codebook == "learned")
            learned = row.mean_gain;
        if (row.codebook == "dft")
            dft = row.mean_gain;
    }
    EXPECT_GT(learned, dft);
}

TEST(Compare, SixteenBitRowMatchesUnquantized) {
    const auto ds = sector_dataset(300, 3);
    EvalConfig ev;
    ev.codebook_sizes = {6};
    ev.snr_db = {5.0};
    ev.quantizer_bits = {16};
    TrainConfig tc;
    tc.num_epochs = 10;
    const auto report = compare(ds, ev, tc);
    ASSERT_GE(report.rows.size(), 2u);
    const auto& plain = report.rows[0];
    const auto& fine = report.rows[1];
    ASSERT_FALSE(plain.bits);
    ASSERT_EQ(fine.bits, 16);
    EXPECT_NEAR(fine.mean_gain, plain.mean_gain, 1e-3 * plain.mean_gain);
}

TEST(Quantization, GainGrowsWithBitsOnAverage) {
    // beams matched to the users; per-instance monotonicity is not guaranteed, the seed average is
    constexpr int seeds = 20;
    std::vector<double> mean_gain(9, 0.0);
    for (int seed = 0; seed < seeds; ++seed) {
        std::mt19937_64 rng(1000 + seed);
        const auto channels = oracle::random_channels(6, 8, rng);
        Eigen::MatrixXd phases(8, 6);
        for (int n = 0; n < 6; ++n)
            phases.col(n) = egc_phases(channels[static_cast<std::size_t>(n)]);
        const PhaseCodebook theta(phases);
        for (int b = 1; b <= 8; ++b)
            mean_gain[static_cast<std::size_t>(b)] += population_gain(to_complex(quantize(theta, {b})), channels) / seeds;
    }
    for (int b = 2; b <= 8; ++b)
        EXPECT_GE(mean_gain[static_cast<std::size_t>(b)], mean_gain[static_cast<std::size_t>(b - 1)]) << "bits " << b;
}

TEST(EvalConfig, Validation) {
    EvalConfig ev;
    ev.snr_db.clear();
    EXPECT_THROW(ev.validate(), ConfigError);
    ev = {};
    ev.codebook_sizes = {0};
    EXPECT_THROW(ev.validate(), ConfigError);
    ev = {};
    ev.quantizer_bits = {20};
    EXPECT_THROW(ev.validate(), ConfigError);
}
