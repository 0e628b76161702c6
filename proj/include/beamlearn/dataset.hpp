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

#ifndef BEAMLEARN_DATASET_HPP
#define BEAMLEARN_DATASET_HPP

#include "beamlearn/array_channel.hpp"
#include "beamlearn/codebook.hpp"
#include "beamlearn/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace beamlearn {

/// A channel with its EGC label p = ||h||_1^2 / M.
struct Sample {
    ChannelVector channel;
    double label = 0.0;
};

inline std::vector<Sample> compute_labels(std::span<const ChannelVector> channels) {
    detail::require(!channels.empty(), "compute_labels: empty channel list");
    std::vector<Sample> out;
    out.reserve(channels.size());
    for (const auto& h : channels)
        out.push_back({h, egc_gain(h)});
    return out;
}

/// Labeled channels plus normalization state. Immutable once built; the
/// transforming operations return new datasets.
///
/// `normalization_factor` is Delta = max |h_m|^2 of the (training) channels
/// before scaling; gains measured on normalized channels times Delta give gains
/// on the raw channels.
class ChannelDataset {
public:
    ChannelDataset() = default;

    explicit ChannelDataset(std::vector<ChannelVector> channels, double normalization_factor = 1.0, bool normalized = false)
        : normalization_factor_(normalization_factor), normalized_(normalized) {
        detail::require(!channels.empty(), "ChannelDataset: no channels");
        detail::require(std::isfinite(normalization_factor) && normalization_factor > 0.0,
                        "ChannelDataset: normalization factor must be > 0");
        antennas_ = static_cast<int>(channels.front().size());
        detail::require_dims(antennas_ >= 1, "ChannelDataset: empty channel vector");
        for (std::size_t u = 0; u < channels.size(); ++u) {
            detail::require_dims(channels[u].size() == antennas_,
                                 "ChannelDataset: channel " + std::to_string(u) + " has length " +
                                     std::to_string(channels[u].size()) + ", expected " + std::to_string(antennas_));
            detail::require(channels[u].allFinite(), "ChannelDataset: channel " + std::to_string(u) + " is not finite");
        }
        samples_ = compute_labels(channels);
    }

    int antennas() const { return antennas_; }
    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }

    std::span<const Sample> samples() const { return samples_; }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }

    std::vector<ChannelVector> channels() const {
        std::vector<ChannelVector> out;
        out.reserve(samples_.size());
        for (const auto& s : samples_)
            out.push_back(s.channel);
        return out;
    }

    double normalization_factor() const { return normalization_factor_; }
    bool is_normalized() const { return normalized_; }

private:
    std::vector<Sample> samples_;
    int antennas_ = 0;
    double normalization_factor_ = 1.0;
    bool normalized_ = false;
};

/// Delta = max over all channels and antennas of |h_m|^2.
inline double max_entry_power(const ChannelDataset& ds) {
    double delta = 0.0;
    for (const auto& s : ds.samples())
        delta = std::max(delta, s.channel.cwiseAbs2().maxCoeff());
    return delta;
}

/// Scales every channel by 1/sqrt(delta) and recomputes the labels.
inline ChannelDataset apply_normalization(const ChannelDataset& ds, double delta) {
    detail::require(!ds.is_normalized(), "normalize: dataset is already normalized");
    detail::require(std::isfinite(delta) && delta > 0.0, "normalize: normalization factor must be > 0 (all-zero dataset?)");
    const double scale = 1.0 / std::sqrt(delta);
    std::vector<ChannelVector> scaled;
    scaled.reserve(ds.size());
    for (const auto& s : ds.samples())
        scaled.push_back(s.channel * scale);
    return ChannelDataset(std::move(scaled), delta, true);
}

inline ChannelDataset normalize(const ChannelDataset& ds) {
    const double delta = max_entry_power(ds);
    if (delta == 0.0)
        throw ConfigError("normalize: all-zero dataset");
    return apply_normalization(ds, delta);
}

struct DatasetSplit {
    ChannelDataset train;
    ChannelDataset test;
};

/// Deterministic shuffled split. If `ds` is raw, Delta is taken from the train
/// part only and applied to both parts.
inline DatasetSplit split(const ChannelDataset& ds, double train_fraction, std::uint64_t seed) {
    detail::require(train_fraction > 0.0 && train_fraction < 1.0, "split: train_fraction must be in (0, 1)");
    const auto total = ds.size();
    const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(total)));
    if (n_train == 0 || n_train >= total)
        throw ConfigError("split: fraction " + std::to_string(train_fraction) + " of " + std::to_string(total) +
                          " samples leaves one side empty");

    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<ChannelVector> train, test;
    train.reserve(n_train);
    test.reserve(total - n_train);
    for (std::size_t i = 0; i < total; ++i)
        (i < n_train ? train : test).push_back(ds[order[i]].channel);

    ChannelDataset train_ds(std::move(train), ds.normalization_factor(), ds.is_normalized());
    ChannelDataset test_ds(std::move(test), ds.normalization_factor(), ds.is_normalized());
    if (ds.is_normalized())
        return {std::move(train_ds), std::move(test_ds)};

    const double delta = max_entry_power(train_ds);
    if (delta == 0.0)
        throw ConfigError("split: train split is all zeros, cannot normalize");
    return {apply_normalization(train_ds, delta), apply_normalization(test_ds, delta)};
}

// Channel CSV format:
//
//   # M=<antennas>[ delta=<normalization factor>]
//   m0_re,m0_im,m1_re,m1_im,...
//   <one row of 2M reals per user>
//
// The delta field is present only for normalized datasets.

inline void write_dataset(std::ostream& out, const ChannelDataset& ds) {
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "# M=" << ds.antennas();
    if (ds.is_normalized())
        out << " delta=" << ds.normalization_factor();
    out << '\n';
    for (int m = 0; m < ds.antennas(); ++m) {
        if (m)
            out << ',';
        out << 'm' << m << "_re,m" << m << "_im";
    }
    out << '\n';
    for (const auto& s : ds.samples()) {
        for (int m = 0; m < ds.antennas(); ++m) {
            if (m)
                out << ',';
            out << s.channel[m].real() << ',' << s.channel[m].imag();
        }
        out << '\n';
    }
}

inline void save_dataset(const std::string& path, const ChannelDataset& ds) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open '" + path + "' for writing");
    write_dataset(out, ds);
    if (!out)
        throw ParseError("failed writing dataset to '" + path + "'");
}

inline ChannelDataset read_dataset(std::istream& in, const std::string& source = "<dataset>") {
    std::string line;
    std::size_t lineno = 0;
    int antennas = -1;
    double delta = 1.0;
    bool normalized = false;
    bool have_header = false;
    std::vector<ChannelVector> channels;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::string where = source + ":" + std::to_string(lineno);
        if (line.front() == '#') {
            std::istringstream meta(line.substr(1));
            std::string field;
            while (meta >> field) {
                const auto eq = field.find('=');
                if (eq == std::string::npos)
                    continue;
                const auto key = field.substr(0, eq);
                const auto value = field.substr(eq + 1);
                if (key == "M") {
                    const double m = detail::parse_real(value, where);
                    if (m < 1 || m != std::floor(m))
                        throw ParseError(where + ": M must be a positive integer");
                    antennas = static_cast<int>(m);
                } else if (key == "delta") {
                    delta = detail::parse_real(value, where);
                    if (delta <= 0.0)
                        throw ParseError(where + ": delta must be > 0");
                    normalized = true;
                }
            }
            continue;
        }
        const auto cells = detail::split_csv(line);
        if (!have_header) {
            have_header = true;
            if (antennas < 0) {
                if (cells.size() % 2 != 0 || cells.empty())
                    throw ParseError(where + ": header must have 2M columns");
                antennas = static_cast<int>(cells.size() / 2);
            }
            if (cells.size() != 2 * static_cast<std::size_t>(antennas))
                throw ParseError(where + ": header has " + std::to_string(cells.size()) + " columns, expected " +
                                 std::to_string(2 * antennas));
            if (cells.front() != "m0_re")
                throw ParseError(where + ": expected header starting with 'm0_re'");
            continue;
        }
        if (cells.size() != 2 * static_cast<std::size_t>(antennas))
            throw ParseError(where + ": row has " + std::to_string(cells.size()) + " columns, expected " +
                             std::to_string(2 * antennas));
        ChannelVector h(antennas);
        for (int m = 0; m < antennas; ++m)
            h[m] = Complex(detail::parse_real(cells[2 * static_cast<std::size_t>(m)], where),
                           detail::parse_real(cells[2 * static_cast<std::size_t>(m) + 1], where));
        channels.push_back(std::move(h));
    }
    if (!have_header)
        throw ParseError(source + ": empty dataset file");
    if (channels.empty())
        throw ParseError(source + ": dataset has no rows");
    return ChannelDataset(std::move(channels), delta, normalized);
}

inline ChannelDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open dataset '" + path + "'");
    return read_dataset(in, path);
}

} // namespace beamlearn

#endif // BEAMLEARN_DATASET_HPP
