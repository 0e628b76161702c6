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

#ifndef BEAMLEARN_ARRAY_CHANNEL_HPP
#define BEAMLEARN_ARRAY_CHANNEL_HPP

#include "beamlearn/error.hpp"
#include "beamlearn/kv_config.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace beamlearn {

using Complex = std::complex<double>;

// One user's uplink channel, one complex gain per antenna.
using ChannelVector = Eigen::VectorXcd;

// Uniform linear array. Spacing is in wavelengths.
struct ArrayConfig {
    int num_antennas = 1;
    double antenna_spacing = 0.5;

    void validate() const {
        detail::require(num_antennas >= 1, "ArrayConfig: num_antennas must be >= 1");
        detail::require(std::isfinite(antenna_spacing) && antenna_spacing > 0.0,
                        "ArrayConfig: antenna_spacing must be > 0");
    }
};

struct PathComponent {
    Complex gain{1.0, 0.0};
    double aoa = 0.0; // radians, broadside = 0
};

inline constexpr double kMaxAoa = std::numbers::pi / 2.0;

inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Steering vector of the ULA towards `aoa`: a_m = exp(j 2 pi d m sin(aoa)), m = 0..M-1.
/// The first element is the phase reference.
inline ChannelVector array_response(const ArrayConfig& cfg, double aoa) {
    cfg.validate();
    if (!std::isfinite(aoa))
        throw ConfigError("array_response: angle must be finite");
    // 1 ulp of slack so that +-pi/2 built from degrees is accepted
    if (std::abs(aoa) > kMaxAoa * (1.0 + 1e-15))
        throw ConfigError("array_response: angle outside [-pi/2, pi/2]");
    const double step = 2.0 * std::numbers::pi * cfg.antenna_spacing * std::sin(aoa);
    ChannelVector a(cfg.num_antennas);
    for (int m = 0; m < cfg.num_antennas; ++m)
        a[m] = std::polar(1.0, step * m);
    return a;
}

/// h = sum_l gain_l * a(aoa_l)
inline ChannelVector channel_from_paths(const ArrayConfig& cfg, std::span<const PathComponent> paths) {
    ChannelVector h = ChannelVector::Zero(cfg.num_antennas);
    for (const auto& p : paths) {
        if (!std::isfinite(p.gain.real()) || !std::isfinite(p.gain.imag()))
            throw ConfigError("channel_from_paths: path gain must be finite");
        h += p.gain * array_response(cfg, p.aoa);
    }
    return h;
}

// How path angles are drawn.
//   Sector:   every path i.i.d. uniform in [lo, hi]
//   Clusters: path l uniform in its own interval clusters[l]
//   Fixed:    path l uses fixed[l]
struct AoaDistribution {
    enum class Kind { Sector, Clusters, Fixed };
    Kind kind = Kind::Sector;
    double sector_lo = -kMaxAoa;
    double sector_hi = kMaxAoa;
    std::vector<std::pair<double, double>> clusters;
    std::vector<double> fixed;
};

// How complex path gains are drawn.
//   ComplexGaussian: CN(0, variance[l])
//   RandomPhase:     amplitude[l] * exp(j U[0, 2 pi))
//   Fixed:           fixed[l]
struct GainDistribution {
    enum class Kind { ComplexGaussian, RandomPhase, Fixed };
    Kind kind = Kind::ComplexGaussian;
    std::vector<double> variance{1.0};
    std::vector<double> amplitude{1.0};
    std::vector<Complex> fixed;
};

struct ScenarioConfig {
    ArrayConfig array;
    int num_paths = 1;
    AoaDistribution aoa;
    GainDistribution gain;
    int num_users = 1;
    std::uint64_t rng_seed = 0;

    void validate() const {
        array.validate();
        detail::require(num_paths >= 1, "ScenarioConfig: num_paths must be >= 1");
        detail::require(num_users >= 1, "ScenarioConfig: num_users must be >= 1");
        const auto in_range = [](double a) { return std::isfinite(a) && std::abs(a) <= kMaxAoa * (1.0 + 1e-15); };
        const auto n = static_cast<std::size_t>(num_paths);
        switch (aoa.kind) {
        case AoaDistribution::Kind::Sector:
            detail::require(in_range(aoa.sector_lo) && in_range(aoa.sector_hi),
                            "ScenarioConfig: sector must lie within [-90, 90] degrees");
            detail::require(aoa.sector_lo < aoa.sector_hi, "ScenarioConfig: sector needs lo < hi");
            break;
        case AoaDistribution::Kind::Clusters:
            detail::require(aoa.clusters.size() == n, "ScenarioConfig: need one AoA cluster per path");
            for (const auto& [lo, hi] : aoa.clusters) {
                detail::require(in_range(lo) && in_range(hi), "ScenarioConfig: cluster must lie within [-90, 90] degrees");
                detail::require(lo < hi, "ScenarioConfig: cluster needs lo < hi");
            }
            break;
        case AoaDistribution::Kind::Fixed:
            detail::require(aoa.fixed.size() == n, "ScenarioConfig: need one fixed AoA per path");
            for (double a : aoa.fixed)
                detail::require(in_range(a), "ScenarioConfig: fixed AoA must lie within [-90, 90] degrees");
            break;
        }
        const auto per_path = [n](std::size_t size) { return size == 1 || size == n; };
        switch (gain.kind) {
        case GainDistribution::Kind::ComplexGaussian:
            detail::require(per_path(gain.variance.size()), "ScenarioConfig: gain variance needs 1 or num_paths values");
            for (double v : gain.variance)
                detail::require(std::isfinite(v) && v >= 0.0, "ScenarioConfig: gain variance must be >= 0");
            break;
        case GainDistribution::Kind::RandomPhase:
            detail::require(per_path(gain.amplitude.size()), "ScenarioConfig: gain amplitude needs 1 or num_paths values");
            for (double a : gain.amplitude)
                detail::require(std::isfinite(a) && a >= 0.0, "ScenarioConfig: gain amplitude must be >= 0");
            break;
        case GainDistribution::Kind::Fixed:
            detail::require(gain.fixed.size() == n, "ScenarioConfig: need one fixed gain per path");
            for (auto g : gain.fixed)
                detail::require(std::isfinite(g.real()) && std::isfinite(g.imag()), "ScenarioConfig: fixed gain must be finite");
            break;
        }
    }
};

namespace detail {

inline double per_path_value(const std::vector<double>& values, std::size_t path) {
    return values.size() == 1 ? values.front() : values[path];
}

} // namespace detail

/// Draws the path list of one user. Per path, the angle is drawn before the gain.
inline std::vector<PathComponent> draw_paths(const ScenarioConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<PathComponent> paths(static_cast<std::size_t>(cfg.num_paths));
    for (std::size_t l = 0; l < paths.size(); ++l) {
        auto& p = paths[l];
        switch (cfg.aoa.kind) {
        case AoaDistribution::Kind::Sector:
            p.aoa = cfg.aoa.sector_lo + (cfg.aoa.sector_hi - cfg.aoa.sector_lo) * unit(rng);
            break;
        case AoaDistribution::Kind::Clusters: {
            const auto [lo, hi] = cfg.aoa.clusters[l];
            p.aoa = lo + (hi - lo) * unit(rng);
            break;
        }
        case AoaDistribution::Kind::Fixed:
            p.aoa = cfg.aoa.fixed[l];
            break;
        }
        switch (cfg.gain.kind) {
        case GainDistribution::Kind::ComplexGaussian: {
            const double sigma = std::sqrt(detail::per_path_value(cfg.gain.variance, l) / 2.0);
            const double re = normal(rng);
            const double im = normal(rng);
            p.gain = Complex(sigma * re, sigma * im);
            break;
        }
        case GainDistribution::Kind::RandomPhase:
            p.gain = std::polar(detail::per_path_value(cfg.gain.amplitude, l), 2.0 * std::numbers::pi * unit(rng));
            break;
        case GainDistribution::Kind::Fixed:
            p.gain = cfg.gain.fixed[l];
            break;
        }
    }
    return paths;
}

inline ChannelVector synthesize_channel(const ScenarioConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    const auto paths = draw_paths(cfg, rng);
    return channel_from_paths(cfg.array, paths);
}

/// num_users i.i.d. channels; the generator is seeded from cfg.rng_seed only.
inline std::vector<ChannelVector> generate_population(const ScenarioConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.rng_seed);
    std::vector<ChannelVector> out;
    out.reserve(static_cast<std::size_t>(cfg.num_users));
    for (int u = 0; u < cfg.num_users; ++u)
        out.push_back(channel_from_paths(cfg.array, draw_paths(cfg, rng)));
    return out;
}

/// Reads a ScenarioConfig from `key = value` text. Angles in the file are in degrees.
///
///   num_antennas = 32            antenna_spacing = 0.5
///   num_paths = 3                num_users = 2000          seed = 7
///   aoa = sector | clusters | fixed
///   aoa_sector_deg = 30, 90
///   aoa_clusters_deg = -42, -38; 3, 7; 33, 37
///   aoa_fixed_deg = 0, 45
///   gain = complex-gaussian | random-phase | fixed
///   gain_variance = 1            (one value, or one per path)
///   gain_amplitude = 1, 1, 1     (one value, or one per path)
///   gain_fixed = 1, 0; 0, 1      (re, im per path)
inline ScenarioConfig scenario_from_config(const KeyValueConfig& kv) {
    ScenarioConfig cfg;
    cfg.array.num_antennas = static_cast<int>(kv.get_int("num_antennas", 32));
    cfg.array.antenna_spacing = kv.get_double("antenna_spacing", 0.5);
    cfg.num_paths = static_cast<int>(kv.get_int("num_paths", 1));
    cfg.num_users = static_cast<int>(kv.get_int("num_users", 1000));
    const auto seed = kv.get_int("seed", 0);
    if (seed < 0)
        throw ParseError("key 'seed': must be non-negative");
    cfg.rng_seed = static_cast<std::uint64_t>(seed);

    const auto aoa = kv.get_string("aoa", "sector");
    if (aoa == "sector") {
        cfg.aoa.kind = AoaDistribution::Kind::Sector;
        const auto sector = kv.get_doubles("aoa_sector_deg", {-90.0, 90.0});
        if (sector.size() != 2)
            throw ParseError("key 'aoa_sector_deg': expected 'lo, hi'");
        cfg.aoa.sector_lo = deg_to_rad(sector[0]);
        cfg.aoa.sector_hi = deg_to_rad(sector[1]);
    } else if (aoa == "clusters") {
        cfg.aoa.kind = AoaDistribution::Kind::Clusters;
        for (const auto& g : kv.get_groups("aoa_clusters_deg")) {
            if (g.size() != 2)
                throw ParseError("key 'aoa_clusters_deg': expected 'lo, hi' per cluster");
            cfg.aoa.clusters.emplace_back(deg_to_rad(g[0]), deg_to_rad(g[1]));
        }
    } else if (aoa == "fixed") {
        cfg.aoa.kind = AoaDistribution::Kind::Fixed;
        for (double a : kv.get_doubles("aoa_fixed_deg"))
            cfg.aoa.fixed.push_back(deg_to_rad(a));
    } else {
        throw ParseError("key 'aoa': unknown distribution '" + aoa + "'");
    }

    const auto gain = kv.get_string("gain", "complex-gaussian");
    if (gain == "complex-gaussian") {
        cfg.gain.kind = GainDistribution::Kind::ComplexGaussian;
        cfg.gain.variance = kv.get_doubles("gain_variance", {1.0});
    } else if (gain == "random-phase") {
        cfg.gain.kind = GainDistribution::Kind::RandomPhase;
        cfg.gain.amplitude = kv.get_doubles("gain_amplitude", {1.0});
    } else if (gain == "fixed") {
        cfg.gain.kind = GainDistribution::Kind::Fixed;
        for (const auto& g : kv.get_groups("gain_fixed")) {
            if (g.size() != 2)
                throw ParseError("key 'gain_fixed': expected 're, im' per path");
            cfg.gain.fixed.emplace_back(g[0], g[1]);
        }
    } else {
        throw ParseError("key 'gain': unknown distribution '" + gain + "'");
    }
    kv.reject_unknown_keys();
    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
    return scenario_from_config(KeyValueConfig::load(path));
}

} // namespace beamlearn

#endif // BEAMLEARN_ARRAY_CHANNEL_HPP
