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

#ifndef BEAMLEARN_CODEBOOK_HPP
#define BEAMLEARN_CODEBOOK_HPP

#include "beamlearn/array_channel.hpp"
#include "beamlearn/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace beamlearn {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2 pi).
inline double wrap_phase(double theta) {
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0)
        r += kTwoPi;
    // fmod of a tiny negative number can round up to exactly 2 pi
    return r >= kTwoPi ? 0.0 : r;
}

/// The trainable parameters: an M x N matrix of phases, one column per beam.
///
/// Phases are kept unwrapped while training; `wrapped()` gives the canonical
/// [0, 2 pi) representation used for serialization. A codebook produced by
/// `quantize` remembers its bit width.
class PhaseCodebook {
public:
    PhaseCodebook() = default;

    explicit PhaseCodebook(Eigen::MatrixXd phases, std::optional<int> bits = std::nullopt)
        : phases_(std::move(phases)), bits_(bits) {
        detail::require(phases_.rows() >= 1 && phases_.cols() >= 1, "PhaseCodebook: need M >= 1 and N >= 1");
        detail::require(phases_.allFinite(), "PhaseCodebook: phases must be finite");
    }

    static PhaseCodebook zeros(int antennas, int beams) {
        detail::require(antennas >= 1 && beams >= 1, "PhaseCodebook: need M >= 1 and N >= 1");
        return PhaseCodebook(Eigen::MatrixXd::Zero(antennas, beams));
    }

    int antennas() const { return static_cast<int>(phases_.rows()); }
    int beams() const { return static_cast<int>(phases_.cols()); }

    const Eigen::MatrixXd& phases() const { return phases_; }
    Eigen::MatrixXd& phases() { return phases_; }

    std::optional<int> quantized_bits() const { return bits_; }

    PhaseCodebook wrapped() const { return PhaseCodebook(phases_.unaryExpr(&wrap_phase), bits_); }

    // Exact comparison, used for determinism checks.
    bool operator==(const PhaseCodebook& other) const {
        return bits_ == other.bits_ && phases_.rows() == other.phases_.rows() &&
               phases_.cols() == other.phases_.cols() && phases_ == other.phases_;
    }

private:
    Eigen::MatrixXd phases_;
    std::optional<int> bits_;
};

/// W = (1/sqrt(M)) exp(j Theta). Only constructible from phases, so every entry
/// has modulus 1/sqrt(M).
class ComplexCodebook {
public:
    explicit ComplexCodebook(const PhaseCodebook& theta) : weights_(theta.antennas(), theta.beams()) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(theta.antennas()));
        const auto& p = theta.phases();
        for (Eigen::Index n = 0; n < p.cols(); ++n)
            for (Eigen::Index m = 0; m < p.rows(); ++m)
                weights_(m, n) = std::polar(scale, p(m, n));
    }

    int antennas() const { return static_cast<int>(weights_.rows()); }
    int beams() const { return static_cast<int>(weights_.cols()); }

    const Eigen::MatrixXcd& weights() const { return weights_; }
    Eigen::VectorXcd beam(int n) const { return weights_.col(n); }

private:
    Eigen::MatrixXcd weights_;
};

inline ComplexCodebook to_complex(const PhaseCodebook& theta) { return ComplexCodebook(theta); }

struct QuantizerSpec {
    int num_bits = 3;

    void validate() const { detail::require(num_bits >= 1 && num_bits <= 16, "QuantizerSpec: bits must be in [1, 16]"); }
    int levels() const { return 1 << num_bits; }
    double step() const { return kTwoPi / levels(); }
};

/// Nearest grid point of {2 pi k / 2^b} in circular distance, ties to the smaller k.
inline double quantize_phase(double theta, const QuantizerSpec& q) {
    const int levels = q.levels();
    const double x = wrap_phase(theta) / q.step();
    int lo = static_cast<int>(std::floor(x));
    if (lo >= levels) // x can round to `levels` for theta just below 2 pi
        lo = levels - 1;
    const double frac = x - lo;
    const int hi = (lo + 1) % levels;
    int k = 0;
    if (frac < 0.5)
        k = lo;
    else if (frac > 0.5)
        k = hi;
    else
        k = std::min(lo, hi);
    return k * q.step();
}

inline PhaseCodebook quantize(const PhaseCodebook& theta, const QuantizerSpec& q) {
    q.validate();
    Eigen::MatrixXd out = theta.phases().unaryExpr([&](double t) { return quantize_phase(t, q); });
    return PhaseCodebook(std::move(out), q.num_bits);
}

/// Beamspace coordinate u_n = sin(phi_n) of DFT beam n: 2n/N wrapped into [-1, 1).
inline double dft_beamspace_coordinate(int n, int beams) {
    double u = 2.0 * n / beams;
    if (u >= 1.0)
        u -= 2.0;
    return u;
}

/// Design (steering) angle of DFT beam n, in radians.
inline double dft_design_angle(int n, int beams) { return std::asin(dft_beamspace_coordinate(n, beams)); }

/// Classical DFT codebook: beam n steers a(phi_n), with {sin phi_n} a uniform
/// N-point grid over [-1, 1). Column 0 is broadside; for M = N and d = 0.5 the
/// columns are the orthonormal DFT basis.
inline PhaseCodebook dft_codebook(int antennas, int beams, double antenna_spacing = 0.5) {
    detail::require(antennas >= 1 && beams >= 1, "dft_codebook: need M >= 1 and N >= 1");
    detail::require(antenna_spacing > 0.0, "dft_codebook: antenna_spacing must be > 0");
    Eigen::MatrixXd phases(antennas, beams);
    for (int n = 0; n < beams; ++n) {
        const double u = dft_beamspace_coordinate(n, beams);
        for (int m = 0; m < antennas; ++m)
            phases(m, n) = kTwoPi * antenna_spacing * m * u;
    }
    return PhaseCodebook(std::move(phases));
}

/// Per-antenna phases of h; zero entries get phase 0.
inline Eigen::VectorXd egc_phases(const ChannelVector& h) {
    Eigen::VectorXd out(h.size());
    for (Eigen::Index m = 0; m < h.size(); ++m)
        out[m] = h[m] == Complex(0.0, 0.0) ? 0.0 : std::arg(h[m]);
    return out;
}

/// Equal gain combining beam (1/sqrt(M)) exp(j angle(h)).
inline Eigen::VectorXcd egc_beam(const ChannelVector& h) {
    detail::require_dims(h.size() >= 1, "egc_beam: empty channel");
    const double scale = 1.0 / std::sqrt(static_cast<double>(h.size()));
    const auto phases = egc_phases(h);
    Eigen::VectorXcd f(h.size());
    for (Eigen::Index m = 0; m < h.size(); ++m)
        f[m] = std::polar(scale, phases[m]);
    return f;
}

/// |f_EGC^H h|^2 = ||h||_1^2 / M, the best gain any single unit-modulus beam can reach on h.
inline double egc_gain(const ChannelVector& h) {
    detail::require_dims(h.size() >= 1, "egc_gain: empty channel");
    const double l1 = h.cwiseAbs().sum();
    return l1 * l1 / static_cast<double>(h.size());
}

enum class InitStrategy {
    UniformRandom, // i.i.d. U[0, 2 pi)
    DftWarmStart,  // dft_codebook(M, N)
    ChannelSample, // EGC beams of N distinct randomly chosen channels
};

inline InitStrategy parse_init_strategy(const std::string& name) {
    if (name == "uniform-random")
        return InitStrategy::UniformRandom;
    if (name == "dft-warm-start")
        return InitStrategy::DftWarmStart;
    if (name == "channel-sample")
        return InitStrategy::ChannelSample;
    throw ConfigError("unknown init strategy '" + name + "'");
}

inline std::string to_string(InitStrategy s) {
    switch (s) {
    case InitStrategy::UniformRandom:
        return "uniform-random";
    case InitStrategy::DftWarmStart:
        return "dft-warm-start";
    case InitStrategy::ChannelSample:
        return "channel-sample";
    }
    return "?";
}

/// Initial phases. `channels` is only read by ChannelSample; when N exceeds the
/// number of channels the extra beams reuse channels with a small random phase
/// jitter so that no two beams start identical.
inline PhaseCodebook init_codebook(int antennas, int beams, InitStrategy strategy, std::mt19937_64& rng,
                                   std::span<const ChannelVector> channels = {}, double antenna_spacing = 0.5) {
    detail::require(antennas >= 1 && beams >= 1, "init_codebook: need M >= 1 and N >= 1");
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    switch (strategy) {
    case InitStrategy::UniformRandom: {
        Eigen::MatrixXd p(antennas, beams);
        // column-major draw order
        for (int n = 0; n < beams; ++n)
            for (int m = 0; m < antennas; ++m)
                p(m, n) = phase(rng);
        return PhaseCodebook(std::move(p));
    }
    case InitStrategy::DftWarmStart:
        return dft_codebook(antennas, beams, antenna_spacing);
    case InitStrategy::ChannelSample: {
        detail::require(!channels.empty(), "init_codebook: channel-sample needs channels");
        std::vector<std::size_t> order(channels.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::normal_distribution<double> jitter(0.0, 0.1);
        Eigen::MatrixXd p(antennas, beams);
        for (int n = 0; n < beams; ++n) {
            const auto& h = channels[order[static_cast<std::size_t>(n) % order.size()]];
            detail::require_dims(h.size() == antennas, "init_codebook: channel length differs from M");
            p.col(n) = egc_phases(h);
            if (static_cast<std::size_t>(n) >= order.size())
                for (int m = 0; m < antennas; ++m)
                    p(m, n) += jitter(rng);
        }
        return PhaseCodebook(std::move(p));
    }
    }
    throw ConfigError("init_codebook: unknown strategy");
}

// Codebook text format:
//
//   # beamlearn codebook
//   M,N,bits
//   32,16,none            (or the bit width of a quantized codebook)
//   <M rows of N comma separated phases in radians, wrapped to [0, 2 pi)>
//
// Phases are written with max_digits10 so that a load reproduces them bit-exactly.

inline void write_codebook(std::ostream& out, const PhaseCodebook& theta) {
    const auto wrapped = theta.wrapped();
    out << "# beamlearn codebook\n";
    out << "M,N,bits\n";
    out << theta.antennas() << ',' << theta.beams() << ',';
    if (theta.quantized_bits())
        out << *theta.quantized_bits();
    else
        out << "none";
    out << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (int m = 0; m < wrapped.antennas(); ++m) {
        for (int n = 0; n < wrapped.beams(); ++n) {
            if (n)
                out << ',';
            out << wrapped.phases()(m, n);
        }
        out << '\n';
    }
}

inline void save_codebook(const std::string& path, const PhaseCodebook& theta) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open '" + path + "' for writing");
    write_codebook(out, theta);
    if (!out)
        throw ParseError("failed writing codebook to '" + path + "'");
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

inline double parse_real(const std::string& cell, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        throw ParseError(where + ": not a number '" + cell + "'");
    }
    while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\r'))
        ++used;
    if (used != cell.size() || !std::isfinite(v))
        throw ParseError(where + ": not a finite number '" + cell + "'");
    return v;
}

} // namespace detail

inline PhaseCodebook read_codebook(std::istream& in, const std::string& source = "<codebook>") {
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> bool {
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty() || line.front() == '#')
                continue;
            return true;
        }
        return false;
    };
    const auto where = [&] { return source + ":" + std::to_string(lineno); };

    if (!next() || line != "M,N,bits")
        throw ParseError(source + ": missing 'M,N,bits' header");
    if (!next())
        throw ParseError(source + ": missing dimensions line");
    const auto dims = detail::split_csv(line);
    if (dims.size() != 3)
        throw ParseError(where() + ": expected 'M,N,bits'");
    const double m_real = detail::parse_real(dims[0], where());
    const double n_real = detail::parse_real(dims[1], where());
    if (m_real < 1 || n_real < 1 || m_real != std::floor(m_real) || n_real != std::floor(n_real))
        throw ParseError(where() + ": M and N must be positive integers");
    const auto antennas = static_cast<int>(m_real);
    const auto beams = static_cast<int>(n_real);
    std::optional<int> bits;
    if (dims[2] != "none") {
        const double b = detail::parse_real(dims[2], where());
        if (b < 1 || b > 16 || b != std::floor(b))
            throw ParseError(where() + ": bits must be 'none' or an integer in [1, 16]");
        bits = static_cast<int>(b);
    }

    Eigen::MatrixXd phases(antennas, beams);
    for (int m = 0; m < antennas; ++m) {
        if (!next())
            throw ParseError(source + ": expected " + std::to_string(antennas) + " phase rows, got " + std::to_string(m));
        const auto cells = detail::split_csv(line);
        if (static_cast<int>(cells.size()) != beams)
            throw ParseError(where() + ": expected " + std::to_string(beams) + " phases, got " + std::to_string(cells.size()));
        for (int n = 0; n < beams; ++n)
            phases(m, n) = detail::parse_real(cells[static_cast<std::size_t>(n)], where());
    }
    if (next())
        throw ParseError(where() + ": trailing data after " + std::to_string(antennas) + " phase rows");
    return PhaseCodebook(std::move(phases), bits);
}

inline PhaseCodebook load_codebook(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open codebook '" + path + "'");
    return read_codebook(in, path);
}

} // namespace beamlearn

#endif // BEAMLEARN_CODEBOOK_HPP
