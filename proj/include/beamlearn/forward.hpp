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

#ifndef BEAMLEARN_FORWARD_HPP
#define BEAMLEARN_FORWARD_HPP

#include "beamlearn/array_channel.hpp"
#include "beamlearn/codebook.hpp"
#include "beamlearn/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

namespace beamlearn {

/// Output of the three-layer forward pass for one channel.
struct BeamResponse {
    Eigen::VectorXcd z; // W^H h, combined signal per beam
    Eigen::VectorXd q;  // |z_n|^2, received power per beam
    int best_index = 0; // smallest argmax of q
    double best_gain = 0.0;
};

namespace detail {

// Smallest index attaining the maximum.
inline int argmax_lowest(const Eigen::VectorXd& q) {
    int best = 0;
    for (Eigen::Index n = 1; n < q.size(); ++n)
        if (q[n] > q[best])
            best = static_cast<int>(n);
    return best;
}

} // namespace detail

inline BeamResponse forward(const ComplexCodebook& w, const ChannelVector& h) {
    detail::require_dims(h.size() == w.antennas(), "forward: channel length " + std::to_string(h.size()) +
                                                       " does not match codebook M = " + std::to_string(w.antennas()));
    BeamResponse r;
    r.z = w.weights().adjoint() * h;
    r.q = r.z.cwiseAbs2();
    r.best_index = detail::argmax_lowest(r.q);
    r.best_gain = r.q[r.best_index];
    return r;
}

/// Mean best-beam gain over a user population, summed sequentially in input order.
inline double population_gain(const ComplexCodebook& w, std::span<const ChannelVector> channels) {
    detail::require_dims(!channels.empty(), "population_gain: empty channel list");
    double sum = 0.0;
    for (const auto& h : channels)
        sum += forward(w, h).best_gain;
    return sum / static_cast<double>(channels.size());
}

/// Per-user best-beam gains, in input order.
inline std::vector<double> best_gains(const ComplexCodebook& w, std::span<const ChannelVector> channels) {
    std::vector<double> out;
    out.reserve(channels.size());
    for (const auto& h : channels)
        out.push_back(forward(w, h).best_gain);
    return out;
}

struct PatternPoint {
    double angle = 0.0; // radians
    double gain = 0.0;  // |w^H a(angle)|^2
};

/// Uniform grid over [-pi/2, pi/2] with the given step in degrees; both ends included.
inline std::vector<double> angle_grid(double step_deg = 1.0) {
    detail::require(std::isfinite(step_deg) && step_deg > 0.0 && step_deg <= 180.0, "angle_grid: step must be in (0, 180] degrees");
    std::vector<double> grid;
    const auto count = static_cast<int>(std::floor(180.0 / step_deg + 1e-9));
    for (int i = 0; i <= count; ++i)
        grid.push_back(deg_to_rad(-90.0 + i * step_deg));
    if (180.0 - count * step_deg > 1e-9)
        grid.push_back(kMaxAoa);
    return grid;
}

/// Gain of beam `w` towards every grid angle.
inline std::vector<PatternPoint> beam_pattern(const Eigen::VectorXcd& w, const ArrayConfig& cfg, std::span<const double> grid) {
    detail::require_dims(w.size() == cfg.num_antennas, "beam_pattern: beam length does not match array size");
    std::vector<PatternPoint> out;
    out.reserve(grid.size());
    for (double angle : grid) {
        const Complex z = w.dot(array_response(cfg, angle)); // w^H a
        out.push_back({angle, std::norm(z)});
    }
    return out;
}

inline void write_pattern_csv(std::ostream& out, std::span<const PatternPoint> pattern) {
    out << "angle_rad,gain\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& p : pattern)
        out << p.angle << ',' << p.gain << '\n';
}

/// Interior grid points that are local maxima at or above `fraction` of the pattern peak.
inline std::vector<std::size_t> pattern_lobes(std::span<const PatternPoint> pattern, double fraction = 0.5) {
    std::vector<std::size_t> lobes;
    if (pattern.size() < 3)
        return lobes;
    double peak = 0.0;
    for (const auto& p : pattern)
        peak = std::max(peak, p.gain);
    for (std::size_t i = 1; i + 1 < pattern.size(); ++i) {
        const double g = pattern[i].gain;
        if (g > pattern[i - 1].gain && g >= pattern[i + 1].gain && g >= fraction * peak)
            lobes.push_back(i);
    }
    return lobes;
}

} // namespace beamlearn

#endif // BEAMLEARN_FORWARD_HPP
