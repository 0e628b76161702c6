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

// Test-only helpers: random instance generators and brute-force oracles that
// deliberately avoid the library's forward/gradient code paths.

#ifndef BEAMLEARN_TESTS_TEST_SUPPORT_HPP
#define BEAMLEARN_TESTS_TEST_SUPPORT_HPP

#include "beamlearn/beamlearn.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace beamlearn::oracle {

inline ChannelVector random_channel(int antennas, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    ChannelVector h(antennas);
    for (int m = 0; m < antennas; ++m)
        h[m] = Complex(n(rng), n(rng));
    return h;
}

inline std::vector<ChannelVector> random_channels(int count, int antennas, std::mt19937_64& rng) {
    std::vector<ChannelVector> out;
    for (int i = 0; i < count; ++i)
        out.push_back(random_channel(antennas, rng));
    return out;
}

inline PhaseCodebook random_phases(int antennas, int beams, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-4.0 * M_PI, 4.0 * M_PI);
    Eigen::MatrixXd p(antennas, beams);
    for (int m = 0; m < antennas; ++m)
        for (int n = 0; n < beams; ++n)
            p(m, n) = u(rng);
    return PhaseCodebook(p);
}

// |sum_m exp(-j theta_mn)/sqrt(M) h_m|^2 straight from the phases.
inline double brute_beam_gain(const Eigen::MatrixXd& theta, int n, const ChannelVector& h) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(theta.rows()));
    double re = 0.0, im = 0.0;
    for (Eigen::Index m = 0; m < theta.rows(); ++m) {
        const double c = std::cos(theta(m, n)) * scale;
        const double s = -std::sin(theta(m, n)) * scale;
        re += c * h[m].real() - s * h[m].imag();
        im += c * h[m].imag() + s * h[m].real();
    }
    return re * re + im * im;
}

inline double brute_best_gain(const Eigen::MatrixXd& theta, const ChannelVector& h, int* index = nullptr) {
    double best = -1.0;
    int arg = 0;
    for (Eigen::Index n = 0; n < theta.cols(); ++n) {
        const double g = brute_beam_gain(theta, static_cast<int>(n), h);
        if (g > best) {
            best = g;
            arg = static_cast<int>(n);
        }
    }
    if (index)
        *index = arg;
    return best;
}

inline double brute_loss(const Eigen::MatrixXd& theta, const std::vector<Sample>& batch) {
    double sum = 0.0;
    for (const auto& s : batch) {
        const double r = brute_best_gain(theta, s.channel) - s.label;
        sum += r * r;
    }
    return sum / static_cast<double>(batch.size());
}

// Central finite differences of brute_loss.
inline Eigen::MatrixXd finite_difference_gradient(const Eigen::MatrixXd& theta, const std::vector<Sample>& batch,
                                                  double step = 1e-6) {
    Eigen::MatrixXd grad(theta.rows(), theta.cols());
    Eigen::MatrixXd probe = theta;
    for (Eigen::Index m = 0; m < theta.rows(); ++m) {
        for (Eigen::Index n = 0; n < theta.cols(); ++n) {
            probe(m, n) = theta(m, n) + step;
            const double up = brute_loss(probe, batch);
            probe(m, n) = theta(m, n) - step;
            const double down = brute_loss(probe, batch);
            probe(m, n) = theta(m, n);
            grad(m, n) = (up - down) / (2.0 * step);
        }
    }
    return grad;
}

// Relative gap between the two largest beam gains of a sample; tiny gaps make
// the max non-differentiable within a finite-difference step.
inline double top_two_gap(const Eigen::MatrixXd& theta, const ChannelVector& h) {
    double first = -1.0, second = -1.0;
    for (Eigen::Index n = 0; n < theta.cols(); ++n) {
        const double g = brute_beam_gain(theta, static_cast<int>(n), h);
        if (g > first) {
            second = first;
            first = g;
        } else if (g > second) {
            second = g;
        }
    }
    return second < 0.0 ? 1.0 : (first - second) / first;
}

inline double circular_distance(double a, double b) {
    const double d = std::fmod(std::abs(a - b), 2.0 * M_PI);
    return std::min(d, 2.0 * M_PI - d);
}

} // namespace beamlearn::oracle

#endif // BEAMLEARN_TESTS_TEST_SUPPORT_HPP
