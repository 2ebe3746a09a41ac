// Copyright 2026 The gkpqec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gkpqec/channels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gkpqec {

namespace {
constexpr double kPi = std::numbers::pi;
}

ChannelParams::ChannelParams(double eta_, double gain_) : eta(eta_), gain(gain_) {
    if (!(eta > 0.0) || eta > 1.0) {
        throw std::invalid_argument("ChannelParams: eta must lie in (0, 1]");
    }
    if (!(gain >= 1.0)) {
        throw std::invalid_argument("ChannelParams: gain must be >= 1");
    }
}

ChannelParams ChannelParams::identity() { return {1.0, 1.0}; }

ChannelParams ChannelParams::loss_only(double eta) { return {eta, 1.0}; }

ChannelParams ChannelParams::pre_amplified(double eta) { return {eta, 1.0 / eta}; }

GaussianMoments apply_amplification(const GaussianMoments& moments, double gain) {
    if (!(gain >= 1.0)) throw std::invalid_argument("apply_amplification: gain must be >= 1");
    const Eigen::Index n = moments.mean.size();
    GaussianMoments out;
    out.mean = std::sqrt(gain) * moments.mean;
    out.covariance = gain * moments.covariance +
                     (0.5 * (gain - 1.0)) * Eigen::MatrixXd::Identity(n, n);
    return out;
}

GaussianMoments apply_loss(const GaussianMoments& moments, double eta) {
    if (!(eta > 0.0) || eta > 1.0) throw std::invalid_argument("apply_loss: eta must lie in (0, 1]");
    const Eigen::Index n = moments.mean.size();
    GaussianMoments out;
    out.mean = std::sqrt(eta) * moments.mean;
    out.covariance = eta * moments.covariance +
                     (0.5 * (1.0 - eta)) * Eigen::MatrixXd::Identity(n, n);
    return out;
}

GaussianMoments noisy_peak_moments(const GkpParams& params, const ChannelParams& ch, PeakIndex m) {
    GaussianMoments in;
    in.mean = peak_mean(params, m);
    in.covariance = peak_covariance(params);
    return apply_loss(apply_amplification(in, ch.gain), ch.eta);
}

HomodyneReduction homodyne_reduced_params(const GkpParams& params, const ChannelParams& ch) {
    const double t = std::tanh(params.epsilon);
    HomodyneReduction red;
    red.sigma_prime =
        0.25 * (t * (1.0 + ch.eta * ch.gain) + ch.eta * (ch.gain - 1.0) + 1.0 - ch.eta);
    red.mu_base = (std::sqrt(kPi) / (2.0 * std::sqrt(2.0))) / std::cosh(params.epsilon);
    red.input_scale = std::sqrt(ch.eta * ch.gain);
    return red;
}

Eigen::Matrix4d beamsplitter_symplectic() {
    Eigen::Matrix4d s;
    const double r = 1.0 / std::sqrt(2.0);
    s << r, 0, r, 0,  //
        0, r, 0, r,   //
        -r, 0, r, 0,  //
        0, -r, 0, r;
    return s;
}

GaussianMoments beamsplitter_transform(const GaussianMoments& a, const GaussianMoments& b) {
    if (a.mean.size() != 2 || b.mean.size() != 2) {
        throw std::invalid_argument("beamsplitter_transform: inputs must be single-mode (2D)");
    }
    Eigen::Vector4d mu;
    mu << a.mean(0), a.mean(1), b.mean(0), b.mean(1);
    Eigen::Matrix4d sigma = Eigen::Matrix4d::Zero();
    sigma.topLeftCorner<2, 2>() = a.covariance;
    sigma.bottomRightCorner<2, 2>() = b.covariance;
    const Eigen::Matrix4d s = beamsplitter_symplectic();
    GaussianMoments out;
    out.mean = s * mu;
    out.covariance = s * sigma * s.transpose();
    return out;
}

}  // namespace gkpqec
