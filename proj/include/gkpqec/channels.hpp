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

#pragma once

#include <Eigen/Dense>

#include "gkpqec/gkp_core.hpp"

namespace gkpqec {

/// Transmissivity of the loss channel and gain of the (optional)
/// quantum-limited pre-amplifier placed before it.
struct ChannelParams {
    double eta;
    double gain;

    ChannelParams(double eta_, double gain_);

    /// eta = 1, G = 1.
    static ChannelParams identity();
    /// Loss only (G = 1).
    static ChannelParams loss_only(double eta);
    /// G = 1/eta, the gain that leaves peak means unaltered.
    static ChannelParams pre_amplified(double eta);
};

/// Mean and covariance of a single Gaussian phase-space component.
/// Quadrature ordering is (q1, p1, q2, p2, ...).
struct GaussianMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
};

/// Quantum-limited amplification: Sigma -> G*Sigma + (G-1)/2 * I,
/// mu -> sqrt(G)*mu.
GaussianMoments apply_amplification(const GaussianMoments& moments, double gain);

/// Pure loss: Sigma -> eta*Sigma + (1-eta)/2 * I, mu -> sqrt(eta)*mu.
GaussianMoments apply_loss(const GaussianMoments& moments, double eta);

/// Moments of peak m after pre-amplification and loss.
GaussianMoments noisy_peak_moments(const GkpParams& params, const ChannelParams& ch, PeakIndex m);

/// Parameters of the factorized 1D Gaussians seen by the two homodyne
/// detectors: common variance Sigma' and peak centers
/// mu'(n) = mu_base * (input_scale*n1 + n2).
struct HomodyneReduction {
    double sigma_prime;
    double mu_base;
    double input_scale;

    double mu(int n1, int n2) const { return mu_base * (input_scale * n1 + n2); }
};

HomodyneReduction homodyne_reduced_params(const GkpParams& params, const ChannelParams& ch);

/// Symplectic matrix of the balanced beamsplitter in (q1,p1,q2,p2) ordering.
Eigen::Matrix4d beamsplitter_symplectic();

/// Balanced-beamsplitter action on the product of two single-mode Gaussians:
/// Sigma -> S (Sigma_a (+) Sigma_b) S^T, mu -> S (mu_a (+) mu_b).
GaussianMoments beamsplitter_transform(const GaussianMoments& a, const GaussianMoments& b);

}  // namespace gkpqec
