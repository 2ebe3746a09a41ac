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

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "gkpqec/channels.hpp"
#include "gkpqec/gkp_core.hpp"

namespace gkpqec {

/// Double-homodyne result (q of output mode 1, p of output mode 2).
struct MeasurementOutcome {
    double q_m = 0.0;
    double p_m = 0.0;
};

/// Coefficients of the unnormalized conditional output state in the
/// sigma_k basis.
struct LambdaVector {
    std::array<double, 4> lambda = {0.0, 0.0, 0.0, 0.0};

    double operator[](int k) const { return lambda[static_cast<size_t>(k)]; }
};

/// Outcome-conditioned Pauli correction, expressed as the sign flips it
/// applies to the input Pauli vector.
struct SignChoice {
    int s_x = 1;
    int s_z = 1;

    /// The element-wise flip vector [s_x, s_x*s_z, s_z].
    std::array<double, 3> flip_vector() const {
        return {double(s_x), double(s_x * s_z), double(s_z)};
    }
    bool operator==(const SignChoice&) const = default;
};

/// Index regrouping (k1,k2) -> (l1,l2) of the two per-quadrature lattice
/// sums. A bijection on {0..3}^2.
std::pair<int, int> table_l(int k1, int k2);

/// Index regrouping (k1,k2) -> (l1',l2') of the two per-quadrature sign
/// functions.
std::pair<int, int> table_lprime(int k1, int k2);

/// Flip a Pauli vector element-wise by the correction signs.
PauliVector ideal_pauli(const PauliVector& a_in, const SignChoice& s);

/// Outcome-integration grid controls. The grid spacing is
/// sqrt(Sigma')/points_per_sigma; the domain half-width L grows in shells
/// until the mass added by the last shell is below mass_tol of the running
/// total, capped at max_half_width.
struct QuadratureSpec {
    double points_per_sigma = 8.0;
    double mass_tol = 1e-8;
    double max_half_width = 40.0;
};

/// Result of an outcome-averaged fidelity integral.
struct MeanFidelityResult {
    double mean_fidelity = 0.0;
    /// Integral of the outcome density; 1 up to cutoff/domain error.
    double density_norm = 0.0;
    double half_width = 0.0;
    double spacing = 0.0;
    bool converged = true;
};

/// Channel fidelity together with its six per-eigenstate components.
/// Eigenstate order: +X, -X, +Y, -Y, +Z, -Z.
struct ChannelFidelityResult {
    double channel_fidelity = 0.0;
    std::array<double, 6> mean_fidelities = {};
    std::array<double, 6> density_norms = {};
    double half_width = 0.0;
    double spacing = 0.0;
    bool converged = true;

    double max_norm_residual() const;
};

/// The six GKP Pauli eigenstate vectors in the order +X,-X,+Y,-Y,+Z,-Z.
std::array<PauliVector, 6> pauli_eigenstates();

/// Teleportation-based error correction of a loss (and optional
/// pre-amplification) channel, evaluated through the factorized
/// per-quadrature Gaussian sums. All methods are const and safe to call
/// concurrently.
class EcEngine {
  public:
    EcEngine(const GkpParams& params, const ChannelParams& ch, const CutoffRule& cutoff = {});

    const GkpParams& params() const { return params_; }
    const ChannelParams& channel() const { return channel_; }
    const CutoffRule& cutoff() const { return cutoff_; }
    const HomodyneReduction& reduction() const { return reduction_; }

    double trace(Pauli k) const { return traces_[static_cast<size_t>(pauli_index(k))]; }
    double bell_normalization() const { return n_bell_; }

    /// Per-quadrature lattice sum g_{l,l'}(x). Purely real or purely
    /// imaginary; products paired by the transformation tables are real.
    std::complex<double> g_function(int l, int lprime, double x) const;

    LambdaVector lambda_vector(const MeasurementOutcome& outcome, const PauliVector& a_in) const;

    /// a_out = [lambda_1, lambda_2, lambda_3] / lambda_0, clamped.
    PauliVector output_pauli(const LambdaVector& lv) const;

    /// Probability density of the outcome, sum_k lambda_k Tr(sigma_k).
    double outcome_density(const LambdaVector& lv) const;

    /// Correction signs maximizing the density-weighted fidelity summed
    /// over the six Pauli eigenstate inputs. Ties break toward
    /// (+,+), (+,-), (-,+), (-,-) in that order.
    SignChoice decoder_sign(const MeasurementOutcome& outcome) const;

    /// F_L between the actual output vector and the decoder's ideal one.
    double in_out_fidelity(const MeasurementOutcome& outcome, const PauliVector& a_in) const;

    /// Outcome average of in_out_fidelity weighted by the outcome density.
    MeanFidelityResult mean_fidelity(const PauliVector& a_in, const QuadratureSpec& quad = {},
                                     int threads = 1) const;

    /// Mean of mean_fidelity over the six Pauli eigenstate inputs.
    ChannelFidelityResult channel_fidelity(const QuadratureSpec& quad = {}, int threads = 1) const;

  private:
    struct AxisTerm {
        double mu;
        std::array<std::complex<double>, 4> coeff;  // per l'
    };

    struct GridEval;
    friend struct GridEval;

    GkpParams params_;
    ChannelParams channel_;
    CutoffRule cutoff_;
    HomodyneReduction reduction_;
    std::array<double, 4> traces_;
    double n_bell_;
    double mu_extent_;
    // Per class l: terms sorted by mu, equal-mu terms merged.
    std::array<std::vector<AxisTerm>, 4> terms_;

    std::array<std::complex<double>, 4> g_all(int l, double x) const;
};

}  // namespace gkpqec
