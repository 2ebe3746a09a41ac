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
#include <vector>

#include <Eigen/Dense>

namespace gkpqec {

/// Damping strength of a finite-energy GKP state. The ideal-state limit
/// epsilon = 0 is nonphysical and rejected.
struct GkpParams {
    double epsilon;

    explicit GkpParams(double eps);
};

/// Squeezing level in dB relative to vacuum, -10*log10(tanh(epsilon)).
double squeezing_db(const GkpParams& params);

/// 2D lattice index of a phase-space peak.
struct PeakIndex {
    int m1 = 0;
    int m2 = 0;
};

/// Index k of the logical operators sigma_0=I, sigma_1=X, sigma_2=Y,
/// sigma_3=Z, doubling as the label of the lattice parity class M_k.
enum class Pauli : int { I = 0, X = 1, Y = 2, Z = 3 };

inline constexpr std::array<Pauli, 4> kAllPauli = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

Pauli pauli_from_index(int k);
inline int pauli_index(Pauli k) { return static_cast<int>(k); }

/// Parity class of a peak index: (even,even)->I, (odd,even)->X,
/// (odd,odd)->Y, (even,odd)->Z. The four classes partition the lattice.
Pauli parity_class_of(PeakIndex m);

/// Peak sign s_{k,m} in {+1,-1}. Requires m in M_k, otherwise the exponent
/// would be a half-integer; such indices are rejected.
double sign_s(Pauli k, PeakIndex m);

/// Extension of sign_s to arbitrary lattice indices, valued in {1,i,-1,-i}.
/// Restricted to M_k it coincides with sign_s. The complex values appear
/// when the teleportation sums are regrouped per measured quadrature; any
/// physical combination of them multiplies back to a real number.
std::complex<double> sign_phase(Pauli k, PeakIndex m);

/// Gaussian envelope weight c_m = exp(-tanh(eps)*(pi/4)*|m|^2).
double weight_c(const GkpParams& params, PeakIndex m);

/// Peak center sech(eps)*(sqrt(pi)/2)*m.
Eigen::Vector2d peak_mean(const GkpParams& params, PeakIndex m);

/// Peak covariance (tanh(eps)/2)*I.
Eigen::Matrix2d peak_covariance(const GkpParams& params);

/// Truncation rule for the lattice sums: retain m iff c_m > exp(-threshold).
struct CutoffRule {
    double threshold = 23.0;

    /// Squared radius |m|^2 below which peaks are retained.
    double radius_sq(const GkpParams& params) const;
    bool retains(const GkpParams& params, PeakIndex m) const;
};

/// All retained indices of class k, in no particular order.
std::vector<PeakIndex> retained_indices(Pauli k, const GkpParams& params, const CutoffRule& cutoff);

/// Trace of sigma_k, i.e. the full phase-space integral of its Wigner sum.
/// Terms are accumulated largest-weight first with compensated summation so
/// that the exact cancellation for k=Y survives truncation.
double trace_sigma(Pauli k, const GkpParams& params, const CutoffRule& cutoff);

/// Logical Pauli vector (a1, a2, a3) characterizing a GKP-subspace state.
struct PauliVector {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;

    double squared_norm() const { return a1 * a1 + a2 * a2 + a3 * a3; }
    double dot(const PauliVector& other) const {
        return a1 * other.a1 + a2 * other.a2 + a3 * other.a3;
    }
};

/// Rescales vectors marginally outside the unit ball (norm in
/// (1, 1 + 1e-9], truncation noise) back onto it; rejects anything further
/// out as nonphysical.
PauliVector clamp_pauli_vector(const PauliVector& a);

/// Normalization factor N = Tr(sigma_0) + sum_k a_k Tr(sigma_k).
double normalization_factor(const PauliVector& a, const GkpParams& params, const CutoffRule& cutoff);

/// Logical fidelity 1/2*(1 + a.b + sqrt((1-|a|^2)(1-|b|^2))).
double logical_fidelity(const PauliVector& a, const PauliVector& b);

/// Wigner function of sigma_k at (q, p), evaluated as the truncated sum of
/// unit-normalized Gaussian peaks.
double wigner_value(Pauli k, const GkpParams& params, double q, double p, const CutoffRule& cutoff);

/// Weighted sum of unit-normalized Gaussians; weights may be negative.
struct SignedGaussianMixture {
    struct Term {
        double weight;
        Eigen::VectorXd mean;
        Eigen::MatrixXd covariance;
    };

    int dimension = 0;
    std::vector<Term> terms;

    void add_term(double weight, Eigen::VectorXd mean, Eigen::MatrixXd covariance);
    double value(const Eigen::VectorXd& x) const;
};

/// Density of a single unit-normalized Gaussian.
double gaussian_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                        const Eigen::MatrixXd& covariance);
double gaussian_density_1d(double x, double mean, double variance);

}  // namespace gkpqec
