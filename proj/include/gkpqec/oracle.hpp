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

// Brute-force reference implementations used by the test suites. These
// deliberately avoid the index regrouping and the transformation tables of
// the engine: the lambda coefficients are evaluated straight from the
// un-factorized double lattice sum, and state-level quantities are rebuilt
// in a truncated number basis.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "gkpqec/channels.hpp"
#include "gkpqec/gkp_core.hpp"
#include "gkpqec/qec.hpp"

namespace gkpqec::oracle {

/// lambda_{k2} evaluated by enumerating every retained pair of 2D peaks,
/// pushing each pair through the beamsplitter and reading off the two
/// factorized 1D Gaussians at the measured quadratures. No table lookups.
double naive_lambda(int k2, const MeasurementOutcome& outcome, const PauliVector& a_in,
                    const GkpParams& params, const ChannelParams& ch, const CutoffRule& cutoff);

/// Same computation with the per-pair beamsplitter outputs cached, so that
/// large randomized suites stay affordable. partial_sums returns the four
/// per-k1 double sums before input weighting and normalization; lambda
/// assembles them for a concrete input vector.
class NaiveLambdaContext {
  public:
    NaiveLambdaContext(const GkpParams& params, const ChannelParams& ch, const CutoffRule& cutoff);

    std::array<double, 4> partial_sums(int k2, const MeasurementOutcome& outcome) const;
    double lambda(int k2, const MeasurementOutcome& outcome, const PauliVector& a_in) const;

  private:
    struct PairTerm {
        double mq;
        double mp;
        double w;
    };

    GkpParams params_;
    ChannelParams channel_;
    CutoffRule cutoff_;
    std::array<double, 4> traces_;
    double n_bell_;
    double var_q_;
    double var_p_;
    // Indexed [k1*4 + k2].
    std::array<std::vector<PairTerm>, 16> pairs_;
};

/// Number-basis coefficients of the unnormalized damped logical state,
/// c_n = sum_s psi_n(x_s) * exp(-eps*n) over the comb points x_s.
/// Throws if the tail weight at n_max exceeds tail_tol of the total.
Eigen::VectorXd build_gkp_number_basis(int logical, const GkpParams& params, int n_max,
                                       double tail_tol = 1e-9);

/// Tr(sigma_k) computed from the number-basis states and converted to the
/// Gaussian-sum normalization (the two conventions differ by the exact
/// factor sqrt(pi)*(1 + exp(-2*eps))).
double fock_trace_sigma(Pauli k, const GkpParams& params, int n_max);

/// Conversion factor between the damped-comb and Gaussian-sum conventions.
double gaussian_convention_factor(const GkpParams& params);

/// Harmonic-oscillator eigenfunctions psi_0..psi_n_max at x, computed with
/// the normalized three-term recurrence.
Eigen::VectorXd hermite_functions(double x, int n_max);

/// Kraus-sum action of the pure loss channel on a number-basis density
/// matrix. Trace preserving up to the matrix truncation.
Eigen::MatrixXd apply_loss_kraus(const Eigen::MatrixXd& rho, double eta);

/// Kraus-sum action of quantum-limited amplification.
Eigen::MatrixXd apply_amplification_kraus(const Eigen::MatrixXd& rho, double gain);

/// Position marginal of the (normalized) logical state after
/// pre-amplification and loss, sampled on q_grid.
std::vector<double> marginal_after_loss(int logical, const GkpParams& params,
                                        const ChannelParams& ch, int n_max,
                                        const std::vector<double>& q_grid);

/// Least-squares parabola fit to log(density) within half_window of an
/// approximate peak center; returns (center, variance) of the peak.
struct PeakFit {
    double center;
    double variance;
};
PeakFit fit_gaussian_peak(const std::vector<double>& q_grid, const std::vector<double>& density,
                          double approx_center, double half_window);

}  // namespace gkpqec::oracle
