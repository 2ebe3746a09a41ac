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

#include "gkpqec/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gkpqec::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

double gauss2_product(double qm, double pm, double mq, double mp, double vq, double vp) {
    const double dq = qm - mq;
    const double dp = pm - mp;
    return std::exp(-dq * dq / (2.0 * vq) - dp * dp / (2.0 * vp)) /
           (2.0 * kPi * std::sqrt(vq * vp));
}

}  // namespace

NaiveLambdaContext::NaiveLambdaContext(const GkpParams& params, const ChannelParams& ch,
                                       const CutoffRule& cutoff)
    : params_(params), channel_(ch), cutoff_(cutoff) {
    for (int k = 0; k < 4; ++k) {
        traces_[k] = trace_sigma(pauli_from_index(k), params_, cutoff_);
    }
    n_bell_ = traces_[0] * traces_[0] + traces_[1] * traces_[1] + traces_[3] * traces_[3];

    std::array<std::vector<PeakIndex>, 4> classes;
    for (int k = 0; k < 4; ++k) {
        classes[k] = retained_indices(pauli_from_index(k), params_, cutoff_);
    }
    const Eigen::Matrix2d bell_cov = peak_covariance(params_);
    var_q_ = 0.0;
    var_p_ = 0.0;
    for (int k1 = 0; k1 < 4; ++k1) {
        const double flip = (k1 == 2) ? -1.0 : 1.0;
        for (int k2 = 0; k2 < 4; ++k2) {
            std::vector<PairTerm>& out = pairs_[k1 * 4 + k2];
            out.reserve(classes[k1].size() * classes[k2].size());
            for (const PeakIndex& m1 : classes[k1]) {
                const GaussianMoments noisy = noisy_peak_moments(params_, channel_, m1);
                const double w1 =
                    flip * weight_c(params_, m1) * sign_s(pauli_from_index(k1), m1);
                for (const PeakIndex& m2 : classes[k2]) {
                    GaussianMoments bell;
                    bell.mean = peak_mean(params_, m2);
                    bell.covariance = bell_cov;
                    const GaussianMoments four = beamsplitter_transform(noisy, bell);
                    PairTerm t;
                    t.mq = four.mean(0);
                    t.mp = four.mean(3);
                    t.w = w1 * weight_c(params_, m2) * sign_s(pauli_from_index(k2), m2);
                    out.push_back(t);
                    var_q_ = four.covariance(0, 0);
                    var_p_ = four.covariance(3, 3);
                }
            }
            if (out.empty()) {
                throw std::invalid_argument("NaiveLambdaContext: cutoff retains no peak pairs");
            }
        }
    }
}

std::array<double, 4> NaiveLambdaContext::partial_sums(int k2,
                                                       const MeasurementOutcome& outcome) const {
    if (k2 < 0 || k2 > 3) throw std::out_of_range("partial_sums: k2 must be in {0..3}");
    std::array<double, 4> out = {};
    for (int k1 = 0; k1 < 4; ++k1) {
        double sum = 0.0;
        for (const PairTerm& t : pairs_[k1 * 4 + k2]) {
            sum += t.w * gauss2_product(outcome.q_m, outcome.p_m, t.mq, t.mp, var_q_, var_p_);
        }
        out[k1] = sum;
    }
    return out;
}

double NaiveLambdaContext::lambda(int k2, const MeasurementOutcome& outcome,
                                  const PauliVector& a_in) const {
    const PauliVector a = clamp_pauli_vector(a_in);
    const std::array<double, 4> part = partial_sums(k2, outcome);
    const double n = traces_[0] + a.a1 * traces_[1] + a.a2 * traces_[2] + a.a3 * traces_[3];
    return (part[0] + a.a1 * part[1] + a.a2 * part[2] + a.a3 * part[3]) / (n * n_bell_);
}

double naive_lambda(int k2, const MeasurementOutcome& outcome, const PauliVector& a_in,
                    const GkpParams& params, const ChannelParams& ch, const CutoffRule& cutoff) {
    return NaiveLambdaContext(params, ch, cutoff).lambda(k2, outcome, a_in);
}

Eigen::VectorXd hermite_functions(double x, int n_max) {
    if (n_max < 0) throw std::invalid_argument("hermite_functions: n_max must be >= 0");
    Eigen::VectorXd psi(n_max + 1);
    psi(0) = std::pow(kPi, -0.25) * std::exp(-x * x / 2.0);
    if (n_max >= 1) psi(1) = std::sqrt(2.0) * x * psi(0);
    for (int n = 2; n <= n_max; ++n) {
        psi(n) = std::sqrt(2.0 / n) * x * psi(n - 1) - std::sqrt(double(n - 1) / n) * psi(n - 2);
    }
    return psi;
}

Eigen::VectorXd build_gkp_number_basis(int logical, const GkpParams& params, int n_max,
                                       double tail_tol) {
    if (logical != 0 && logical != 1) {
        throw std::invalid_argument("build_gkp_number_basis: logical must be 0 or 1");
    }
    const double sqpi = std::sqrt(kPi);
    // Comb points within the classically allowed region of |n_max>, padded.
    const int s_max = static_cast<int>((std::sqrt(2.0 * n_max + 1.0) + 10.0) / (2.0 * sqpi)) + 2;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n_max + 1);
    for (int s = -s_max; s <= s_max; ++s) {
        const double x = (2 * s + logical) * sqpi;
        c += hermite_functions(x, n_max);
    }
    for (int n = 0; n <= n_max; ++n) c(n) *= std::exp(-params.epsilon * n);
    const double norm2 = c.squaredNorm();
    const double tail = c(n_max) * c(n_max) + c(n_max - 1) * c(n_max - 1);
    if (!(tail <= tail_tol * norm2)) {
        throw std::invalid_argument(
            "build_gkp_number_basis: photon cutoff tail exceeds the tolerance; raise n_max");
    }
    return c;
}

double gaussian_convention_factor(const GkpParams& params) {
    return std::sqrt(kPi) * (1.0 + std::exp(-2.0 * params.epsilon));
}

double fock_trace_sigma(Pauli k, const GkpParams& params, int n_max) {
    const Eigen::VectorXd v0 = build_gkp_number_basis(0, params, n_max);
    const Eigen::VectorXd v1 = build_gkp_number_basis(1, params, n_max);
    double tr = 0.0;
    switch (k) {
        case Pauli::I: tr = v0.dot(v0) + v1.dot(v1); break;
        case Pauli::X: tr = 2.0 * v0.dot(v1); break;
        case Pauli::Y: tr = 0.0; break;
        case Pauli::Z: tr = v0.dot(v0) - v1.dot(v1); break;
    }
    return tr * gaussian_convention_factor(params);
}

Eigen::MatrixXd apply_loss_kraus(const Eigen::MatrixXd& rho, double eta) {
    if (!(eta > 0.0) || eta > 1.0) throw std::invalid_argument("apply_loss_kraus: eta in (0,1]");
    if (eta == 1.0) return rho;
    const int dim = static_cast<int>(rho.rows());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        const int nm = dim - j;
        Eigen::VectorXd w(nm);
        for (int m = 0; m < nm; ++m) {
            const double lw = 0.5 * (std::lgamma(m + j + 1.0) - std::lgamma(m + 1.0) -
                                     std::lgamma(j + 1.0)) +
                              0.5 * j * std::log1p(-eta) + 0.5 * m * std::log(eta);
            w(m) = std::exp(lw);
        }
        out.topLeftCorner(nm, nm) +=
            w.asDiagonal() * rho.block(j, j, nm, nm) * w.asDiagonal();
    }
    return out;
}

Eigen::MatrixXd apply_amplification_kraus(const Eigen::MatrixXd& rho, double gain) {
    if (!(gain >= 1.0)) throw std::invalid_argument("apply_amplification_kraus: gain >= 1");
    if (gain == 1.0) return rho;
    const int dim = static_cast<int>(rho.rows());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    const double log_ratio = std::log((gain - 1.0) / gain);
    const double log_gain = std::log(gain);
    for (int l = 0; l < dim; ++l) {
        const int nm = dim - l;
        Eigen::VectorXd w(nm);
        for (int m = 0; m < nm; ++m) {
            const double lw = 0.5 * (std::lgamma(m + l + 1.0) - std::lgamma(m + 1.0) -
                                     std::lgamma(l + 1.0)) +
                              0.5 * l * log_ratio - 0.5 * (m + 1.0) * log_gain;
            w(m) = std::exp(lw);
        }
        out.block(l, l, nm, nm) += w.asDiagonal() * rho.topLeftCorner(nm, nm) * w.asDiagonal();
    }
    return out;
}

std::vector<double> marginal_after_loss(int logical, const GkpParams& params,
                                        const ChannelParams& ch, int n_max,
                                        const std::vector<double>& q_grid) {
    const Eigen::VectorXd c = build_gkp_number_basis(logical, params, n_max);
    Eigen::MatrixXd rho = (c * c.transpose()) / c.squaredNorm();
    rho = apply_amplification_kraus(rho, ch.gain);
    rho = apply_loss_kraus(rho, ch.eta);
    std::vector<double> out;
    out.reserve(q_grid.size());
    for (double q : q_grid) {
        const Eigen::VectorXd psi = hermite_functions(q, n_max);
        out.push_back(psi.dot(rho * psi));
    }
    return out;
}

PeakFit fit_gaussian_peak(const std::vector<double>& q_grid, const std::vector<double>& density,
                          double approx_center, double half_window) {
    if (q_grid.size() != density.size()) {
        throw std::invalid_argument("fit_gaussian_peak: grid/density size mismatch");
    }
    std::vector<double> xs, ys;
    for (size_t i = 0; i < q_grid.size(); ++i) {
        if (std::abs(q_grid[i] - approx_center) <= half_window && density[i] > 0.0) {
            xs.push_back(q_grid[i]);
            ys.push_back(std::log(density[i]));
        }
    }
    if (xs.size() < 3) throw std::invalid_argument("fit_gaussian_peak: too few points in window");
    Eigen::MatrixXd a(xs.size(), 3);
    Eigen::VectorXd b(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        a(i, 0) = xs[i] * xs[i];
        a(i, 1) = xs[i];
        a(i, 2) = 1.0;
        b(i) = ys[i];
    }
    const Eigen::Vector3d coef = a.colPivHouseholderQr().solve(b);
    if (!(coef(0) < 0.0)) {
        throw std::invalid_argument("fit_gaussian_peak: window does not contain a maximum");
    }
    PeakFit fit;
    fit.variance = -1.0 / (2.0 * coef(0));
    fit.center = -coef(1) / (2.0 * coef(0));
    return fit;
}

}  // namespace gkpqec::oracle
