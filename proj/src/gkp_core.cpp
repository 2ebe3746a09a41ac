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

#include "gkpqec/gkp_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gkpqec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClampTol = 1e-9;

int parity(int m) { return m & 1; }

}  // namespace

GkpParams::GkpParams(double eps) : epsilon(eps) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument(
            "GkpParams: epsilon must be > 0 (epsilon = 0 is the nonphysical ideal-state limit)");
    }
}

double squeezing_db(const GkpParams& params) { return -10.0 * std::log10(std::tanh(params.epsilon)); }

Pauli pauli_from_index(int k) {
    if (k < 0 || k > 3) throw std::out_of_range("pauli_from_index: index must be in {0..3}");
    return static_cast<Pauli>(k);
}

Pauli parity_class_of(PeakIndex m) {
    const int p1 = parity(m.m1);
    const int p2 = parity(m.m2);
    if (p1 == 0 && p2 == 0) return Pauli::I;
    if (p1 == 1 && p2 == 0) return Pauli::X;
    if (p1 == 1 && p2 == 1) return Pauli::Y;
    return Pauli::Z;
}

double sign_s(Pauli k, PeakIndex m) {
    if (parity_class_of(m) != k) {
        throw std::invalid_argument("sign_s: peak index is not in the parity class M_k");
    }
    int e = 0;
    switch (k) {
        case Pauli::I: e = 0; break;
        case Pauli::X: e = m.m2 / 2; break;
        case Pauli::Y: e = (m.m1 + m.m2) / 2; break;
        case Pauli::Z: e = m.m1 / 2; break;
    }
    return (e % 2 != 0) ? -1.0 : 1.0;
}

std::complex<double> sign_phase(Pauli k, PeakIndex m) {
    int e = 0;
    switch (k) {
        case Pauli::I: e = 0; break;
        case Pauli::X: e = m.m2; break;
        case Pauli::Y: e = m.m1 + m.m2; break;
        case Pauli::Z: e = m.m1; break;
    }
    switch (((e % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

double weight_c(const GkpParams& params, PeakIndex m) {
    const double r2 = double(m.m1) * m.m1 + double(m.m2) * m.m2;
    return std::exp(-std::tanh(params.epsilon) * (kPi / 4.0) * r2);
}

Eigen::Vector2d peak_mean(const GkpParams& params, PeakIndex m) {
    const double scale = (std::sqrt(kPi) / 2.0) / std::cosh(params.epsilon);
    return {scale * m.m1, scale * m.m2};
}

Eigen::Matrix2d peak_covariance(const GkpParams& params) {
    return (0.5 * std::tanh(params.epsilon)) * Eigen::Matrix2d::Identity();
}

double CutoffRule::radius_sq(const GkpParams& params) const {
    if (!(threshold > 0.0)) throw std::invalid_argument("CutoffRule: threshold must be > 0");
    return threshold * (4.0 / kPi) / std::tanh(params.epsilon);
}

bool CutoffRule::retains(const GkpParams& params, PeakIndex m) const {
    const double r2 = double(m.m1) * m.m1 + double(m.m2) * m.m2;
    return r2 < radius_sq(params);
}

std::vector<PeakIndex> retained_indices(Pauli k, const GkpParams& params, const CutoffRule& cutoff) {
    const double r2 = cutoff.radius_sq(params);
    const int r = static_cast<int>(std::sqrt(r2)) + 1;
    std::vector<PeakIndex> out;
    for (int m1 = -r; m1 <= r; ++m1) {
        for (int m2 = -r; m2 <= r; ++m2) {
            const PeakIndex m{m1, m2};
            if (parity_class_of(m) == k && double(m1) * m1 + double(m2) * m2 < r2) {
                out.push_back(m);
            }
        }
    }
    if (out.empty()) throw std::invalid_argument("retained_indices: cutoff retains no peaks");
    return out;
}

double trace_sigma(Pauli k, const GkpParams& params, const CutoffRule& cutoff) {
    struct Term {
        double r2;
        double value;
    };
    std::vector<Term> terms;
    for (const PeakIndex& m : retained_indices(k, params, cutoff)) {
        const double r2 = double(m.m1) * m.m1 + double(m.m2) * m.m2;
        terms.push_back({r2, weight_c(params, m) * sign_s(k, m)});
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        if (a.r2 != b.r2) return a.r2 < b.r2;
        return a.value < b.value;
    });
    double sum = 0.0;
    double comp = 0.0;
    for (const Term& t : terms) {
        const double y = t.value - comp;
        const double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return (k == Pauli::Y) ? -sum : sum;
}

PauliVector clamp_pauli_vector(const PauliVector& a) {
    const double n2 = a.squared_norm();
    if (n2 <= 1.0) return a;
    const double n = std::sqrt(n2);
    if (n > 1.0 + kClampTol) {
        throw std::domain_error("clamp_pauli_vector: |a| exceeds 1 beyond the clamp tolerance");
    }
    return {a.a1 / n, a.a2 / n, a.a3 / n};
}

double normalization_factor(const PauliVector& a, const GkpParams& params,
                            const CutoffRule& cutoff) {
    const PauliVector ac = clamp_pauli_vector(a);
    return trace_sigma(Pauli::I, params, cutoff) + ac.a1 * trace_sigma(Pauli::X, params, cutoff) +
           ac.a2 * trace_sigma(Pauli::Y, params, cutoff) +
           ac.a3 * trace_sigma(Pauli::Z, params, cutoff);
}

double logical_fidelity(const PauliVector& a, const PauliVector& b) {
    const PauliVector ac = clamp_pauli_vector(a);
    const PauliVector bc = clamp_pauli_vector(b);
    const double ra = std::max(0.0, 1.0 - ac.squared_norm());
    const double rb = std::max(0.0, 1.0 - bc.squared_norm());
    return 0.5 * (1.0 + ac.dot(bc) + std::sqrt(ra * rb));
}

double wigner_value(Pauli k, const GkpParams& params, double q, double p,
                    const CutoffRule& cutoff) {
    const double var = 0.5 * std::tanh(params.epsilon);
    double sum = 0.0;
    for (const PeakIndex& m : retained_indices(k, params, cutoff)) {
        const Eigen::Vector2d mu = peak_mean(params, m);
        const double dq = q - mu(0);
        const double dp = p - mu(1);
        const double g = std::exp(-(dq * dq + dp * dp) / (2.0 * var)) / (2.0 * kPi * var);
        sum += weight_c(params, m) * sign_s(k, m) * g;
    }
    return (k == Pauli::Y) ? -sum : sum;
}

void SignedGaussianMixture::add_term(double weight, Eigen::VectorXd mean,
                                     Eigen::MatrixXd covariance) {
    if (dimension == 0) dimension = static_cast<int>(mean.size());
    if (mean.size() != dimension || covariance.rows() != dimension ||
        covariance.cols() != dimension) {
        throw std::invalid_argument("SignedGaussianMixture: dimension mismatch");
    }
    terms.push_back({weight, std::move(mean), std::move(covariance)});
}

double SignedGaussianMixture::value(const Eigen::VectorXd& x) const {
    double sum = 0.0;
    for (const Term& t : terms) {
        sum += t.weight * gaussian_density(x, t.mean, t.covariance);
    }
    return sum;
}

double gaussian_density(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                        const Eigen::MatrixXd& covariance) {
    const Eigen::Index n = x.size();
    const Eigen::VectorXd d = x - mean;
    const Eigen::LLT<Eigen::MatrixXd> llt(covariance);
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("gaussian_density: covariance is not positive definite");
    }
    const double quad = d.dot(llt.solve(d));
    const double det = llt.matrixL().determinant();
    return std::exp(-0.5 * quad) / (std::pow(2.0 * kPi, 0.5 * double(n)) * det);
}

double gaussian_density_1d(double x, double mean, double variance) {
    const double d = x - mean;
    return std::exp(-d * d / (2.0 * variance)) / std::sqrt(2.0 * kPi * variance);
}

}  // namespace gkpqec
