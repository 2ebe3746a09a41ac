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

#include "gkpqec/qec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace gkpqec {

namespace {

constexpr double kPi = std::numbers::pi;
// Gaussian tail exponent for windowed axis sums: terms further than
// sqrt(2*60*Sigma') from the evaluation point contribute < exp(-60).
constexpr double kWindowExponent = 60.0;
constexpr double kLambdaZeroFloor = 1e-300;

// (k1,k2) -> (l1,l2) and (k1,k2) -> (l1',l2'), indexed [k1][k2].
constexpr int kL1[4][4] = {{0, 3, 3, 0}, {1, 2, 2, 1}, {1, 2, 2, 1}, {0, 3, 3, 0}};
constexpr int kL2[4][4] = {{0, 0, 3, 3}, {0, 0, 3, 3}, {1, 1, 2, 2}, {1, 1, 2, 2}};
constexpr int kP1[4][4] = {{0, 0, 1, 1}, {0, 0, 1, 1}, {3, 3, 2, 2}, {3, 3, 2, 2}};
constexpr int kP2[4][4] = {{0, 1, 1, 0}, {3, 2, 2, 3}, {3, 2, 2, 3}, {0, 1, 1, 0}};

// Correction sign candidates in tie-break order, as flip vectors
// [s_x, s_x*s_z, s_z].
constexpr SignChoice kCandidates[4] = {{+1, +1}, {+1, -1}, {-1, +1}, {-1, -1}};
constexpr double kFlip[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, -1, 1}, {-1, 1, -1}};

// Eigenstate j -> (Pauli axis c in {1,2,3}, sign).
constexpr int kEigAxis[6] = {1, 1, 2, 2, 3, 3};
constexpr double kEigSign[6] = {1, -1, 1, -1, 1, -1};

void check_quadrature(const QuadratureSpec& quad) {
    if (!(quad.points_per_sigma >= 6.0)) {
        throw std::invalid_argument("QuadratureSpec: points_per_sigma must be >= 6");
    }
    if (!(quad.mass_tol > 0.0) || !(quad.max_half_width > 0.0)) {
        throw std::invalid_argument("QuadratureSpec: mass_tol and max_half_width must be > 0");
    }
}

// Everything needed at one grid point for the decoder: the six eigenstate
// lambda vectors, densities, and clamped output vectors.
struct PointState {
    double t[4][4];
    double lam0[6];
    double p[6];
    double aos[6][3];
    bool live[6];
};

inline double re_mul(const std::complex<double>& a, const std::complex<double>& b) {
    return a.real() * b.real() - a.imag() * b.imag();
}

// cq[k1*4+k2] = g_{l1,l1'}(q_m); gp holds the 16 per-class values
// g_{l,l'}(p_m) packed as [l*4+l'].
inline void eval_point_state(const std::complex<double>* cq, const std::complex<double>* gp,
                             const double* traces, const double* inv_nnb_eig, PointState& st) {
    for (int k1 = 0; k1 < 4; ++k1) {
        for (int k2 = 0; k2 < 4; ++k2) {
            st.t[k1][k2] = re_mul(cq[k1 * 4 + k2], gp[kL2[k1][k2] * 4 + kP2[k1][k2]]);
        }
    }
    for (int j = 0; j < 6; ++j) {
        const int c = kEigAxis[j];
        const double sg = kEigSign[j];
        double lam[4];
        for (int k2 = 0; k2 < 4; ++k2) {
            lam[k2] = (st.t[0][k2] + sg * st.t[c][k2]) * inv_nnb_eig[j];
        }
        st.lam0[j] = lam[0];
        if (!(lam[0] > kLambdaZeroFloor)) {
            st.live[j] = false;
            st.p[j] = 0.0;
            st.aos[j][0] = st.aos[j][1] = st.aos[j][2] = 0.0;
            continue;
        }
        st.live[j] = true;
        st.p[j] = lam[0] * traces[0] + lam[1] * traces[1] + lam[2] * traces[2] + lam[3] * traces[3];
        const double inv0 = 1.0 / lam[0];
        double a[3] = {lam[1] * inv0, lam[2] * inv0, lam[3] * inv0};
        const double n2 = a[0] * a[0] + a[1] * a[1] + a[2] * a[2];
        if (n2 > 1.0) {
            const double s = 1.0 / std::sqrt(n2);
            a[0] *= s;
            a[1] *= s;
            a[2] *= s;
        }
        st.aos[j][0] = a[0];
        st.aos[j][1] = a[1];
        st.aos[j][2] = a[2];
    }
}

inline int decoder_argmax(const PointState& st) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int cand = 0; cand < 4; ++cand) {
        double score = 0.0;
        for (int j = 0; j < 6; ++j) {
            if (!st.live[j]) continue;
            const int c = kEigAxis[j];
            const double fl = 0.5 * (1.0 + kFlip[cand][c - 1] * kEigSign[j] * st.aos[j][c - 1]);
            score += fl * st.p[j];
        }
        if (score > best_score) {
            best_score = score;
            best = cand;
        }
    }
    return best;
}

}  // namespace

std::pair<int, int> table_l(int k1, int k2) {
    if (k1 < 0 || k1 > 3 || k2 < 0 || k2 > 3) {
        throw std::out_of_range("table_l: indices must be in {0..3}");
    }
    return {kL1[k1][k2], kL2[k1][k2]};
}

std::pair<int, int> table_lprime(int k1, int k2) {
    if (k1 < 0 || k1 > 3 || k2 < 0 || k2 > 3) {
        throw std::out_of_range("table_lprime: indices must be in {0..3}");
    }
    return {kP1[k1][k2], kP2[k1][k2]};
}

PauliVector ideal_pauli(const PauliVector& a_in, const SignChoice& s) {
    const auto f = s.flip_vector();
    return {f[0] * a_in.a1, f[1] * a_in.a2, f[2] * a_in.a3};
}

double ChannelFidelityResult::max_norm_residual() const {
    double r = 0.0;
    for (double n : density_norms) r = std::max(r, std::abs(n - 1.0));
    return r;
}

std::array<PauliVector, 6> pauli_eigenstates() {
    return {PauliVector{1, 0, 0},  PauliVector{-1, 0, 0}, PauliVector{0, 1, 0},
            PauliVector{0, -1, 0}, PauliVector{0, 0, 1},  PauliVector{0, 0, -1}};
}

EcEngine::EcEngine(const GkpParams& params, const ChannelParams& ch, const CutoffRule& cutoff)
    : params_(params), channel_(ch), cutoff_(cutoff),
      reduction_(homodyne_reduced_params(params, ch)) {
    for (int k = 0; k < 4; ++k) {
        traces_[k] = trace_sigma(pauli_from_index(k), params_, cutoff_);
    }
    n_bell_ = traces_[0] * traces_[0] + traces_[1] * traces_[1] + traces_[3] * traces_[3];

    mu_extent_ = 0.0;
    for (int l = 0; l < 4; ++l) {
        std::vector<AxisTerm> terms;
        for (const PeakIndex& n : retained_indices(pauli_from_index(l), params_, cutoff_)) {
            AxisTerm t;
            t.mu = reduction_.mu(n.m1, n.m2);
            const double c = weight_c(params_, n);
            for (int lp = 0; lp < 4; ++lp) {
                t.coeff[lp] = c * sign_phase(pauli_from_index(lp), n);
            }
            terms.push_back(t);
            mu_extent_ = std::max(mu_extent_, std::abs(t.mu));
        }
        std::sort(terms.begin(), terms.end(),
                  [](const AxisTerm& a, const AxisTerm& b) { return a.mu < b.mu; });
        // Merge exactly coincident centers (e.g. eta*G = 1 collapses the
        // lattice diagonals onto a 1D comb).
        std::vector<AxisTerm>& merged = terms_[l];
        merged.clear();
        for (const AxisTerm& t : terms) {
            if (!merged.empty() && merged.back().mu == t.mu) {
                for (int lp = 0; lp < 4; ++lp) merged.back().coeff[lp] += t.coeff[lp];
            } else {
                merged.push_back(t);
            }
        }
    }
}

std::array<std::complex<double>, 4> EcEngine::g_all(int l, double x) const {
    const double sp = reduction_.sigma_prime;
    const double window = std::sqrt(2.0 * kWindowExponent * sp);
    const std::vector<AxisTerm>& terms = terms_[l];
    const auto lo = std::lower_bound(terms.begin(), terms.end(), x - window,
                                     [](const AxisTerm& t, double v) { return t.mu < v; });
    const auto hi = std::upper_bound(lo, terms.end(), x + window,
                                     [](double v, const AxisTerm& t) { return v < t.mu; });
    const double norm = 1.0 / std::sqrt(2.0 * kPi * sp);
    std::array<std::complex<double>, 4> out = {};
    for (auto it = lo; it != hi; ++it) {
        const double d = x - it->mu;
        const double g = norm * std::exp(-d * d / (2.0 * sp));
        for (int lp = 0; lp < 4; ++lp) out[lp] += g * it->coeff[lp];
    }
    return out;
}

std::complex<double> EcEngine::g_function(int l, int lprime, double x) const {
    if (l < 0 || l > 3 || lprime < 0 || lprime > 3) {
        throw std::out_of_range("g_function: class indices must be in {0..3}");
    }
    return g_all(l, x)[lprime];
}

LambdaVector EcEngine::lambda_vector(const MeasurementOutcome& outcome,
                                     const PauliVector& a_in) const {
    const PauliVector a = clamp_pauli_vector(a_in);
    std::array<std::array<std::complex<double>, 4>, 4> gq, gp;
    for (int l = 0; l < 4; ++l) {
        gq[l] = g_all(l, outcome.q_m);
        gp[l] = g_all(l, outcome.p_m);
    }
    const double avec[4] = {1.0, a.a1, a.a2, a.a3};
    const double n = traces_[0] + a.a1 * traces_[1] + a.a2 * traces_[2] + a.a3 * traces_[3];
    const double inv = 1.0 / (n * n_bell_);
    LambdaVector lv;
    for (int k2 = 0; k2 < 4; ++k2) {
        double sum = 0.0;
        for (int k1 = 0; k1 < 4; ++k1) {
            sum += avec[k1] *
                   re_mul(gq[kL1[k1][k2]][kP1[k1][k2]], gp[kL2[k1][k2]][kP2[k1][k2]]);
        }
        lv.lambda[k2] = sum * inv;
    }
    return lv;
}

PauliVector EcEngine::output_pauli(const LambdaVector& lv) const {
    if (!(lv[0] > kLambdaZeroFloor)) {
        throw std::domain_error("output_pauli: lambda_0 is nonpositive (zero-probability outcome)");
    }
    return clamp_pauli_vector({lv[1] / lv[0], lv[2] / lv[0], lv[3] / lv[0]});
}

double EcEngine::outcome_density(const LambdaVector& lv) const {
    return lv[0] * traces_[0] + lv[1] * traces_[1] + lv[2] * traces_[2] + lv[3] * traces_[3];
}

SignChoice EcEngine::decoder_sign(const MeasurementOutcome& outcome) const {
    std::array<std::complex<double>, 4> gq[4], gp[4];
    for (int l = 0; l < 4; ++l) {
        gq[l] = g_all(l, outcome.q_m);
        gp[l] = g_all(l, outcome.p_m);
    }
    std::complex<double> cq[16];
    for (int k1 = 0; k1 < 4; ++k1) {
        for (int k2 = 0; k2 < 4; ++k2) {
            cq[k1 * 4 + k2] = gq[kL1[k1][k2]][kP1[k1][k2]];
        }
    }
    std::complex<double> gp_flat[16];
    for (int l = 0; l < 4; ++l) {
        for (int lp = 0; lp < 4; ++lp) gp_flat[l * 4 + lp] = gp[l][lp];
    }
    double inv_nnb_eig[6];
    for (int j = 0; j < 6; ++j) {
        inv_nnb_eig[j] = 1.0 / ((traces_[0] + kEigSign[j] * traces_[kEigAxis[j]]) * n_bell_);
    }
    PointState st;
    eval_point_state(cq, gp_flat, traces_.data(), inv_nnb_eig, st);
    return kCandidates[decoder_argmax(st)];
}

double EcEngine::in_out_fidelity(const MeasurementOutcome& outcome,
                                 const PauliVector& a_in) const {
    const PauliVector a_out = output_pauli(lambda_vector(outcome, a_in));
    return logical_fidelity(a_out, ideal_pauli(a_in, decoder_sign(outcome)));
}

// Shell-adaptive tensor grid evaluation shared by mean_fidelity and
// channel_fidelity. Rows are distributed over threads; accumulation is in
// fixed row order so results do not depend on the thread count.
struct EcEngine::GridEval {
    const EcEngine& eng;
    QuadratureSpec quad;
    // Inputs whose F*P and P integrals are accumulated. When eigen_mode is
    // set they are exactly the six decoder eigenstates and their per-point
    // values are reused instead of recomputed.
    bool eigen_mode;
    PauliVector single_input;
    int threads;

    double h = 0.0;
    int m_cap = 0;
    int m_final = 0;
    bool converged = false;
    std::vector<std::array<std::complex<double>, 16>> table;
    double inv_nnb_eig[6];
    double single_a[3] = {0, 0, 0};
    double single_inv_nnb = 0.0;
    double single_norm2 = 0.0;
    int n_tracked = 0;
    std::array<double, 6> sum_fp = {};
    std::array<double, 6> sum_p = {};

    struct RowTask {
        int i;
        int j0a, j1a;  // inclusive; second range empty when j0b > j1b
        int j0b, j1b;
    };
    struct RowResult {
        std::array<double, 6> fp = {};
        std::array<double, 6> p = {};
    };

    GridEval(const EcEngine& e, const QuadratureSpec& q, bool eigen, const PauliVector& a, int th)
        : eng(e), quad(q), eigen_mode(eigen), single_input(a), threads(std::max(1, th)) {
        check_quadrature(quad);
        const double sp = eng.reduction_.sigma_prime;
        h = std::sqrt(sp) / quad.points_per_sigma;
        m_cap = static_cast<int>(std::floor(quad.max_half_width / h));
        for (int j = 0; j < 6; ++j) {
            inv_nnb_eig[j] =
                1.0 / ((eng.traces_[0] + kEigSign[j] * eng.traces_[kEigAxis[j]]) * eng.n_bell_);
        }
        if (eigen_mode) {
            n_tracked = 6;
        } else {
            n_tracked = 1;
            const PauliVector ac = clamp_pauli_vector(single_input);
            single_a[0] = ac.a1;
            single_a[1] = ac.a2;
            single_a[2] = ac.a3;
            single_norm2 = ac.squared_norm();
            const double n = eng.traces_[0] + ac.a1 * eng.traces_[1] + ac.a2 * eng.traces_[2] +
                             ac.a3 * eng.traces_[3];
            single_inv_nnb = 1.0 / (n * eng.n_bell_);
        }
        table.resize(2 * m_cap + 1);
        for (int idx = 0; idx <= 2 * m_cap; ++idx) {
            const double x = (idx - m_cap) * h;
            for (int l = 0; l < 4; ++l) {
                const auto g = eng.g_all(l, x);
                for (int lp = 0; lp < 4; ++lp) table[idx][l * 4 + lp] = g[lp];
            }
        }
    }

    void eval_range(int i, int j0, int j1, RowResult& out) const {
        std::complex<double> cq[16];
        const auto& gq = table[i + m_cap];
        for (int k1 = 0; k1 < 4; ++k1) {
            for (int k2 = 0; k2 < 4; ++k2) {
                cq[k1 * 4 + k2] = gq[kL1[k1][k2] * 4 + kP1[k1][k2]];
            }
        }
        PointState st;
        for (int j = j0; j <= j1; ++j) {
            eval_point_state(cq, table[j + m_cap].data(), eng.traces_.data(), inv_nnb_eig, st);
            const int best = decoder_argmax(st);
            if (eigen_mode) {
                for (int s = 0; s < 6; ++s) {
                    if (!st.live[s]) continue;
                    const int c = kEigAxis[s];
                    const double fl =
                        0.5 * (1.0 + kFlip[best][c - 1] * kEigSign[s] * st.aos[s][c - 1]);
                    out.fp[s] += fl * st.p[s];
                    out.p[s] += st.p[s];
                }
            } else {
                double lam[4];
                for (int k2 = 0; k2 < 4; ++k2) {
                    lam[k2] = (st.t[0][k2] + single_a[0] * st.t[1][k2] +
                               single_a[1] * st.t[2][k2] + single_a[2] * st.t[3][k2]) *
                              single_inv_nnb;
                }
                if (!(lam[0] > kLambdaZeroFloor)) continue;
                const double p = lam[0] * eng.traces_[0] + lam[1] * eng.traces_[1] +
                                 lam[2] * eng.traces_[2] + lam[3] * eng.traces_[3];
                const double inv0 = 1.0 / lam[0];
                double ao[3] = {lam[1] * inv0, lam[2] * inv0, lam[3] * inv0};
                double n2 = ao[0] * ao[0] + ao[1] * ao[1] + ao[2] * ao[2];
                if (n2 > 1.0) {
                    const double s = 1.0 / std::sqrt(n2);
                    ao[0] *= s;
                    ao[1] *= s;
                    ao[2] *= s;
                    n2 = 1.0;
                }
                double dot = 0.0;
                for (int c = 0; c < 3; ++c) dot += kFlip[best][c] * single_a[c] * ao[c];
                const double fl = 0.5 * (1.0 + dot +
                                         std::sqrt(std::max(0.0, 1.0 - n2) *
                                                   std::max(0.0, 1.0 - single_norm2)));
                out.fp[0] += fl * p;
                out.p[0] += p;
            }
        }
    }

    RowResult eval_task(const RowTask& t) const {
        RowResult r;
        eval_range(t.i, t.j0a, t.j1a, r);
        if (t.j0b <= t.j1b) eval_range(t.i, t.j0b, t.j1b, r);
        return r;
    }

    // Adds the shell of points with max(|i|,|j|) in (m_prev, m_cur]; returns
    // the probability mass it contributed (summed over tracked inputs).
    double add_shell(int m_prev, int m_cur) {
        std::vector<RowTask> tasks;
        for (int i = -m_cur; i <= m_cur; ++i) {
            if (std::abs(i) > m_prev) {
                tasks.push_back({i, -m_cur, m_cur, 1, 0});
            } else {
                tasks.push_back({i, -m_cur, -m_prev - 1, m_prev + 1, m_cur});
            }
        }
        std::vector<RowResult> results(tasks.size());
        if (threads <= 1 || tasks.size() < 2) {
            for (size_t t = 0; t < tasks.size(); ++t) results[t] = eval_task(tasks[t]);
        } else {
            const size_t nth = std::min<size_t>(threads, tasks.size());
            std::vector<std::thread> pool;
            pool.reserve(nth);
            for (size_t w = 0; w < nth; ++w) {
                pool.emplace_back([&, w] {
                    for (size_t t = w; t < tasks.size(); t += nth) {
                        results[t] = eval_task(tasks[t]);
                    }
                });
            }
            for (auto& th : pool) th.join();
        }
        const double w = h * h;
        double added = 0.0;
        for (const RowResult& r : results) {
            for (int s = 0; s < n_tracked; ++s) {
                sum_fp[s] += r.fp[s] * w;
                sum_p[s] += r.p[s] * w;
                added += r.p[s] * w;
            }
        }
        return added;
    }

    // Extent of the bulk of the outcome density: the |mu| beyond which the
    // remaining envelope weight is negligible. Starting the shell loop from
    // the outermost retained peak instead would swallow the whole capped
    // domain in one step at small epsilon.
    double core_extent() const {
        double extent = 0.0;
        for (int l = 0; l < 4; ++l) {
            double total = 0.0;
            for (const AxisTerm& t : eng.terms_[l]) total += std::abs(t.coeff[0]);
            double tail = 0.0;
            double reach = 0.0;
            // terms_ is sorted by mu; scan outward-in from both ends.
            size_t lo = 0, hi = eng.terms_[l].size();
            while (lo < hi) {
                const AxisTerm& left = eng.terms_[l][lo];
                const AxisTerm& right = eng.terms_[l][hi - 1];
                const bool take_left = std::abs(left.mu) >= std::abs(right.mu);
                const AxisTerm& t = take_left ? left : right;
                if (tail + std::abs(t.coeff[0]) > 1e-9 * total) {
                    reach = std::abs(t.mu);
                    break;
                }
                tail += std::abs(t.coeff[0]);
                if (take_left) ++lo; else --hi;
            }
            extent = std::max(extent, reach);
        }
        return extent;
    }

    void run() {
        const double sp = eng.reduction_.sigma_prime;
        const int shell_w = std::max(1, static_cast<int>(std::lround(quad.points_per_sigma)));
        int m_init = static_cast<int>(std::ceil((core_extent() + 6.0 * std::sqrt(sp)) / h));
        m_init = std::min(m_init, std::max(1, m_cap - shell_w));
        int m_prev = -1;
        int m_cur = m_init;
        double total = 0.0;
        converged = false;
        while (true) {
            const double added = add_shell(m_prev, m_cur);
            total += added;
            if (m_prev >= 0 && total > 0.0 && std::abs(added) < quad.mass_tol * total) {
                converged = true;
                break;
            }
            if (m_cur >= m_cap) break;
            m_prev = m_cur;
            m_cur = std::min(m_cap, m_cur + shell_w);
        }
        m_final = m_cur;
    }
};

MeanFidelityResult EcEngine::mean_fidelity(const PauliVector& a_in, const QuadratureSpec& quad,
                                           int threads) const {
    GridEval ev(*this, quad, /*eigen=*/false, a_in, threads);
    ev.run();
    MeanFidelityResult r;
    r.mean_fidelity = ev.sum_fp[0];
    r.density_norm = ev.sum_p[0];
    r.half_width = ev.m_final * ev.h;
    r.spacing = ev.h;
    r.converged = ev.converged;
    return r;
}

ChannelFidelityResult EcEngine::channel_fidelity(const QuadratureSpec& quad, int threads) const {
    GridEval ev(*this, quad, /*eigen=*/true, PauliVector{}, threads);
    ev.run();
    ChannelFidelityResult r;
    double sum = 0.0;
    for (int s = 0; s < 6; ++s) {
        r.mean_fidelities[s] = ev.sum_fp[s];
        r.density_norms[s] = ev.sum_p[s];
        sum += ev.sum_fp[s];
    }
    r.channel_fidelity = sum / 6.0;
    r.half_width = ev.m_final * ev.h;
    r.spacing = ev.h;
    r.converged = ev.converged;
    return r;
}

}  // namespace gkpqec
