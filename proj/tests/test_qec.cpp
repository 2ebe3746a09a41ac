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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "gkpqec/oracle.hpp"
#include "gkpqec/qec.hpp"

using namespace gkpqec;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("transformation tables") {
    CHECK(table_l(0, 2) == std::pair<int, int>{3, 3});
    CHECK(table_l(0, 0) == std::pair<int, int>{0, 0});
    CHECK(table_l(2, 3) == std::pair<int, int>{1, 2});
    CHECK(table_lprime(0, 2) == std::pair<int, int>{1, 1});
    CHECK(table_lprime(0, 0) == std::pair<int, int>{0, 0});
    CHECK(table_lprime(3, 3) == std::pair<int, int>{2, 0});
    CHECK_THROWS(table_l(4, 0));
    CHECK_THROWS(table_lprime(0, -1));

    SUBCASE("table_l is a bijection on the 16 index pairs") {
        std::set<std::pair<int, int>> outputs;
        for (int k1 = 0; k1 < 4; ++k1) {
            for (int k2 = 0; k2 < 4; ++k2) {
                outputs.insert(table_l(k1, k2));
            }
        }
        CHECK(outputs.size() == 16);
    }
}

TEST_CASE("sign choice flip vector") {
    const SignChoice s{+1, -1};
    const auto f = s.flip_vector();
    CHECK(f[0] * f[2] == f[1]);
    CHECK(ideal_pauli({0, 0, 1}, {+1, +1}).a3 == 1.0);
    CHECK(ideal_pauli({0, 0, 1}, {+1, -1}).a3 == -1.0);
    const PauliVector v = ideal_pauli({0.5, 0.5, 0.5}, {-1, -1});
    CHECK(v.a1 == -0.5);
    CHECK(v.a2 == 0.5);
    CHECK(v.a3 == -0.5);
}

TEST_CASE("g functions") {
    const EcEngine eng(GkpParams(0.2), ChannelParams::identity());
    SUBCASE("g_00 is positive at the origin") {
        CHECK(eng.g_function(0, 0, 0.0).real() > 0.0);
    }
    SUBCASE("purely real or purely imaginary, with conjugate reflection") {
        // n -> -n maps mu -> -mu and conjugates the i^e phases, so
        // g(-x) = conj(g(x)): real g functions are even, imaginary ones odd.
        for (int l = 0; l < 4; ++l) {
            for (int lp = 0; lp < 4; ++lp) {
                for (double x : {0.0, 0.37, 1.21}) {
                    const auto zp = eng.g_function(l, lp, x);
                    const auto zm = eng.g_function(l, lp, -x);
                    CHECK(std::min(std::abs(zp.real()), std::abs(zp.imag())) < 1e-12);
                    CHECK(std::abs(zp - std::conj(zm)) < 1e-12);
                }
            }
        }
    }
    SUBCASE("g_22 is real and even, nonzero at the origin") {
        const auto z = eng.g_function(2, 2, 0.0);
        CHECK(std::abs(z.imag()) < 1e-12);
        CHECK(z.real() == doctest::Approx(2.0184).epsilon(1e-3));
    }
    SUBCASE("g_00 integrates to the summed class-0 weights") {
        const CutoffRule cutoff{};
        const GkpParams p(0.2);
        double weights = 0.0;
        for (const PeakIndex& n : retained_indices(Pauli::I, p, cutoff)) {
            weights += weight_c(p, n);
        }
        const double h = 0.01;
        double integral = 0.0;
        for (double x = -14.0; x <= 14.0; x += h) {
            integral += eng.g_function(0, 0, x).real() * h;
        }
        CHECK(integral == doctest::Approx(weights).epsilon(1e-9));
    }
    SUBCASE("agrees with a direct lattice sum") {
        const CutoffRule cutoff{};
        const GkpParams p(0.2);
        const ChannelParams ch(0.8, 1.25);
        const EcEngine e2(p, ch);
        const HomodyneReduction red = homodyne_reduced_params(p, ch);
        for (int l = 0; l < 4; ++l) {
            for (int lp = 0; lp < 4; ++lp) {
                for (double x : {-0.9, 0.0, 0.63, 2.4}) {
                    std::complex<double> direct = 0.0;
                    for (const PeakIndex& n : retained_indices(pauli_from_index(l), p, cutoff)) {
                        direct += weight_c(p, n) * sign_phase(pauli_from_index(lp), n) *
                                  gaussian_density_1d(x, red.mu(n.m1, n.m2), red.sigma_prime);
                    }
                    CHECK(std::abs(e2.g_function(l, lp, x) - direct) <
                          1e-11 * (1.0 + std::abs(direct)));
                }
            }
        }
    }
}

TEST_CASE("lambda vector") {
    const GkpParams p(0.2);
    const ChannelParams ch(0.8, 1.25);
    const EcEngine eng(p, ch);
    SUBCASE("affine in the input vector") {
        const MeasurementOutcome o{0.43, -1.17};
        const PauliVector a{0.3, -0.2, 0.4};
        const PauliVector b{-0.1, 0.5, 0.2};
        const PauliVector mid{(a.a1 + b.a1) / 2, (a.a2 + b.a2) / 2, (a.a3 + b.a3) / 2};
        for (int k2 = 0; k2 < 4; ++k2) {
            const double la = eng.lambda_vector(o, a)[k2] *
                              normalization_factor(a, p, CutoffRule{});
            const double lb = eng.lambda_vector(o, b)[k2] *
                              normalization_factor(b, p, CutoffRule{});
            const double lm = eng.lambda_vector(o, mid)[k2] *
                              normalization_factor(mid, p, CutoffRule{});
            CHECK(lm == doctest::Approx((la + lb) / 2.0).epsilon(1e-10));
        }
    }
    SUBCASE("lossless Z eigenstate is approximately preserved at the central outcome") {
        const EcEngine lossless(p, ChannelParams::identity());
        const LambdaVector lv = lossless.lambda_vector({0.0, 0.0}, {0, 0, 1});
        const PauliVector a_out = lossless.output_pauli(lv);
        CHECK(std::abs(a_out.a1) < 0.1);
        CHECK(std::abs(a_out.a2) < 0.1);
        CHECK(a_out.a3 > 0.9);
        CHECK(a_out.squared_norm() <= 1.0 + 1e-9);
    }
    SUBCASE("oracle spot check") {
        const CutoffRule cutoff{};
        const oracle::NaiveLambdaContext ctx(p, ch, cutoff);
        const PauliVector a{0.2, 0.1, -0.6};
        for (const MeasurementOutcome o : {MeasurementOutcome{0.31, -0.77},
                                           MeasurementOutcome{-2.1, 1.4}}) {
            const LambdaVector lv = eng.lambda_vector(o, a);
            for (int k2 = 0; k2 < 4; ++k2) {
                const double ref = ctx.lambda(k2, o, a);
                CHECK(std::abs(lv[k2] - ref) <= 1e-8 * std::abs(ref) + 1e-12);
            }
        }
    }
}

TEST_CASE("output pauli and density") {
    const EcEngine eng(GkpParams(0.2), ChannelParams::identity());
    SUBCASE("proportionality") {
        LambdaVector lv;
        lv.lambda = {0.7, 0.0, 0.0, 0.7};
        const PauliVector a = eng.output_pauli(lv);
        CHECK(a.a1 == 0.0);
        CHECK(a.a3 == doctest::Approx(1.0));
        lv.lambda = {0.7, 0.0, 0.0, 0.0};
        CHECK(eng.output_pauli(lv).squared_norm() == 0.0);
        lv.lambda = {0.0, 0.0, 0.0, 0.1};
        CHECK_THROWS(eng.output_pauli(lv));
    }
    SUBCASE("density ignores the Y component") {
        LambdaVector lv;
        lv.lambda = {0.4, 0.1, 0.0, 0.2};
        const double p1 = eng.outcome_density(lv);
        lv.lambda[2] = 5.0;
        CHECK(eng.outcome_density(lv) == doctest::Approx(p1).epsilon(1e-12));
    }
    SUBCASE("physicality over random outcomes") {
        const EcEngine e2(GkpParams(0.05), ChannelParams::loss_only(0.8));
        const EcEngine e3(GkpParams(0.05), ChannelParams::pre_amplified(0.8));
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-4.0, 4.0);
        for (int t = 0; t < 500; ++t) {
            const MeasurementOutcome o{u(rng), u(rng)};
            for (const EcEngine* e : {&e2, &e3}) {
                const LambdaVector lv = e->lambda_vector(o, {0, 0, 1});
                const PauliVector a = e->output_pauli(lv);
                CHECK(a.squared_norm() <= 1.0 + 1e-9);
                CHECK(e->outcome_density(lv) >= -1e-10);
            }
        }
    }
}

TEST_CASE("decoder") {
    const EcEngine eng(GkpParams(0.1), ChannelParams::identity());
    SUBCASE("identity correction at the central outcome") {
        CHECK(eng.decoder_sign({0.0, 0.0}) == SignChoice{+1, +1});
    }
    SUBCASE("sign flips at the half-period outcome") {
        // A logical displacement of sqrt(pi) on the input shifts the measured
        // quadratures by sqrt(pi)/sqrt(2) through the balanced beamsplitter,
        // so the logical period in outcome space is sqrt(2 pi) and the
        // decision regions swap at its midpoint.
        const double half = std::sqrt(kPi) / std::sqrt(2.0);
        const SignChoice c0 = eng.decoder_sign({0.0, 0.0});
        const SignChoice cq = eng.decoder_sign({half, 0.0});
        const SignChoice cp = eng.decoder_sign({0.0, half});
        CHECK(cq.s_z == -c0.s_z);
        CHECK(cq.s_x == c0.s_x);
        CHECK(cp.s_x == -c0.s_x);
        CHECK(cp.s_z == c0.s_z);
    }
    SUBCASE("periodicity in both quadratures") {
        const double period = std::sqrt(2.0 * kPi);
        for (double q : {0.13, 0.41}) {
            for (double pm : {-0.22, 0.35}) {
                const SignChoice base = eng.decoder_sign({q, pm});
                CHECK(eng.decoder_sign({q + period, pm}) == base);
                CHECK(eng.decoder_sign({q, pm + period}) == base);
            }
        }
    }
}

TEST_CASE("in-out fidelity") {
    SUBCASE("lossless central outcome improves with smaller epsilon") {
        double prev = 0.0;
        for (double eps : {0.3, 0.1, 0.05}) {
            const EcEngine eng(GkpParams(eps), ChannelParams::identity());
            const double f = eng.in_out_fidelity({0.0, 0.0}, {0, 0, 1});
            CHECK(f > prev);
            prev = f;
        }
        CHECK(prev > 0.99);
    }
    SUBCASE("definition unfolds") {
        const EcEngine eng(GkpParams(0.2), ChannelParams::loss_only(0.9));
        const MeasurementOutcome o{0.4, -0.3};
        const PauliVector a{0.1, -0.3, 0.5};
        const double f = eng.in_out_fidelity(o, a);
        const PauliVector out = eng.output_pauli(eng.lambda_vector(o, a));
        const PauliVector ideal = ideal_pauli(a, eng.decoder_sign(o));
        CHECK(f == doctest::Approx(logical_fidelity(out, ideal)).epsilon(1e-14));
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
}

TEST_CASE("mean fidelity symmetry and bounds") {
    const EcEngine eng(GkpParams(0.2), ChannelParams::identity());
    QuadratureSpec quad;
    const MeanFidelityResult fz = eng.mean_fidelity({0, 0, 1}, quad);
    const MeanFidelityResult fzm = eng.mean_fidelity({0, 0, -1}, quad);
    CHECK(fz.converged);
    // The +1 and -1 eigenstates are not exactly equivalent at finite epsilon:
    // the envelope gives Tr(sigma_1), Tr(sigma_3) > 0, which biases the code
    // toward the +1 states. The gap scales like the squared trace ratio and
    // shrinks rapidly as epsilon decreases.
    CHECK(fz.mean_fidelity > fzm.mean_fidelity);
    CHECK(fz.mean_fidelity == doctest::Approx(fzm.mean_fidelity).epsilon(5e-3));
    CHECK(fz.mean_fidelity <= 1.0 + 1e-9);
    CHECK(fz.density_norm == doctest::Approx(1.0).epsilon(1e-5));
    // Tr(sigma_2) = 0 makes the Y pair exactly symmetric.
    const MeanFidelityResult fy = eng.mean_fidelity({0, 1, 0}, quad);
    const MeanFidelityResult fym = eng.mean_fidelity({0, -1, 0}, quad);
    CHECK(fy.mean_fidelity == doctest::Approx(fym.mean_fidelity).epsilon(1e-12));
    // The smaller-epsilon gap collapses by orders of magnitude.
    const EcEngine fine(GkpParams(0.1), ChannelParams::identity());
    const double gap01 = fine.mean_fidelity({0, 0, 1}, quad).mean_fidelity -
                         fine.mean_fidelity({0, 0, -1}, quad).mean_fidelity;
    CHECK(std::abs(gap01) < 1e-4);
}

TEST_CASE("channel fidelity") {
    QuadratureSpec quad;
    SUBCASE("matches the mean over eigenstates and is thread independent") {
        const EcEngine eng(GkpParams(0.2), ChannelParams::loss_only(0.9));
        const ChannelFidelityResult r1 = eng.channel_fidelity(quad, 1);
        const ChannelFidelityResult r4 = eng.channel_fidelity(quad, 4);
        CHECK(r1.channel_fidelity == r4.channel_fidelity);
        double mean = 0.0;
        for (const PauliVector& a : pauli_eigenstates()) {
            mean += eng.mean_fidelity(a, quad).mean_fidelity;
        }
        CHECK(r1.channel_fidelity == doctest::Approx(mean / 6.0).epsilon(1e-12));
    }
    SUBCASE("large epsilon destroys logical information") {
        const EcEngine eng(GkpParams(1.0), ChannelParams::identity());
        CHECK(eng.channel_fidelity(quad).channel_fidelity < 0.9);
    }
    SUBCASE("quadrature spec validation") {
        const EcEngine eng(GkpParams(0.2), ChannelParams::identity());
        QuadratureSpec bad;
        bad.points_per_sigma = 4.0;
        CHECK_THROWS(eng.channel_fidelity(bad));
    }
}
