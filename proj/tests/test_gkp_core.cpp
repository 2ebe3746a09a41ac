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

#include "gkpqec/gkp_core.hpp"

using namespace gkpqec;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("GkpParams rejects the ideal-state limit") {
    CHECK_THROWS(GkpParams(0.0));
    CHECK_THROWS(GkpParams(-0.1));
    CHECK_NOTHROW(GkpParams(0.05));
}

TEST_CASE("squeezing level") {
    CHECK(squeezing_db(GkpParams(0.05)) == doctest::Approx(13.01).epsilon(1e-3));
    CHECK(squeezing_db(GkpParams(0.05)) > squeezing_db(GkpParams(0.1)));
    CHECK(squeezing_db(GkpParams(0.1)) > squeezing_db(GkpParams(0.2)));
}

TEST_CASE("parity classes") {
    CHECK(parity_class_of({0, 0}) == Pauli::I);
    CHECK(parity_class_of({1, 0}) == Pauli::X);
    CHECK(parity_class_of({-3, 5}) == Pauli::Y);
    CHECK(parity_class_of({0, 1}) == Pauli::Z);
    CHECK(parity_class_of({2, -1}) == Pauli::Z);
}

TEST_CASE("parity classes partition the lattice") {
    for (int m1 = -50; m1 <= 50; ++m1) {
        for (int m2 = -50; m2 <= 50; ++m2) {
            int hits = 0;
            for (Pauli k : kAllPauli) {
                if (parity_class_of({m1, m2}) == k) ++hits;
            }
            REQUIRE(hits == 1);
        }
    }
}

TEST_CASE("peak signs") {
    CHECK(sign_s(Pauli::I, {2, 4}) == 1.0);
    CHECK(sign_s(Pauli::Y, {1, 1}) == -1.0);
    CHECK(sign_s(Pauli::Z, {2, 1}) == -1.0);
    CHECK(sign_s(Pauli::X, {1, -2}) == -1.0);
    CHECK(sign_s(Pauli::X, {1, 4}) == 1.0);
    CHECK_THROWS(sign_s(Pauli::X, {0, 0}));
}

TEST_CASE("sign_phase extends sign_s") {
    for (int m1 = -7; m1 <= 7; ++m1) {
        for (int m2 = -7; m2 <= 7; ++m2) {
            const PeakIndex m{m1, m2};
            const Pauli k = parity_class_of(m);
            const auto z = sign_phase(k, m);
            CHECK(z.imag() == 0.0);
            CHECK(z.real() == doctest::Approx(sign_s(k, m)));
        }
    }
}

TEST_CASE("envelope weights") {
    const GkpParams p(0.05);
    CHECK(weight_c(p, {0, 0}) == 1.0);
    CHECK(weight_c(p, {1, 1}) == doctest::Approx(0.92453).epsilon(1e-4));
    CHECK(weight_c(p, {3, -4}) == weight_c(p, {-4, 3}));
    CHECK(weight_c(p, {2, 1}) > weight_c(p, {2, 3}));
    CHECK(weight_c(GkpParams(0.05), {2, 1}) > weight_c(GkpParams(0.1), {2, 1}));
}

TEST_CASE("peak means and covariance") {
    const GkpParams p(0.05);
    CHECK(peak_mean(p, {0, 0}).norm() == 0.0);
    CHECK(peak_mean(p, {2, 0})(0) == doctest::Approx(0.99875 * std::sqrt(kPi)).epsilon(1e-4));
    CHECK(peak_covariance(p)(0, 0) == doctest::Approx(0.0249792).epsilon(1e-5));
    CHECK(peak_covariance(p)(0, 1) == 0.0);
    CHECK(peak_covariance(GkpParams(20.0))(1, 1) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("cutoff rule matches the weight threshold") {
    const GkpParams p(0.1);
    const CutoffRule cutoff{23.0};
    for (int m1 = -40; m1 <= 40; ++m1) {
        for (int m2 = -40; m2 <= 40; ++m2) {
            const bool kept = cutoff.retains(p, {m1, m2});
            const bool above = weight_c(p, {m1, m2}) > std::exp(-23.0);
            CHECK(kept == above);
        }
    }
}

TEST_CASE("trace_sigma") {
    const CutoffRule cutoff{};
    SUBCASE("sigma_2 trace cancels exactly") {
        for (double eps : {0.01, 0.05, 0.2}) {
            const GkpParams p(eps);
            const double t2 = trace_sigma(Pauli::Y, p, cutoff);
            const double t0 = trace_sigma(Pauli::I, p, cutoff);
            CHECK(std::abs(t2) < 1e-14 * t0);
        }
    }
    SUBCASE("large epsilon saturates at the unit-envelope lattice sum") {
        // tanh(eps) -> 1, so the weights converge to exp(-pi*|m|^2/4).
        double theta = 0.0;
        for (int m1 = -10; m1 <= 10; m1 += 2) {
            for (int m2 = -10; m2 <= 10; m2 += 2) {
                theta += std::exp(-kPi / 4.0 * (m1 * m1 + m2 * m2));
            }
        }
        CHECK(trace_sigma(Pauli::I, GkpParams(50.0), cutoff) ==
              doctest::Approx(theta).epsilon(1e-9));
    }
    SUBCASE("X and Z traces vanish relative to I as epsilon decreases") {
        const double r1 = std::abs(trace_sigma(Pauli::X, GkpParams(0.2), cutoff)) /
                          trace_sigma(Pauli::I, GkpParams(0.2), cutoff);
        const double r2 = std::abs(trace_sigma(Pauli::X, GkpParams(0.05), cutoff)) /
                          trace_sigma(Pauli::I, GkpParams(0.05), cutoff);
        CHECK(r1 < 1.0);
        CHECK(r2 < r1);
        CHECK(std::abs(trace_sigma(Pauli::Z, GkpParams(0.05), cutoff)) <
              std::abs(trace_sigma(Pauli::Z, GkpParams(0.2), cutoff)));
    }
}

TEST_CASE("clamp rule") {
    CHECK_NOTHROW(clamp_pauli_vector({0.5, 0.5, 0.5}));
    const PauliVector v = clamp_pauli_vector({0.0, 0.0, 1.0 + 5e-10});
    CHECK(v.squared_norm() <= 1.0 + 1e-15);
    CHECK_THROWS(clamp_pauli_vector({0.0, 0.0, 1.001}));
}

TEST_CASE("normalization factor") {
    const GkpParams p(0.1);
    const CutoffRule cutoff{};
    const double t0 = trace_sigma(Pauli::I, p, cutoff);
    CHECK(normalization_factor({0, 1, 0}, p, cutoff) == doctest::Approx(t0).epsilon(1e-12));
    CHECK(normalization_factor({0, 0, 0}, p, cutoff) == doctest::Approx(t0).epsilon(1e-12));
    CHECK(normalization_factor({0, 0, 1}, p, cutoff) ==
          doctest::Approx(t0 + trace_sigma(Pauli::Z, p, cutoff)).epsilon(1e-12));
}

TEST_CASE("logical fidelity") {
    CHECK(logical_fidelity({0, 0, 1}, {0, 0, 1}) == doctest::Approx(1.0));
    CHECK(logical_fidelity({0, 0, 1}, {0, 0, -1}) == doctest::Approx(0.0));
    CHECK(logical_fidelity({0, 0, 0}, {0, 0, 0}) == doctest::Approx(1.0));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-0.57, 0.57);
    for (int t = 0; t < 200; ++t) {
        const PauliVector a{u(rng), u(rng), u(rng)};
        const PauliVector b{u(rng), u(rng), u(rng)};
        CHECK(logical_fidelity(a, b) == doctest::Approx(logical_fidelity(b, a)).epsilon(1e-14));
        CHECK(logical_fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("wigner values") {
    const CutoffRule cutoff{};
    const GkpParams p(0.1);
    CHECK(wigner_value(Pauli::I, p, 0.0, 0.0, cutoff) > 0.0);
    CHECK(std::abs(wigner_value(Pauli::Y, p, 0.0, 0.0, cutoff)) < 1e-12);
    // Z peak signs follow (-1)^(m1/2): positive at (0,1), negative at (2,1).
    const Eigen::Vector2d mu_pos = peak_mean(p, {0, 1});
    CHECK(wigner_value(Pauli::Z, p, mu_pos(0), mu_pos(1), cutoff) > 0.0);
    const Eigen::Vector2d mu_neg = peak_mean(p, {2, 1});
    CHECK(wigner_value(Pauli::Z, p, mu_neg(0), mu_neg(1), cutoff) < 0.0);
}

TEST_CASE("signed gaussian mixtures") {
    SignedGaussianMixture mix;
    Eigen::VectorXd mu(2);
    mu << 0.0, 0.0;
    mix.add_term(1.0, mu, 0.5 * Eigen::MatrixXd::Identity(2, 2));
    CHECK(mix.value(mu) == doctest::Approx(1.0 / (2.0 * kPi * 0.5)).epsilon(1e-12));
    Eigen::VectorXd mu2(3);
    mu2 << 0.0, 0.0, 0.0;
    CHECK_THROWS(mix.add_term(1.0, mu2, Eigen::MatrixXd::Identity(3, 3)));
    CHECK(gaussian_density_1d(0.3, 0.1, 0.2) ==
          doctest::Approx(std::exp(-0.04 / 0.4) / std::sqrt(2.0 * kPi * 0.2)).epsilon(1e-12));
}
