// Copyright 2026 The QRBM Authors
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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qrbm/error.hpp"
#include "qrbm/hamiltonians.hpp"
#include "qrbm/qite.hpp"

namespace qrbm {
namespace {

StateVector random_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(Eigen::Index{1} << n);
    for (auto& a : v) a = Complex(g(rng), g(rng));
    return StateVector(n, v.normalized(), true);
}

PauliSum single_term(std::size_t n, double c, const char* text) {
    PauliSum h(n);
    h.add(c, text);
    return h;
}

double infidelity(const PauliSum& h, std::size_t steps, std::optional<std::size_t> domain) {
    QiteOptions o;
    o.n_steps = steps;
    o.domain_size = domain;
    const QiteResult r = qite_evolve(StateVector::plus(h.n_qubits()), h, 1.0, o);
    return 1.0 - *r.fidelity_vs_exact;
}

TEST(Qite, OptionsValidation) {
    QiteOptions o;
    o.n_steps = 0;
    EXPECT_THROW(o.validate(), ContractError);
    o.n_steps = 1;
    o.domain_size = 7;
    EXPECT_THROW(o.validate(), ContractError);
    o.domain_size = 2;
    o.shot_noise = 0;
    EXPECT_THROW(o.validate(), ContractError);
}

TEST(Qite, TrotterTermsAndLocality) {
    const PauliSum h = parse_pauli_sum("qubits 3\n0.5 III\n1 ZZI\n0.2 XII\n");
    const auto terms = trotter_terms(h);
    ASSERT_EQ(terms.size(), 2U);
    EXPECT_EQ(format_pauli_text(terms[0].terms()[0].string), "ZZI");
    EXPECT_THROW(trotter_terms(parse_pauli_sum("qubits 3\n1 ZZZ\n")), UnsupportedLocalityError);
    EXPECT_NO_THROW(trotter_terms(parse_pauli_sum("qubits 3\n1 ZZZ\n"), 3));
}

TEST(Qite, DomainGrowsByNearestQubits) {
    const PauliSum t = single_term(5, 1.0, "IIXII");
    EXPECT_EQ(select_domain(t, std::nullopt), (std::vector<std::size_t>{2}));
    EXPECT_EQ(select_domain(t, 3), (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_EQ(select_domain(single_term(5, 1.0, "XIIII"), 2), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(select_domain(t, 6).size(), 5U);
}

TEST(Qite, LinearSystemStructure) {
    std::mt19937_64 rng(1);
    const StateVector psi = random_state(3, rng);
    const PauliSum t = single_term(3, 0.7, "ZXI");
    const std::vector<std::size_t> dom = {0, 1};
    const QiteLinearSystem sys = build_linear_system(psi, t, 0.05, dom);
    ASSERT_EQ(sys.basis.size(), 15U);
    EXPECT_LT((sys.s - sys.s.adjoint()).norm(), 1e-12);
    for (Eigen::Index i = 0; i < sys.s.rows(); ++i) EXPECT_NEAR(sys.s(i, i).real(), 1.0, 1e-12);
    const Eigen::VectorXcd ev = oracle::expm(oracle::sum_matrix(t), 0.05) * psi.amplitudes();
    EXPECT_NEAR(sys.c_norm, ev.squaredNorm(), 1e-12);
    EXPECT_NEAR(sys.c_first_order, 1.0 + 2.0 * 0.05 * expectation(t, psi), 1e-12);
}

TEST(Qite, SingleQubitGeneratorSign) {
    // e^{Z dt}|+> tilts toward |0>; the generator is -Y.
    QiteOptions o;
    const QiteStepResult r = qite_step(StateVector::plus(1), single_term(1, 1.0, "Z"), 0.01, o);
    ASSERT_EQ(r.record.a_coeffs.size(), 3U);
    EXPECT_NEAR(r.record.a_coeffs[0], 0.0, 1e-8);
    EXPECT_NEAR(r.record.a_coeffs[1], 0.0, 1e-8);
    EXPECT_NEAR(r.record.a_coeffs[2], -1.0, 1e-3);
}

TEST(Qite, StepIsNormalizedAndAccurate) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector psi = random_state(3, rng);
        const PauliSum t = single_term(3, 0.8, trial % 2 ? "XZI" : "IIY");
        QiteOptions o;
        o.domain_size = 3;
        const QiteStepResult r = qite_step(psi, t, 0.01, o);
        EXPECT_NEAR(r.state.norm(), 1.0, 1e-12);
        EXPECT_GE(r.record.residual, 0.0);
        EXPECT_GT(r.record.c_norm, 0.0);
        const oracle::Vector ref = oracle::imaginary_time(oracle::sum_matrix(t), psi.amplitudes(), -0.01);
        EXPECT_GT(oracle::fidelity(ref, r.state.amplitudes()), 1.0 - 1e-6);
    }
}

TEST(Qite, ResidualWeaklyDecreasesWithDomain) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const StateVector psi = random_state(4, rng);
        const PauliSum t = single_term(4, 1.0, "IZXI");
        double prev = INFINITY;
        for (std::size_t d = 2; d <= 4; ++d) {
            const auto dom = select_domain(t, d);
            const QiteLinearSystem sys = build_linear_system(psi, t, 0.02, dom);
            const Eigen::VectorXd a = solve_qite_system(sys, 1e-12);
            const Eigen::MatrixXd m = (sys.s + sys.s.adjoint()).real();
            const double res = (m * a + 2.0 * sys.b.real()).norm();
            EXPECT_LE(res, prev + 1e-9) << "domain " << d;
            prev = res;
        }
    }
}

TEST(Qite, MatchesExactEvolution) {
    const PauliSum h = parse_pauli_sum("qubits 2\n-1 ZZ\n0.4 XX\n0.3 ZI\n");
    QiteOptions o;
    o.n_steps = 100;
    o.domain_size = 2;
    const QiteResult r = qite_evolve(StateVector::plus(2), h, 1.0, o);
    const oracle::Vector ref = oracle::imaginary_time(oracle::sum_matrix(h), oracle::plus_vector(2), -1.0);
    EXPECT_NEAR(*r.fidelity_vs_exact, oracle::fidelity(ref, r.state.amplitudes()), 1e-12);
    EXPECT_GT(*r.fidelity_vs_exact, 1.0 - 1e-5);
}

TEST(Qite, InfidelityScalesQuadraticallyInSteps) {
    const std::vector<std::pair<const char*, std::optional<std::size_t>>> family = {
        {"qubits 1\n1 Z\n0.5 X\n0.2 Y\n", std::nullopt},
        {"qubits 2\n1 ZZ\n0.5 XI\n0.3 IX\n0.2 YY\n", 2},
        {"qubits 2\n-1 ZZ\n0.4 XX\n0.3 ZI\n", 2},
    };
    for (const auto& [text, dom] : family) {
        const PauliSum h = parse_pauli_sum(text);
        const double a = infidelity(h, 50, dom);
        const double b = infidelity(h, 200, dom);
        const double order = -std::log(b / a) / std::log(4.0);
        EXPECT_GE(order, 1.6) << text;
        EXPECT_LE(order, 2.4) << text;
    }
}

TEST(Qite, DeterministicWithoutShotNoise) {
    const PauliSum h = haldane_chain({3, 1.0, 0.5, 0.3});
    QiteOptions o;
    o.n_steps = 10;
    o.domain_size = 3;
    const QiteResult a = qite_evolve(StateVector::plus(3), h, 0.5, o);
    const QiteResult b = qite_evolve(StateVector::plus(3), h, 0.5, o);
    EXPECT_EQ(a.state.amplitudes(), b.state.amplitudes());
}

TEST(Qite, ShotNoiseIsSeeded) {
    const PauliSum h = parse_pauli_sum("qubits 2\n1 ZZ\n0.5 XI\n");
    QiteOptions o;
    o.n_steps = 5;
    o.shot_noise = 1000;
    o.rng_seed = 7;
    const QiteResult a = qite_evolve(StateVector::plus(2), h, 0.5, o);
    const QiteResult b = qite_evolve(StateVector::plus(2), h, 0.5, o);
    EXPECT_EQ(a.state.amplitudes(), b.state.amplitudes());
    o.rng_seed = 8;
    const QiteResult c = qite_evolve(StateVector::plus(2), h, 0.5, o);
    EXPECT_NE(a.state.amplitudes(), c.state.amplitudes());
    EXPECT_GT(*a.fidelity_vs_exact, 0.9);
}

}  // namespace
}  // namespace qrbm
