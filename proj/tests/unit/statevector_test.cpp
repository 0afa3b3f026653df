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
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qrbm/error.hpp"
#include "qrbm/statevector.hpp"

namespace qrbm {
namespace {

StateVector random_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(Eigen::Index{1} << n);
    for (auto& a : v) a = Complex(g(rng), g(rng));
    return StateVector(n, v.normalized(), true);
}

PauliSum random_sum(std::size_t n, std::size_t terms, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_int_distribution<std::uint64_t> m(0, (1ULL << n) - 1);
    PauliSum h(n);
    for (std::size_t k = 0; k < terms; ++k) h.add(u(rng), PauliString(n, m(rng), m(rng)));
    return h;
}

TEST(StateVector, ConstructionAndValidation) {
    const StateVector z(3);
    EXPECT_EQ(z.dim(), 8U);
    EXPECT_EQ(z[0], Complex(1.0));
    EXPECT_TRUE(z.is_normalized());
    Eigen::VectorXcd bad = Eigen::VectorXcd::Constant(4, 1.0);
    EXPECT_THROW(StateVector(2, bad, true), ContractError);
    EXPECT_THROW(StateVector(3, bad, false), DimensionError);
    EXPECT_THROW(StateVector(StateVector::kMaxQubits + 1), CapacityError);
    StateVector u(2, bad, false);
    EXPECT_FALSE(u.is_normalized());
    u.normalize();
    EXPECT_NEAR(u.norm(), 1.0, 1e-15);
    StateVector zero(1, Eigen::VectorXcd::Zero(2), false);
    EXPECT_THROW(zero.normalize(), NumericalError);
}

TEST(StateVector, LargeNormalizedVectorAccepted) {
    std::mt19937_64 rng(18);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXcd a(Eigen::Index{1} << 20);
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = {u(rng), u(rng)};
    a /= a.norm();
    EXPECT_NO_THROW(StateVector(20, a, true));
    a *= 1.0 + 1e-6;
    EXPECT_THROW(StateVector(20, a, true), ContractError);
}

TEST(StateVector, PauliActionMatchesDense) {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 30; ++trial) {
        const StateVector psi = random_state(4, rng);
        const PauliSum h = random_sum(4, 6, rng);
        const Eigen::VectorXcd ref = oracle::sum_matrix(h) * psi.amplitudes();
        EXPECT_LT((apply_pauli_sum(h, psi).amplitudes() - ref).norm(), 1e-12);
        const PauliString p = h.terms()[0].string;
        EXPECT_LT((apply_pauli(p, psi).amplitudes() - oracle::pauli_matrix(p) * psi.amplitudes()).norm(), 1e-13);
    }
}

TEST(StateVector, ExpImagPreservesNorm) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int trial = 0; trial < 100; ++trial) {
        const StateVector psi = random_state(3, rng);
        const PauliString p(3, rng() & 7U, rng() & 7U);
        const double theta = u(rng);
        const StateVector out = apply_exp_imag(theta, p, psi);
        EXPECT_NEAR(out.norm(), 1.0, 1e-12);
        const Eigen::VectorXcd ref = oracle::expm(oracle::pauli_matrix(p), Complex(0, -theta)) * psi.amplitudes();
        EXPECT_LT((out.amplitudes() - ref).norm(), 1e-11);
    }
}

TEST(StateVector, ExpRealInverse) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 100; ++trial) {
        const StateVector psi = random_state(3, rng);
        const PauliString p(3, rng() & 7U, rng() & 7U);
        const double theta = u(rng);
        const StateVector fwd = apply_exp_real(theta, p, psi);
        EXPECT_FALSE(fwd.is_normalized());
        StateVector back = apply_exp_real(-theta, p, fwd);
        back.normalize();
        EXPECT_LT((back.amplitudes() - psi.amplitudes()).norm(), 1e-10);
    }
}

TEST(StateVector, ExpmMultiplyMatchesDense) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector psi = random_state(4, rng);
        const PauliSum h = random_sum(4, 8, rng);
        for (const Complex t : {Complex(1.0), Complex(-2.5), Complex(0, 1.7), Complex(0.3, -0.4)}) {
            const Eigen::VectorXcd ref = oracle::expm(oracle::sum_matrix(h), t) * psi.amplitudes();
            const StateVector out = expm_multiply(h, psi, t);
            EXPECT_LT((out.amplitudes() - ref).norm(), 1e-10 * ref.norm());
        }
    }
}

TEST(StateVector, ScaledExponentialAvoidsOverflow) {
    PauliSum h(2);
    h.add(400.0, "ZI").add(300.0, "XX");
    const ScaledState s = expm_multiply_scaled(h, StateVector::plus(2));
    EXPECT_TRUE(std::isfinite(s.log_norm));
    EXPECT_GT(s.log_norm, 400.0);
    EXPECT_NEAR(s.direction.norm(), 1.0, 1e-12);
    // The top level (+500) is doubly degenerate; compare against its projector.
    const oracle::Eig e = oracle::zheev(oracle::sum_matrix(h));
    const Eigen::MatrixXcd top = e.vectors.rightCols(2);
    const Eigen::VectorXcd plus = oracle::plus_vector(2);
    EXPECT_NEAR((top.adjoint() * s.direction.amplitudes()).norm(), 1.0, 1e-10);
    EXPECT_NEAR(s.log_norm, 500.0 + std::log((top.adjoint() * plus).norm()), 1e-9);
}

TEST(StateVector, ExpectationIsLinear) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const StateVector psi = random_state(3, rng);
        const PauliSum a = random_sum(3, 5, rng);
        const PauliSum b = random_sum(3, 5, rng);
        const double ea = expectation(a, psi);
        const double eb = expectation(b, psi);
        EXPECT_NEAR(expectation(sum_combine(a, b, 0.7, -1.3), psi), 0.7 * ea - 1.3 * eb, 1e-12);
        double termwise = a.identity_coeff().real();
        for (const auto& t : a.terms()) termwise += t.coeff.real() * expectation(t.string, psi);
        EXPECT_NEAR(ea, termwise, 1e-12);
        const Complex ref = psi.amplitudes().dot(oracle::sum_matrix(a) * psi.amplitudes());
        EXPECT_NEAR(ea, ref.real(), 1e-12);
    }
}

TEST(StateVector, ExpectationContracts) {
    PauliSum h(1);
    h.add(Complex(0, 1), "X");
    EXPECT_THROW(expectation(h, StateVector::plus(1)), ContractError);
    PauliSum g(1);
    g.add(1.0, "X");
    StateVector u(1, Eigen::VectorXcd::Constant(2, 1.0), false);
    EXPECT_THROW(expectation(g, u), ContractError);
    EXPECT_THROW(expectation(g, StateVector::plus(2)), DimensionError);
}

TEST(StateVector, PostselectOutcomesSumToOne) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector psi = random_state(4, rng);
        const std::vector<std::size_t> qubits = {1, 3};
        double total = 0.0;
        for (unsigned flips = 0; flips < 4; ++flips) {
            StateVector phi = psi;
            for (std::size_t k = 0; k < 2; ++k) {
                if ((flips >> k) & 1U) phi = apply_pauli(PauliString::single(4, qubits[k], 'Z'), phi);
            }
            total += postselect_plus(phi, qubits).probability;
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
        const PostselectResult r = postselect_plus(psi, qubits);
        EXPECT_EQ(r.state.n_qubits(), 2U);
        EXPECT_NEAR(r.state.norm(), 1.0, 1e-12);
    }
}

TEST(StateVector, PostselectMatchesProjection) {
    std::mt19937_64 rng(7);
    const StateVector psi = random_state(3, rng);
    const std::vector<std::size_t> q = {0};
    const PostselectResult r = postselect_plus(psi, q);
    Eigen::VectorXcd ref(4);
    for (std::uint64_t rest = 0; rest < 4; ++rest) {
        ref[static_cast<Eigen::Index>(rest)] = (psi[rest << 1] + psi[(rest << 1) | 1U]) / std::sqrt(2.0);
    }
    EXPECT_NEAR(r.probability, ref.squaredNorm(), 1e-12);
    EXPECT_NEAR(oracle::fidelity(ref, r.state.amplitudes()), 1.0, 1e-12);
    Eigen::VectorXcd minus(2);
    minus << 1, -1;
    StateVector m(1, minus.normalized(), true);
    EXPECT_THROW(postselect_plus(m, std::vector<std::size_t>{0}), PostselectionError);
}

TEST(StateVector, ApplyMatrixAndTensor) {
    std::mt19937_64 rng(8);
    const StateVector psi = random_state(3, rng);
    const Eigen::MatrixXcd u = oracle::expm(oracle::sum_matrix(random_sum(2, 4, rng)), Complex(0, 1));
    const std::vector<std::size_t> qubits = {2, 0};
    const StateVector out = apply_matrix(u, qubits, psi);
    // Local index bit 0 is qubit 2, bit 1 is qubit 0.
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(8, 8);
    for (std::uint64_t i = 0; i < 8; ++i) {
        for (std::uint64_t j = 0; j < 8; ++j) {
            if (((i ^ j) & 0b010U) != 0) continue;
            const auto li = ((i >> 2) & 1U) | ((i & 1U) << 1);
            const auto lj = ((j >> 2) & 1U) | ((j & 1U) << 1);
            full(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = u(li, lj);
        }
    }
    EXPECT_LT((out.amplitudes() - full * psi.amplitudes()).norm(), 1e-12);

    const StateVector a = random_state(1, rng);
    const StateVector b = random_state(2, rng);
    const StateVector ab = tensor_product(a, b);
    EXPECT_EQ(ab.n_qubits(), 3U);
    EXPECT_NEAR(std::abs(ab[0b101] - a[1] * b[0b10]), 0.0, 1e-15);
}

TEST(StateVector, SamplingIsSeededAndUnbiased) {
    std::mt19937_64 rng(9);
    const StateVector psi = random_state(3, rng);
    const auto c1 = sample_counts(psi, 200000, 42);
    const auto c2 = sample_counts(psi, 200000, 42);
    EXPECT_EQ(c1, c2);
    const auto p = probabilities(psi);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    std::uint64_t total = 0;
    for (const auto& [k, v] : c1) {
        total += v;
        EXPECT_NEAR(static_cast<double>(v) / 200000.0, p[k], 5e-3);
    }
    EXPECT_EQ(total, 200000U);
    EXPECT_EQ(basis_string(0b011, 3), "110");
}

TEST(StateVector, InnerAndFidelity) {
    const StateVector plus = StateVector::plus(2);
    const StateVector zero(2);
    EXPECT_NEAR(fidelity(plus, zero), 0.25, 1e-15);
    EXPECT_NEAR(std::abs(inner(plus, zero) - Complex(0.5)), 0.0, 1e-15);
    PauliSum x(2);
    x.add(1.0, "XI");
    EXPECT_NEAR(matrix_element(plus, x, plus).real(), 1.0, 1e-15);
}

}  // namespace
}  // namespace qrbm
