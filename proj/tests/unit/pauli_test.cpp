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

#include <random>

#include "oracles.hpp"
#include "qrbm/error.hpp"
#include "qrbm/pauli.hpp"

namespace qrbm {
namespace {

std::vector<PauliString> all_strings(std::size_t n) {
    std::vector<PauliString> out;
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
        for (std::uint64_t z = 0; z < (1ULL << n); ++z) out.emplace_back(n, x, z);
    }
    return out;
}

TEST(PauliString, TextRoundTrip) {
    const PauliString p = parse_pauli_text("XIYZ");
    EXPECT_EQ(p.n_qubits(), 4U);
    EXPECT_EQ(p.at(0), 'X');
    EXPECT_EQ(p.at(1), 'I');
    EXPECT_EQ(p.at(2), 'Y');
    EXPECT_EQ(p.at(3), 'Z');
    EXPECT_EQ(p.x_mask(), 0b0101U);
    EXPECT_EQ(p.z_mask(), 0b1100U);
    EXPECT_EQ(format_pauli_text(p), "XIYZ");
    EXPECT_EQ(p.weight(), 3U);
    EXPECT_EQ(p.support(), (std::vector<std::size_t>{0, 2, 3}));
}

TEST(PauliString, ParseErrorReportsPosition) {
    try {
        parse_pauli_text("XXQZ");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 2U);
    }
    EXPECT_THROW(parse_pauli_text(""), ParseError);
}

TEST(PauliString, SelfProductIsIdentity) {
    for (const auto& p : all_strings(3)) {
        const PauliProduct r = pauli_mul(p, p);
        EXPECT_EQ(r.phase, Phase::kPlusOne);
        EXPECT_TRUE(r.string.is_identity());
    }
}

TEST(PauliString, ProductMatchesDenseMatrices) {
    const auto strings = all_strings(2);
    for (const auto& p : strings) {
        for (const auto& q : strings) {
            const PauliProduct r = pauli_mul(p, q);
            const oracle::Matrix lhs = oracle::pauli_matrix(p) * oracle::pauli_matrix(q);
            const oracle::Matrix rhs = to_complex(r.phase) * oracle::pauli_matrix(r.string);
            EXPECT_LT((lhs - rhs).norm(), 1e-14) << format_pauli_text(p) << "*" << format_pauli_text(q);
            EXPECT_EQ(commutes(p, q), (lhs - oracle::pauli_matrix(q) * oracle::pauli_matrix(p)).norm() < 1e-14);
        }
    }
}

TEST(PauliString, ProductIsAssociativeWithPhase) {
    const auto strings = all_strings(2);
    for (const auto& p : strings) {
        for (const auto& q : strings) {
            for (const auto& r : strings) {
                const PauliProduct pq = pauli_mul(p, q);
                const PauliProduct left = pauli_mul(pq.string, r);
                const PauliProduct qr = pauli_mul(q, r);
                const PauliProduct right = pauli_mul(p, qr.string);
                EXPECT_EQ(left.string, right.string);
                EXPECT_EQ(pq.phase * left.phase, qr.phase * right.phase);
            }
        }
    }
}

TEST(PauliString, SizeMismatchThrows) {
    EXPECT_THROW(pauli_mul(PauliString(2), PauliString(3)), DimensionError);
}

TEST(PauliString, Embedded) {
    const PauliString p = parse_pauli_text("XY");
    EXPECT_EQ(format_pauli_text(p.embedded(4, 1)), "IXYI");
}

TEST(PauliSum, MergesAndKeepsOrder) {
    PauliSum h(2);
    h.add(1.0, "ZI").add(0.5, "XX").add(0.25, "ZI").add(2.0, "II");
    ASSERT_EQ(h.size(), 2U);
    EXPECT_EQ(format_pauli_text(h.terms()[0].string), "ZI");
    EXPECT_DOUBLE_EQ(h.terms()[0].coeff.real(), 1.25);
    EXPECT_DOUBLE_EQ(h.identity_coeff().real(), 2.0);
    EXPECT_DOUBLE_EQ(h.coeff_of(parse_pauli_text("XX")).real(), 0.5);
    EXPECT_EQ(h.max_locality(), 2U);
    EXPECT_DOUBLE_EQ(h.coeff_norm(), 1.75);
}

TEST(PauliSum, PruneDropsRelativeNoise) {
    PauliSum h(1);
    h.add(1.0, "X").add(1e-16, "Z");
    h.prune();
    EXPECT_EQ(h.size(), 1U);
    PauliSum c(1);
    c.add(1.0, "X").add(-1.0, "X");
    c.prune();
    EXPECT_TRUE(c.is_zero());
}

TEST(PauliSum, HermiticityPreservedByRealCombination) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    const auto strings = all_strings(2);
    for (int trial = 0; trial < 50; ++trial) {
        PauliSum a(2);
        PauliSum b(2);
        for (const auto& s : strings) {
            a.add(u(rng), s);
            b.add(u(rng), s);
        }
        ASSERT_TRUE(a.is_hermitian());
        EXPECT_TRUE(sum_combine(a, b, u(rng), u(rng)).is_hermitian());
    }
    PauliSum c(1);
    c.add(Complex(0, 1), "X");
    EXPECT_FALSE(c.is_hermitian());
}

TEST(PauliSum, MultiplyMatchesDense) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    const auto strings = all_strings(2);
    PauliSum a(2);
    PauliSum b(2);
    for (const auto& s : strings) {
        a.add(u(rng), s);
        b.add(u(rng), s);
    }
    const PauliSum ab = a * b;
    EXPECT_LT((oracle::sum_matrix(ab) - oracle::sum_matrix(a) * oracle::sum_matrix(b)).norm(), 1e-12);
    EXPECT_LT((oracle::sum_matrix(a + b) - oracle::sum_matrix(a) - oracle::sum_matrix(b)).norm(), 1e-12);
    EXPECT_LT((oracle::sum_matrix(2.0 * a - b) - 2.0 * oracle::sum_matrix(a) + oracle::sum_matrix(b)).norm(), 1e-12);
    EXPECT_TRUE(approx_equal(a + b, b + a));
}

TEST(PauliSum, CommutatorOfAnticommutingPair) {
    PauliSum x(1);
    x.add(1.0, "X");
    PauliSum y(1);
    y.add(1.0, "Y");
    const PauliSum xy = x * y;
    EXPECT_EQ(xy.size(), 1U);
    EXPECT_NEAR(std::abs(xy.coeff_of(parse_pauli_text("Z")) - Complex(0, 1)), 0.0, 1e-15);
}

}  // namespace
}  // namespace qrbm
