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

#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qrbm {

using Complex = std::complex<double>;

/// Fourth roots of unity, stored as the exponent k in i^k.
enum class Phase : std::uint8_t { kPlusOne = 0, kPlusI = 1, kMinusOne = 2, kMinusI = 3 };

constexpr Phase operator*(Phase a, Phase b) {
    return static_cast<Phase>((static_cast<unsigned>(a) + static_cast<unsigned>(b)) & 3U);
}
Complex to_complex(Phase p);

/// Tensor product of single-qubit Paulis in x/z bitmask form.
///
/// Qubit q is bit q of both masks and the q-th character (from the left) of the
/// text form. Y on q means both bits set; the operator is
/// i^{|x & z|} X^x Z^z, so every string is Hermitian.
class PauliString {
   public:
    static constexpr std::size_t kMaxQubits = 64;

    PauliString() = default;
    explicit PauliString(std::size_t n_qubits);
    PauliString(std::size_t n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

    /// Single Pauli `op` in {'I','X','Y','Z'} on `qubit`.
    static PauliString single(std::size_t n_qubits, std::size_t qubit, char op);
    /// `op` on each listed qubit.
    static PauliString on(std::size_t n_qubits, std::initializer_list<std::pair<std::size_t, char>> ops);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::uint64_t x_mask() const noexcept { return x_; }
    std::uint64_t z_mask() const noexcept { return z_; }
    bool is_identity() const noexcept { return (x_ | z_) == 0; }
    std::uint64_t support_mask() const noexcept { return x_ | z_; }
    std::size_t weight() const noexcept;
    std::vector<std::size_t> support() const;
    char at(std::size_t qubit) const;

    /// Same operator on a register of `n_qubits`, with qubit q moved to q + offset.
    PauliString embedded(std::size_t n_qubits, std::size_t offset = 0) const;

    friend bool operator==(const PauliString&, const PauliString&) = default;

   private:
    std::size_t n_qubits_ = 0;
    std::uint64_t x_ = 0;
    std::uint64_t z_ = 0;
};

struct PauliProduct {
    Phase phase;
    PauliString string;
};

/// Exact operator product p*q including its phase.
PauliProduct pauli_mul(const PauliString& p, const PauliString& q);

/// True when p and q commute.
bool commutes(const PauliString& p, const PauliString& q);

PauliString parse_pauli_text(std::string_view text);
std::string format_pauli_text(const PauliString& p);

struct PauliStringHash {
    std::size_t operator()(const PauliString& p) const noexcept;
};

struct PauliTerm {
    Complex coeff;
    PauliString string;
};

/// Weighted sum of non-identity Pauli strings plus an explicit identity coefficient.
///
/// Terms keep insertion order; adding an existing string merges coefficients in
/// place. The sum is Hermitian exactly when every coefficient is real.
class PauliSum {
   public:
    /// Relative drop tolerance applied by `prune` and the combinators.
    static constexpr double kDropTolerance = 1e-14;

    explicit PauliSum(std::size_t n_qubits = 0);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    Complex identity_coeff() const noexcept { return identity_; }
    std::span<const PauliTerm> terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty() && identity_ == Complex{}; }

    PauliSum& add(Complex coeff, const PauliString& p);
    PauliSum& add(Complex coeff, std::string_view pauli_text);
    PauliSum& add_identity(Complex coeff);

    /// Coefficient of `p` (identity_coeff for the identity string).
    Complex coeff_of(const PauliString& p) const;

    bool is_hermitian() const noexcept;
    /// Sum of |coeff| over terms, excluding the identity.
    double coeff_norm() const noexcept;
    /// Largest term weight; 0 for a pure multiple of the identity.
    std::size_t max_locality() const noexcept;

    /// Remove terms with |coeff| <= rel_tol * max|coeff| and clear imaginary
    /// parts below the same threshold.
    PauliSum& prune(double rel_tol = kDropTolerance);

    PauliSum& scale(Complex factor);

    /// Same operator on a larger register with qubit q moved to q + offset.
    PauliSum embedded(std::size_t n_qubits, std::size_t offset = 0) const;

   private:
    void reindex();

    std::size_t n_qubits_ = 0;
    Complex identity_{};
    std::vector<PauliTerm> terms_;
    std::unordered_map<PauliString, std::size_t, PauliStringHash> index_;
};

/// alpha*a + beta*b with duplicate strings merged and negligible terms dropped.
PauliSum sum_combine(const PauliSum& a, const PauliSum& b, double alpha, double beta);

/// Operator product a*b, merged and pruned.
PauliSum multiply(const PauliSum& a, const PauliSum& b);

PauliSum operator+(const PauliSum& a, const PauliSum& b);
PauliSum operator-(const PauliSum& a, const PauliSum& b);
PauliSum operator*(const PauliSum& a, const PauliSum& b);
PauliSum operator*(double s, const PauliSum& a);

/// Order-insensitive comparison of two sums within an absolute coefficient tolerance.
bool approx_equal(const PauliSum& a, const PauliSum& b, double tol = 1e-12);

}  // namespace qrbm
