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

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrbm/pauli.hpp"

namespace qrbm {

/// Dense amplitudes over n qubits; qubit q is bit q of the basis index.
///
/// The normalized flag is a promise made by whoever built the state. Non-unitary
/// operations clear it; `normalize` sets it.
class StateVector {
   public:
    static constexpr std::size_t kMaxQubits = 22;

    StateVector() = default;
    /// |0...0> on n qubits.
    explicit StateVector(std::size_t n_qubits);
    StateVector(std::size_t n_qubits, Eigen::VectorXcd amplitudes, bool normalized);

    static StateVector basis(std::size_t n_qubits, std::uint64_t index);
    /// |+>^n.
    static StateVector plus(std::size_t n_qubits);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
    const Eigen::VectorXcd& amplitudes() const noexcept { return amps_; }
    Eigen::VectorXcd& mutable_amplitudes() noexcept { return amps_; }
    Complex operator[](std::uint64_t i) const { return amps_[static_cast<Eigen::Index>(i)]; }
    bool is_normalized() const noexcept { return normalized_; }

    double norm() const { return amps_.norm(); }
    /// Rescale to unit norm. Throws NumericalError on a zero or non-finite vector.
    StateVector& normalize();
    StateVector normalized() const;
    void mark_unnormalized() noexcept { normalized_ = false; }

   private:
    std::size_t n_qubits_ = 0;
    Eigen::VectorXcd amps_;
    bool normalized_ = false;
};

StateVector apply_pauli(const PauliString& p, const StateVector& psi);
/// H psi for an arbitrary (possibly non-Hermitian) sum; result unnormalized.
StateVector apply_pauli_sum(const PauliSum& h, const StateVector& psi);

/// e^{theta P} psi = cosh(theta) psi + sinh(theta) P psi. Unnormalized.
StateVector apply_exp_real(double theta, const PauliString& p, const StateVector& psi);
/// e^{-i theta P} psi = cos(theta) psi - i sin(theta) P psi.
StateVector apply_exp_imag(double theta, const PauliString& p, const StateVector& psi);

/// Result of e^{tH} psi kept as a unit-norm direction and the log of its length.
struct ScaledState {
    StateVector direction;
    double log_norm = 0.0;
};

/// e^{tH} psi by scaled Taylor series, never forming a matrix.
ScaledState expm_multiply_scaled(const PauliSum& h, const StateVector& psi, Complex t = 1.0);
StateVector expm_multiply(const PauliSum& h, const StateVector& psi, Complex t = 1.0);

/// <psi|H|psi> for Hermitian H and normalized psi.
double expectation(const PauliSum& h, const StateVector& psi);
/// <psi|P|psi>; normalization is not required.
double expectation(const PauliString& p, const StateVector& psi);
/// <psi|A|phi> for any Pauli sum.
Complex matrix_element(const StateVector& psi, const PauliSum& a, const StateVector& phi);

Complex inner(const StateVector& psi, const StateVector& phi);
/// |<psi|phi>|^2 / (|psi|^2 |phi|^2).
double fidelity(const StateVector& psi, const StateVector& phi);

struct PostselectResult {
    StateVector state;
    double probability = 0.0;
};

/// Project `qubits` onto <+| and renormalize. Remaining qubits keep their order.
/// `probability` is relative to the squared norm of psi.
PostselectResult postselect_plus(const StateVector& psi, std::span<const std::size_t> qubits);

/// Apply a 2^k x 2^k matrix on `qubits`; qubits[0] is the lowest bit of the local index.
StateVector apply_matrix(const Eigen::MatrixXcd& u, std::span<const std::size_t> qubits, const StateVector& psi);

/// a on the low qubits, b on the high qubits.
StateVector tensor_product(const StateVector& a, const StateVector& b);

/// |a_i|^2 / |psi|^2.
std::vector<double> probabilities(const StateVector& psi);

/// Multinomial sample of measurement outcomes, keyed by basis index.
std::map<std::uint64_t, std::uint64_t> sample_counts(const StateVector& psi, std::uint64_t shots,
                                                     std::uint64_t rng_seed);

/// Basis index as text, qubit 0 leftmost.
std::string basis_string(std::uint64_t index, std::size_t n_qubits);

}  // namespace qrbm
