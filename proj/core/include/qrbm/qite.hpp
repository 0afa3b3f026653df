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
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qrbm/pauli.hpp"
#include "qrbm/statevector.hpp"

namespace qrbm {

/// Largest domain on which a QITE generator is expanded.
inline constexpr std::size_t kMaxQiteDomain = 6;

struct QiteOptions {
    std::size_t n_steps = 50;
    /// Qubits in each generator's domain; unset means the support of the term.
    std::optional<std::size_t> domain_size;
    /// Tikhonov weight relative to the mean diagonal of Re(S + S^dagger).
    double regularization = 1e-8;
    /// Shots per Pauli expectation; unset means exact inner products.
    std::optional<std::uint64_t> shot_noise;
    std::uint64_t rng_seed = 0;
    /// Compare each step and the final state against the exact non-unitary evolution.
    bool compute_fidelity = true;

    void validate() const;
};

struct QiteStepRecord {
    std::vector<std::size_t> domain;
    std::vector<double> a_coeffs;   // over the non-identity Paulis of the domain
    double c_norm = 1.0;            // ||e^{h dt} psi||^2
    double c_first_order = 1.0;     // 1 + 2 dt <h>
    double residual = 0.0;          // ||Re(S + S^dagger) a + b'||
    double imag_residual = 0.0;     // ||Im b||, discarded by the real solve
    std::optional<double> fidelity_vs_exact;
};

struct QiteLinearSystem {
    std::vector<std::size_t> domain;
    std::vector<PauliString> basis;  // full-register strings, identity excluded
    Eigen::MatrixXcd s;
    Eigen::VectorXcd b;
    double c_norm = 1.0;
    double c_first_order = 1.0;
};

/// Single-term Hamiltonians h_s in declaration order; the identity part is dropped.
/// Throws UnsupportedLocalityError for a term wider than `max_locality`.
std::vector<PauliSum> trotter_terms(const PauliSum& h, std::size_t max_locality = 2);

/// Support of `term` grown by nearest qubits up to `domain_size`.
std::vector<std::size_t> select_domain(const PauliSum& term, std::optional<std::size_t> domain_size);

/// S_IJ = <psi|s_I s_J|psi>, b_I = -i c^{-1/2} <psi|s_I h|psi>, c = ||e^{h dt} psi||^2.
/// With `rng` set, Pauli expectations are replaced by binomial estimates from `shots`.
QiteLinearSystem build_linear_system(const StateVector& psi, const PauliSum& term, double dt,
                                     std::span<const std::size_t> domain, std::optional<std::uint64_t> shots = {},
                                     std::mt19937_64* rng = nullptr);

/// Solve Re(S + S^dagger) a = -2 Re(b) with filtered-eigenvalue Tikhonov damping.
Eigen::VectorXd solve_qite_system(const QiteLinearSystem& sys, double regularization);

struct QiteStepResult {
    StateVector state;
    QiteStepRecord record;
};

/// One unitary step approximating c^{-1/2} e^{h dt} psi.
QiteStepResult qite_step(const StateVector& psi, const PauliSum& term, double dt, const QiteOptions& opts,
                         std::mt19937_64* rng = nullptr);

struct QiteResult {
    StateVector state;
    std::vector<QiteStepRecord> records;
    std::optional<double> fidelity_vs_exact;
};

/// n sweeps of QITE steps over the Trotter terms of H with dt = tau / n.
QiteResult qite_evolve(const StateVector& psi, const PauliSum& h, double tau, const QiteOptions& opts);

}  // namespace qrbm
