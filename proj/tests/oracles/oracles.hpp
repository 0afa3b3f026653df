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

// Reference implementations used only by the tests. They rebuild operators from
// Kronecker products and diagonalize with LAPACK, so they share no numerical
// code path with the library beyond the value types.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qrbm/ansatz.hpp"
#include "qrbm/pauli.hpp"

namespace qrbm::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// 2x2 matrix for 'I', 'X', 'Y' or 'Z'.
Matrix single(char op);
/// Kronecker product with qubit 0 as the least significant factor.
Matrix pauli_matrix(const PauliString& p);
Matrix sum_matrix(const PauliSum& h);

struct Eig {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;
};
/// Hermitian eigendecomposition via LAPACKE_zheev.
Eig zheev(const Matrix& h);
/// exp(t H) for Hermitian H.
Matrix expm(const Matrix& h, std::complex<double> t);

Vector plus_vector(std::size_t n);
Vector bell_vector(std::size_t n);

/// Dense H_RBM assembled term by term from the parameters.
Matrix hrbm_matrix(const QrbmParams& p);
/// Normalized <+|^M exp(H_RBM) |base, +^M>.
Vector trial_state(const QrbmParams& p);

/// 2^{-M} sum_{h in {-1,1}^M} exp(-E(v, h)) with visible bits v_i in {0,1}.
double rbm_brute_force(const ClassicalRbmParams& p, std::uint64_t v);

/// Normalized (e^{-beta H / 2} (x) I) sum_x |x>|x>.
Vector gibbs_purification(const Matrix& h, double beta);

/// Normalized e^{-tau H} psi.
Vector imaginary_time(const Matrix& h, const Vector& psi, double tau);

/// Schur-complement self-energy with the partition taken from `reference`.
Matrix self_energy(const Matrix& reference, const Matrix& h, double z, double lambda_c, Matrix* low_basis = nullptr);

double fidelity(const Vector& a, const Vector& b);

}  // namespace qrbm::oracle
