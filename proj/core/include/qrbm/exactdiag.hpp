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

#include <Eigen/Dense>

#include "qrbm/pauli.hpp"
#include "qrbm/statevector.hpp"

namespace qrbm {

using DenseMatrix = Eigen::MatrixXcd;

/// Largest register for which dense 2^n x 2^n matrices are formed.
inline constexpr std::size_t kMaxDenseQubits = 14;

DenseMatrix to_dense(const PauliSum& h);
DenseMatrix to_dense(const PauliString& p);

struct SpectralReport {
    Eigen::VectorXd eigenvalues;  // ascending
    DenseMatrix eigenvectors;     // column k pairs with eigenvalues[k]
    StateVector ground_state;
    double gap = 0.0;
    bool degeneracy_flag = false;
    /// Spectral norm of H, max |eigenvalue|.
    double norm = 0.0;
};

/// Ascending eigenpairs of a Hermitian matrix.
///
/// Falls back to the real symmetric embedding [[A, -B], [B, A]] of A + iB when
/// the complex QR iteration stalls on exactly repeated eigenvalues.
struct HermitianEigen {
    Eigen::VectorXd values;
    DenseMatrix vectors;
};
HermitianEigen hermitian_eigen(const DenseMatrix& h);

SpectralReport eigh(const PauliSum& h);
SpectralReport eigh(const DenseMatrix& h, std::size_t n_qubits);

/// exp(t * H) for Hermitian H via its eigendecomposition.
DenseMatrix expm_hermitian(const DenseMatrix& h, Complex t);

/// e^{-beta H} / Z.
DenseMatrix gibbs_state(const PauliSum& h, double beta);

/// (e^{-beta H/2} (x) I) 2^{-N/2} sum_x |x>|x>, normalized, on 2N qubits.
/// The first register is qubits 0..N-1.
StateVector gibbs_purification(const PauliSum& h, double beta);

/// Reduced density matrix of the first `n_keep` qubits (low bits).
DenseMatrix partial_trace_high(const StateVector& psi, std::size_t n_keep);

/// Sigma_-(z) restricted to the low subspace of a reference Hamiltonian.
struct SelfEnergy {
    DenseMatrix sigma;            // Sigma_-(z) in the low basis
    DenseMatrix low_basis;        // 2^n x d_-, orthonormal columns
    Eigen::VectorXd low_energies; // reference eigenvalues below lambda_c
    DenseMatrix h_low;            // H_{--}
    double z = 0.0;
};

/// Self-energy of `h` with Pi_- spanned by eigenvectors of `reference` below `lambda_c`.
///
/// Evaluated as H_{--} + H_{-+} (z - H_{++})^{-1} H_{+-}, which equals
/// z - G_{--}(z)^{-1}. Throws PartitionError on an empty low subspace and
/// SingularityError when z lies within 1e-8 ||H|| of the spectrum of H_{++}.
SelfEnergy self_energy(const PauliSum& reference, const PauliSum& h, double z, double lambda_c);
/// Partition taken from `h` itself.
SelfEnergy self_energy(const PauliSum& h, double z, double lambda_c);

/// B^dagger A B.
DenseMatrix restrict_to(const DenseMatrix& a, const DenseMatrix& basis);

/// Largest singular value.
double operator_norm(const DenseMatrix& a);

}  // namespace qrbm
