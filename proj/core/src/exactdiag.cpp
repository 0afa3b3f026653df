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

#include "qrbm/exactdiag.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include "qrbm/error.hpp"

namespace qrbm {

namespace {

void check_dense(std::size_t n) {
    if (n > kMaxDenseQubits) {
        throw CapacityError("dense matrices limited to " + std::to_string(kMaxDenseQubits) + " qubits, got " +
                            std::to_string(n));
    }
}

void add_pauli(DenseMatrix& m, Complex coeff, const PauliString& p) {
    const std::uint64_t x = p.x_mask();
    const std::uint64_t z = p.z_mask();
    const Complex c = coeff * to_complex(static_cast<Phase>(std::popcount(x & z) & 3));
    const auto dim = static_cast<std::uint64_t>(m.rows());
    for (std::uint64_t i = 0; i < dim; ++i) {
        m(static_cast<Eigen::Index>(i ^ x), static_cast<Eigen::Index>(i)) += (std::popcount(z & i) & 1) ? -c : c;
    }
}

}  // namespace

DenseMatrix to_dense(const PauliSum& h) {
    check_dense(h.n_qubits());
    const Eigen::Index dim = Eigen::Index{1} << h.n_qubits();
    DenseMatrix m = DenseMatrix::Zero(dim, dim);
    m.diagonal().setConstant(h.identity_coeff());
    for (const auto& t : h.terms()) add_pauli(m, t.coeff, t.string);
    return m;
}

DenseMatrix to_dense(const PauliString& p) {
    check_dense(p.n_qubits());
    const Eigen::Index dim = Eigen::Index{1} << p.n_qubits();
    DenseMatrix m = DenseMatrix::Zero(dim, dim);
    add_pauli(m, 1.0, p);
    return m;
}

HermitianEigen hermitian_eigen(const DenseMatrix& h) {
    if (h.rows() != h.cols()) throw DimensionError("hermitian_eigen: matrix is not square");
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(h);
    if (es.info() == Eigen::Success) return {es.eigenvalues(), es.eigenvectors()};

    const Eigen::Index n = h.rows();
    Eigen::MatrixXd r(2 * n, 2 * n);
    r << h.real(), -h.imag(), h.imag(), h.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(r);
    if (er.info() != Eigen::Success) throw NumericalError("hermitian_eigen: eigensolver did not converge");

    // Each eigenvalue appears twice; [u; v] maps to the eigenvector u + iv and its
    // partner to i(u + iv). Keep one of each pair by orthogonalizing in order.
    HermitianEigen out{Eigen::VectorXd(n), DenseMatrix(n, n)};
    Eigen::Index kept = 0;
    for (Eigen::Index k = 0; k < 2 * n && kept < n; ++k) {
        Eigen::VectorXcd c = er.eigenvectors().col(k).head(n).cast<Complex>() +
                             Complex(0.0, 1.0) * er.eigenvectors().col(k).tail(n).cast<Complex>();
        for (int pass = 0; pass < 2; ++pass) {
            c -= out.vectors.leftCols(kept) * (out.vectors.leftCols(kept).adjoint() * c);
        }
        const double norm = c.norm();
        if (norm < 0.5 / std::sqrt(2.0)) continue;
        out.vectors.col(kept) = c / norm;
        out.values[kept] = (out.vectors.col(kept).adjoint() * h * out.vectors.col(kept)).real()(0, 0);
        ++kept;
    }
    if (kept != n) throw NumericalError("hermitian_eigen: eigensolver did not converge");
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return out.values[a] < out.values[b]; });
    HermitianEigen sorted{Eigen::VectorXd(n), DenseMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        sorted.values[k] = out.values[order[static_cast<std::size_t>(k)]];
        sorted.vectors.col(k) = out.vectors.col(order[static_cast<std::size_t>(k)]);
    }
    out = std::move(sorted);
    const double scale = std::max(out.values.cwiseAbs().maxCoeff(), 1e-300);
    if ((h * out.vectors - out.vectors * out.values.asDiagonal()).norm() > 1e-8 * scale * std::sqrt(double(n))) {
        throw NumericalError("hermitian_eigen: eigensolver did not converge");
    }
    return out;
}

SpectralReport eigh(const DenseMatrix& h, std::size_t n_qubits) {
    if (h.rows() != h.cols() || h.rows() != (Eigen::Index{1} << n_qubits)) {
        throw DimensionError("eigh: matrix is not 2^n x 2^n");
    }
    HermitianEigen es = hermitian_eigen(h);
    SpectralReport r;
    r.eigenvalues = std::move(es.values);
    r.eigenvectors = std::move(es.vectors);
    r.norm = r.eigenvalues.cwiseAbs().maxCoeff();
    r.gap = r.eigenvalues.size() > 1 ? r.eigenvalues[1] - r.eigenvalues[0] : 0.0;
    r.degeneracy_flag = r.eigenvalues.size() > 1 && r.gap < 1e-8 * std::max(r.norm, 1e-300);
    r.ground_state = StateVector(n_qubits, r.eigenvectors.col(0).normalized(), true);
    return r;
}

SpectralReport eigh(const PauliSum& h) {
    if (!h.is_hermitian()) throw ContractError("eigh requires a Hermitian operator");
    return eigh(to_dense(h), h.n_qubits());
}

DenseMatrix expm_hermitian(const DenseMatrix& h, Complex t) {
    const HermitianEigen es = hermitian_eigen(h);
    const Eigen::VectorXcd f = (t * es.values.cast<Complex>()).array().exp();
    return es.vectors * f.asDiagonal() * es.vectors.adjoint();
}

DenseMatrix gibbs_state(const PauliSum& h, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ContractError("gibbs_state requires finite beta >= 0");
    const SpectralReport s = eigh(h);
    // Shift by E0 so the largest weight is exactly 1.
    Eigen::VectorXd w = (-beta * (s.eigenvalues.array() - s.eigenvalues[0])).exp();
    w /= w.sum();
    return s.eigenvectors * w.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
}

StateVector gibbs_purification(const PauliSum& h, double beta) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ContractError("gibbs_purification requires finite beta >= 0");
    const std::size_t n = h.n_qubits();
    if (2 * n > StateVector::kMaxQubits) throw CapacityError("purification exceeds the statevector bound");
    const SpectralReport s = eigh(h);
    const Eigen::VectorXd w = (-0.5 * beta * (s.eigenvalues.array() - s.eigenvalues[0])).exp();
    const DenseMatrix a = s.eigenvectors * w.cast<Complex>().asDiagonal() * s.eigenvectors.adjoint();
    const Eigen::Index d = a.rows();
    Eigen::VectorXcd amps(d * d);
    // index y + (x << N) carries <y| A |x>.
    for (Eigen::Index x = 0; x < d; ++x) amps.segment(x * d, d) = a.col(x);
    amps.normalize();
    return StateVector(2 * n, std::move(amps), true);
}

DenseMatrix partial_trace_high(const StateVector& psi, std::size_t n_keep) {
    if (n_keep > psi.n_qubits()) throw DimensionError("partial_trace_high: n_keep exceeds register");
    check_dense(n_keep);
    const Eigen::Index d = Eigen::Index{1} << n_keep;
    const Eigen::Index r = static_cast<Eigen::Index>(psi.dim()) / d;
    const Eigen::Map<const DenseMatrix> m(psi.amplitudes().data(), d, r);
    return (m * m.adjoint()) / psi.amplitudes().squaredNorm();
}

DenseMatrix restrict_to(const DenseMatrix& a, const DenseMatrix& basis) { return basis.adjoint() * a * basis; }

double operator_norm(const DenseMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<DenseMatrix> svd(a);
    return svd.singularValues()[0];
}

SelfEnergy self_energy(const PauliSum& reference, const PauliSum& h, double z, double lambda_c) {
    if (reference.n_qubits() != h.n_qubits()) throw DimensionError("self_energy: qubit counts differ");
    const SpectralReport ref = eigh(reference);
    const DenseMatrix full = to_dense(h);
    Eigen::Index n_low = 0;
    while (n_low < ref.eigenvalues.size() && ref.eigenvalues[n_low] < lambda_c) ++n_low;
    if (n_low == 0) throw PartitionError("self_energy: no reference eigenvalue below lambda_c");
    const Eigen::Index n_high = ref.eigenvalues.size() - n_low;

    SelfEnergy out;
    out.z = z;
    out.low_basis = ref.eigenvectors.leftCols(n_low);
    out.low_energies = ref.eigenvalues.head(n_low);
    out.h_low = restrict_to(full, out.low_basis);
    out.sigma = out.h_low;
    if (n_high == 0) return out;

    const DenseMatrix high = ref.eigenvectors.rightCols(n_high);
    const DenseMatrix h_hh = restrict_to(full, high);
    const DenseMatrix h_hl = high.adjoint() * full * out.low_basis;

    const HermitianEigen es = hermitian_eigen(h_hh);
    const double scale = std::max(operator_norm(full), 1e-300);
    const double dist = (es.values.array() - z).abs().minCoeff();
    if (dist <= 1e-8 * scale) {
        throw SingularityError("self_energy: z = " + std::to_string(z) + " is a pole of the high-block resolvent");
    }
    const Eigen::VectorXcd inv = (z - es.values.array()).inverse().cast<Complex>();
    const DenseMatrix resolvent = es.vectors * inv.asDiagonal() * es.vectors.adjoint();
    out.sigma += h_hl.adjoint() * resolvent * h_hl;
    return out;
}

SelfEnergy self_energy(const PauliSum& h, double z, double lambda_c) { return self_energy(h, h, z, lambda_c); }

}  // namespace qrbm
