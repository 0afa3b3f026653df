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

#include "qrbm/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "qrbm/error.hpp"

namespace qrbm {

namespace {

constexpr double kNormTolerance = 1e-12;

// Rounding in the squared-norm sum grows with the vector length.
double norm_tolerance(Eigen::Index dim) { return kNormTolerance + 1e-15 * static_cast<double>(dim); }

void check_size(std::size_t n) {
    if (n > StateVector::kMaxQubits) {
        throw CapacityError("statevector limited to " + std::to_string(StateVector::kMaxQubits) + " qubits, got " +
                            std::to_string(n));
    }
}

void check_same(const StateVector& a, const StateVector& b, const char* where) {
    if (a.n_qubits() != b.n_qubits()) throw DimensionError(std::string(where) + ": qubit counts differ");
}

void check_finite(double theta, const char* where) {
    if (!std::isfinite(theta)) throw NumericalError(std::string(where) + ": non-finite angle");
}

// out += coeff * P * in
void accumulate_pauli(Complex coeff, const PauliString& p, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    const std::uint64_t x = p.x_mask();
    const std::uint64_t z = p.z_mask();
    const Complex c = coeff * to_complex(static_cast<Phase>(std::popcount(x & z) & 3));
    const auto dim = static_cast<std::uint64_t>(in.size());
    for (std::uint64_t i = 0; i < dim; ++i) {
        const Complex v = (std::popcount(z & i) & 1) ? -c * in[static_cast<Eigen::Index>(i)]
                                                     : c * in[static_cast<Eigen::Index>(i)];
        out[static_cast<Eigen::Index>(i ^ x)] += v;
    }
}

void accumulate_sum_without_identity(const PauliSum& h, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    for (const auto& t : h.terms()) accumulate_pauli(t.coeff, t.string, in, out);
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits), normalized_(true) {
    check_size(n_qubits);
    amps_ = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
    amps_[0] = 1.0;
}

StateVector::StateVector(std::size_t n_qubits, Eigen::VectorXcd amplitudes, bool normalized)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)), normalized_(normalized) {
    check_size(n_qubits);
    if (amps_.size() != (Eigen::Index{1} << n_qubits)) {
        throw DimensionError("amplitude array length must be 2^n");
    }
    if (normalized_ && std::abs(amps_.squaredNorm() - 1.0) > norm_tolerance(amps_.size())) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", std::abs(amps_.squaredNorm() - 1.0));
        throw ContractError(std::string("state flagged normalized but |norm^2 - 1| = ") + buf);
    }
}

StateVector StateVector::basis(std::size_t n_qubits, std::uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) throw DimensionError("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[static_cast<Eigen::Index>(index)] = 1.0;
    return s;
}

StateVector StateVector::plus(std::size_t n_qubits) {
    StateVector s(n_qubits);
    s.amps_.setConstant(1.0 / std::sqrt(static_cast<double>(s.dim())));
    return s;
}

StateVector& StateVector::normalize() {
    const double n = amps_.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalize a zero or non-finite state");
    amps_ /= n;
    normalized_ = true;
    return *this;
}

StateVector StateVector::normalized() const {
    StateVector s = *this;
    s.normalize();
    return s;
}

StateVector apply_pauli(const PauliString& p, const StateVector& psi) {
    if (p.n_qubits() != psi.n_qubits()) throw DimensionError("apply_pauli: qubit counts differ");
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.amplitudes().size());
    accumulate_pauli(1.0, p, psi.amplitudes(), out);
    return StateVector(psi.n_qubits(), std::move(out), false);
}

StateVector apply_pauli_sum(const PauliSum& h, const StateVector& psi) {
    if (h.n_qubits() != psi.n_qubits()) throw DimensionError("apply_pauli_sum: qubit counts differ");
    Eigen::VectorXcd out = h.identity_coeff() * psi.amplitudes();
    accumulate_sum_without_identity(h, psi.amplitudes(), out);
    return StateVector(psi.n_qubits(), std::move(out), false);
}

StateVector apply_exp_real(double theta, const PauliString& p, const StateVector& psi) {
    check_finite(theta, "apply_exp_real");
    if (p.n_qubits() != psi.n_qubits()) throw DimensionError("apply_exp_real: qubit counts differ");
    if (p.is_identity()) return StateVector(psi.n_qubits(), std::exp(theta) * psi.amplitudes(), false);
    Eigen::VectorXcd out = std::cosh(theta) * psi.amplitudes();
    accumulate_pauli(std::sinh(theta), p, psi.amplitudes(), out);
    return StateVector(psi.n_qubits(), std::move(out), false);
}

StateVector apply_exp_imag(double theta, const PauliString& p, const StateVector& psi) {
    check_finite(theta, "apply_exp_imag");
    if (p.n_qubits() != psi.n_qubits()) throw DimensionError("apply_exp_imag: qubit counts differ");
    if (p.is_identity()) {
        return StateVector(psi.n_qubits(), std::exp(Complex(0.0, -theta)) * psi.amplitudes(), false);
    }
    Eigen::VectorXcd out = std::cos(theta) * psi.amplitudes();
    accumulate_pauli(Complex(0.0, -std::sin(theta)), p, psi.amplitudes(), out);
    StateVector s(psi.n_qubits(), std::move(out), false);
    if (psi.is_normalized()) s.normalize();
    return s;
}

ScaledState expm_multiply_scaled(const PauliSum& h, const StateVector& psi, Complex t) {
    if (h.n_qubits() != psi.n_qubits()) throw DimensionError("expm_multiply: qubit counts differ");
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) throw NumericalError("expm_multiply: non-finite time");
    const double n0 = psi.norm();
    if (!(n0 > 0.0)) throw NumericalError("expm_multiply: zero input state");

    Eigen::VectorXcd v = psi.amplitudes() / n0;
    double log_norm = std::log(n0);
    const Complex shift = t * h.identity_coeff();
    log_norm += shift.real();
    const Complex phase = std::exp(Complex(0.0, shift.imag()));

    const double l1 = std::abs(t) * h.coeff_norm();
    const int steps = std::max(1, static_cast<int>(std::ceil(l1)));
    const Complex dt = t / static_cast<double>(steps);
    Eigen::VectorXcd term(v.size());
    Eigen::VectorXcd next(v.size());
    for (int s = 0; s < steps && h.size() > 0; ++s) {
        term = v;
        Eigen::VectorXcd sum = v;
        int small = 0;
        for (int k = 1; k <= 100; ++k) {
            next.setZero();
            accumulate_sum_without_identity(h, term, next);
            term = next * (dt / static_cast<double>(k));
            sum += term;
            const double tn = term.norm();
            if (!std::isfinite(tn)) throw NumericalError("expm_multiply: series diverged");
            if (tn <= 1e-17 * sum.norm()) {
                if (++small == 2) break;
            } else {
                small = 0;
            }
        }
        const double r = sum.norm();
        if (!(r > 0.0) || !std::isfinite(r)) throw NumericalError("expm_multiply: state collapsed to zero");
        log_norm += std::log(r);
        v = sum / r;
    }
    v *= phase;
    return {StateVector(psi.n_qubits(), std::move(v), true), log_norm};
}

StateVector expm_multiply(const PauliSum& h, const StateVector& psi, Complex t) {
    ScaledState s = expm_multiply_scaled(h, psi, t);
    const double scale = std::exp(s.log_norm);
    if (!std::isfinite(scale)) throw NumericalError("expm_multiply: result norm overflows");
    Eigen::VectorXcd a = s.direction.amplitudes() * scale;
    return StateVector(psi.n_qubits(), std::move(a), false);
}

double expectation(const PauliSum& h, const StateVector& psi) {
    if (!h.is_hermitian()) throw ContractError("expectation requires a Hermitian operator");
    if (!psi.is_normalized()) throw ContractError("expectation requires a normalized state");
    const Complex v = matrix_element(psi, h, psi);
    const double scale = std::max(1.0, std::abs(h.identity_coeff()) + h.coeff_norm());
    if (std::abs(v.imag()) > 1e-10 * scale) throw NumericalError("expectation: imaginary residue too large");
    return v.real();
}

double expectation(const PauliString& p, const StateVector& psi) {
    if (p.n_qubits() != psi.n_qubits()) throw DimensionError("expectation: qubit counts differ");
    const std::uint64_t x = p.x_mask();
    const std::uint64_t z = p.z_mask();
    const Complex c = to_complex(static_cast<Phase>(std::popcount(x & z) & 3));
    const auto& a = psi.amplitudes();
    Complex acc = 0.0;
    for (std::uint64_t i = 0; i < psi.dim(); ++i) {
        const Complex v = std::conj(a[static_cast<Eigen::Index>(i ^ x)]) * a[static_cast<Eigen::Index>(i)];
        acc += (std::popcount(z & i) & 1) ? -v : v;
    }
    return (c * acc).real() / a.squaredNorm();
}

Complex matrix_element(const StateVector& psi, const PauliSum& a, const StateVector& phi) {
    check_same(psi, phi, "matrix_element");
    return psi.amplitudes().dot(apply_pauli_sum(a, phi).amplitudes());
}

Complex inner(const StateVector& psi, const StateVector& phi) {
    check_same(psi, phi, "inner");
    return psi.amplitudes().dot(phi.amplitudes());
}

double fidelity(const StateVector& psi, const StateVector& phi) {
    const Complex ov = inner(psi, phi);
    return std::norm(ov) / (psi.amplitudes().squaredNorm() * phi.amplitudes().squaredNorm());
}

PostselectResult postselect_plus(const StateVector& psi, std::span<const std::size_t> qubits) {
    std::uint64_t sel = 0;
    for (std::size_t q : qubits) {
        if (q >= psi.n_qubits()) throw DimensionError("postselect_plus: qubit out of range");
        sel |= std::uint64_t{1} << q;
    }
    const std::size_t k = static_cast<std::size_t>(std::popcount(sel));
    const std::size_t n_rest = psi.n_qubits() - k;
    std::vector<std::size_t> rest;
    for (std::size_t q = 0; q < psi.n_qubits(); ++q) {
        if (!((sel >> q) & 1U)) rest.push_back(q);
    }
    std::vector<std::size_t> chosen;
    for (std::size_t q = 0; q < psi.n_qubits(); ++q) {
        if ((sel >> q) & 1U) chosen.push_back(q);
    }
    const std::uint64_t n_out = std::uint64_t{1} << n_rest;
    const std::uint64_t n_sel = std::uint64_t{1} << k;
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n_out));
    const auto& a = psi.amplitudes();
    for (std::uint64_t r = 0; r < n_out; ++r) {
        std::uint64_t base = 0;
        for (std::size_t b = 0; b < n_rest; ++b) base |= ((r >> b) & 1U) << rest[b];
        Complex acc = 0.0;
        for (std::uint64_t s = 0; s < n_sel; ++s) {
            std::uint64_t idx = base;
            for (std::size_t b = 0; b < k; ++b) idx |= ((s >> b) & 1U) << chosen[b];
            acc += a[static_cast<Eigen::Index>(idx)];
        }
        out[static_cast<Eigen::Index>(r)] = acc / std::sqrt(static_cast<double>(n_sel));
    }
    const double total = a.squaredNorm();
    const double prob = total > 0.0 ? out.squaredNorm() / total : 0.0;
    if (!(prob >= 1e-14)) {
        throw PostselectionError("post-selection probability " + std::to_string(prob) + " below 1e-14");
    }
    out /= out.norm();
    return {StateVector(n_rest, std::move(out), true), prob};
}

StateVector apply_matrix(const Eigen::MatrixXcd& u, std::span<const std::size_t> qubits, const StateVector& psi) {
    const std::size_t k = qubits.size();
    const Eigen::Index local = Eigen::Index{1} << k;
    if (u.rows() != local || u.cols() != local) throw DimensionError("apply_matrix: matrix size must be 2^k");
    std::uint64_t mask = 0;
    for (std::size_t q : qubits) {
        if (q >= psi.n_qubits()) throw DimensionError("apply_matrix: qubit out of range");
        if ((mask >> q) & 1U) throw DimensionError("apply_matrix: repeated qubit");
        mask |= std::uint64_t{1} << q;
    }
    std::vector<std::uint64_t> offsets(static_cast<std::size_t>(local));
    for (std::uint64_t l = 0; l < static_cast<std::uint64_t>(local); ++l) {
        std::uint64_t off = 0;
        for (std::size_t b = 0; b < k; ++b) off |= ((l >> b) & 1U) << qubits[b];
        offsets[l] = off;
    }
    const auto& a = psi.amplitudes();
    Eigen::VectorXcd out(a.size());
    Eigen::VectorXcd in_local(local);
    for (std::uint64_t base = 0; base < psi.dim(); ++base) {
        if (base & mask) continue;
        for (Eigen::Index l = 0; l < local; ++l) in_local[l] = a[static_cast<Eigen::Index>(base | offsets[l])];
        const Eigen::VectorXcd r = u * in_local;
        for (Eigen::Index l = 0; l < local; ++l) out[static_cast<Eigen::Index>(base | offsets[l])] = r[l];
    }
    return StateVector(psi.n_qubits(), std::move(out), false);
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    const std::size_t n = a.n_qubits() + b.n_qubits();
    check_size(n);
    Eigen::VectorXcd out(Eigen::Index{1} << n);
    const Eigen::Index da = a.amplitudes().size();
    for (Eigen::Index j = 0; j < b.amplitudes().size(); ++j) {
        out.segment(j * da, da) = b.amplitudes()[j] * a.amplitudes();
    }
    StateVector s(n, std::move(out), false);
    if (a.is_normalized() && b.is_normalized()) s.normalize();
    return s;
}

std::vector<double> probabilities(const StateVector& psi) {
    const double total = psi.amplitudes().squaredNorm();
    std::vector<double> p(psi.dim());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(psi[i]) / total;
    return p;
}

std::map<std::uint64_t, std::uint64_t> sample_counts(const StateVector& psi, std::uint64_t shots,
                                                     std::uint64_t rng_seed) {
    if (shots == 0) throw ContractError("sample_counts requires at least one shot");
    if (!psi.is_normalized()) throw ContractError("sample_counts requires a normalized state");
    const std::vector<double> p = probabilities(psi);
    std::vector<double> cdf(p.size());
    std::partial_sum(p.begin(), p.end(), cdf.begin());
    std::mt19937_64 rng(rng_seed);
    std::map<std::uint64_t, std::uint64_t> counts;
    const double top = cdf.back();
    for (std::uint64_t s = 0; s < shots; ++s) {
        // 53 random bits -> uniform in [0, 1).
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * top;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        ++counts[static_cast<std::uint64_t>(it - cdf.begin())];
    }
    return counts;
}

std::string basis_string(std::uint64_t index, std::size_t n_qubits) {
    std::string s(n_qubits, '0');
    for (std::size_t q = 0; q < n_qubits; ++q) {
        if ((index >> q) & 1U) s[q] = '1';
    }
    return s;
}

}  // namespace qrbm
