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

#include "qrbm/qite.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qrbm/error.hpp"
#include "qrbm/exactdiag.hpp"

namespace qrbm {

namespace {

PauliString local_to_full(std::size_t n, std::span<const std::size_t> domain, std::uint64_t lx, std::uint64_t lz) {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    for (std::size_t b = 0; b < domain.size(); ++b) {
        x |= ((lx >> b) & 1U) << domain[b];
        z |= ((lz >> b) & 1U) << domain[b];
    }
    return PauliString(n, x, z);
}

PauliString full_to_local(const PauliString& p, std::span<const std::size_t> domain) {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    for (std::size_t b = 0; b < domain.size(); ++b) {
        x |= ((p.x_mask() >> domain[b]) & 1U) << b;
        z |= ((p.z_mask() >> domain[b]) & 1U) << b;
    }
    return PauliString(domain.size(), x, z);
}

// Cached <psi|P|psi>, optionally replaced by a binomial estimate.
class ExpectationCache {
   public:
    ExpectationCache(const StateVector& psi, std::optional<std::uint64_t> shots, std::mt19937_64* rng)
        : psi_(psi), shots_(shots), rng_(rng) {}

    double operator()(const PauliString& p) {
        if (p.is_identity()) return 1.0;
        const auto key = std::make_pair(p.x_mask(), p.z_mask());
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        double v = expectation(p, psi_);
        if (shots_ && rng_) {
            const double prob = std::clamp(0.5 * (1.0 + v), 0.0, 1.0);
            std::binomial_distribution<std::uint64_t> dist(*shots_, prob);
            v = 2.0 * static_cast<double>(dist(*rng_)) / static_cast<double>(*shots_) - 1.0;
        }
        cache_.emplace(key, v);
        return v;
    }

   private:
    const StateVector& psi_;
    std::optional<std::uint64_t> shots_;
    std::mt19937_64* rng_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, double> cache_;
};

// <psi| P Q |psi> from cached single-string expectations.
Complex product_expectation(const PauliString& p, const PauliString& q, ExpectationCache& ev) {
    const auto [phase, r] = pauli_mul(p, q);
    return to_complex(phase) * ev(r);
}

}  // namespace

void QiteOptions::validate() const {
    if (n_steps < 1) throw ContractError("QiteOptions: n_steps must be at least 1");
    if (domain_size && (*domain_size < 1 || *domain_size > kMaxQiteDomain)) {
        throw ContractError("QiteOptions: domain_size must lie in 1..6");
    }
    if (!(regularization >= 0.0)) throw ContractError("QiteOptions: regularization must be non-negative");
    if (shot_noise && *shot_noise == 0) throw ContractError("QiteOptions: shot_noise must be positive");
}

std::vector<PauliSum> trotter_terms(const PauliSum& h, std::size_t max_locality) {
    if (!h.is_hermitian()) throw ContractError("trotter_terms requires a Hermitian operator");
    std::vector<PauliSum> out;
    for (const auto& t : h.terms()) {
        if (t.string.weight() > max_locality) {
            throw UnsupportedLocalityError("term " + format_pauli_text(t.string) + " acts on " +
                                           std::to_string(t.string.weight()) + " qubits; cap is " +
                                           std::to_string(max_locality));
        }
        PauliSum s(h.n_qubits());
        s.add(t.coeff, t.string);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::size_t> select_domain(const PauliSum& term, std::optional<std::size_t> domain_size) {
    std::uint64_t mask = 0;
    for (const auto& t : term.terms()) mask |= t.string.support_mask();
    std::vector<std::size_t> dom;
    for (std::size_t q = 0; q < term.n_qubits(); ++q) {
        if ((mask >> q) & 1U) dom.push_back(q);
    }
    if (dom.size() > kMaxQiteDomain) throw CapacityError("QITE term support exceeds the domain cap of 6");
    if (!domain_size) return dom;
    if (*domain_size > kMaxQiteDomain) throw CapacityError("QITE domain_size exceeds the cap of 6");
    const std::size_t target = std::min(*domain_size, term.n_qubits());
    const std::vector<std::size_t> support = dom;
    while (dom.size() < target) {
        std::size_t best = term.n_qubits();
        std::size_t best_dist = SIZE_MAX;
        for (std::size_t q = 0; q < term.n_qubits(); ++q) {
            if ((mask >> q) & 1U) continue;
            std::size_t d = SIZE_MAX;
            for (std::size_t s : support) d = std::min(d, q > s ? q - s : s - q);
            if (support.empty()) d = q;
            if (d < best_dist) {
                best_dist = d;
                best = q;
            }
        }
        mask |= std::uint64_t{1} << best;
        dom.push_back(best);
    }
    std::sort(dom.begin(), dom.end());
    return dom;
}

QiteLinearSystem build_linear_system(const StateVector& psi, const PauliSum& term, double dt,
                                     std::span<const std::size_t> domain, std::optional<std::uint64_t> shots,
                                     std::mt19937_64* rng) {
    if (psi.n_qubits() != term.n_qubits()) throw DimensionError("build_linear_system: qubit counts differ");
    if (!psi.is_normalized()) throw ContractError("build_linear_system requires a normalized state");
    if (domain.size() > kMaxQiteDomain) throw CapacityError("QITE domain exceeds the cap of 6");
    std::uint64_t dom_mask = 0;
    for (std::size_t q : domain) {
        if (q >= psi.n_qubits()) throw DimensionError("domain qubit out of range");
        dom_mask |= std::uint64_t{1} << q;
    }
    for (const auto& t : term.terms()) {
        if (t.string.support_mask() & ~dom_mask) throw ContractError("domain does not cover the term support");
    }

    QiteLinearSystem sys;
    sys.domain.assign(domain.begin(), domain.end());
    const std::size_t n = psi.n_qubits();
    const std::uint64_t local = std::uint64_t{1} << domain.size();
    for (std::uint64_t lx = 0; lx < local; ++lx) {
        for (std::uint64_t lz = 0; lz < local; ++lz) {
            if (lx == 0 && lz == 0) continue;
            sys.basis.push_back(local_to_full(n, domain, lx, lz));
        }
    }

    ExpectationCache ev(psi, shots, rng);
    double h_mean = term.identity_coeff().real();
    for (const auto& t : term.terms()) h_mean += t.coeff.real() * ev(t.string);
    sys.c_first_order = 1.0 + 2.0 * dt * h_mean;
    sys.c_norm = std::pow(expm_multiply(term, psi, dt).norm(), 2);
    if (!(sys.c_norm > 0.0) || !std::isfinite(sys.c_norm)) throw NumericalError("QITE normalization is not finite");

    const auto dim = static_cast<Eigen::Index>(sys.basis.size());
    sys.s.resize(dim, dim);
    sys.b.resize(dim);
    const double inv_sqrt_c = 1.0 / std::sqrt(sys.c_norm);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto& si = sys.basis[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < dim; ++j) {
            sys.s(i, j) = product_expectation(si, sys.basis[static_cast<std::size_t>(j)], ev);
        }
        Complex sh = term.identity_coeff() * ev(si);
        for (const auto& t : term.terms()) sh += t.coeff * product_expectation(si, t.string, ev);
        sys.b[i] = Complex(0.0, -1.0) * inv_sqrt_c * sh;
    }
    return sys;
}

Eigen::VectorXd solve_qite_system(const QiteLinearSystem& sys, double regularization) {
    const Eigen::MatrixXd m = (sys.s + sys.s.adjoint()).real();
    const Eigen::VectorXd rhs = -2.0 * sys.b.real();
    if (m.size() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    const double lambda = regularization * m.trace() / static_cast<double>(m.rows());
    const Eigen::VectorXd proj = es.eigenvectors().transpose() * rhs;
    Eigen::VectorXd coef = Eigen::VectorXd::Zero(proj.size());
    for (Eigen::Index k = 0; k < proj.size(); ++k) {
        const double mu = es.eigenvalues()[k];
        if (mu > 1e-12 * top) coef[k] = proj[k] / (mu + lambda);
    }
    Eigen::VectorXd a = es.eigenvectors() * coef;
    if (!a.allFinite()) throw NumericalError("QITE linear solve produced non-finite coefficients");
    return a;
}

QiteStepResult qite_step(const StateVector& psi, const PauliSum& term, double dt, const QiteOptions& opts,
                         std::mt19937_64* rng) {
    opts.validate();
    QiteStepResult out{psi, {}};
    if (term.size() == 0) return out;
    const std::vector<std::size_t> domain = select_domain(term, opts.domain_size);
    const QiteLinearSystem sys = build_linear_system(psi, term, dt, domain, opts.shot_noise, rng);
    const Eigen::VectorXd a = solve_qite_system(sys, opts.regularization);

    QiteStepRecord& rec = out.record;
    rec.domain = domain;
    rec.a_coeffs.assign(a.data(), a.data() + a.size());
    rec.c_norm = sys.c_norm;
    rec.c_first_order = sys.c_first_order;
    rec.residual = ((sys.s + sys.s.adjoint()).real() * a + 2.0 * sys.b.real()).norm();
    rec.imag_residual = sys.b.imag().norm();

    PauliSum gen(domain.size());
    for (std::size_t i = 0; i < sys.basis.size(); ++i) {
        if (a[static_cast<Eigen::Index>(i)] != 0.0) gen.add(a[static_cast<Eigen::Index>(i)], full_to_local(sys.basis[i], domain));
    }
    const DenseMatrix u = expm_hermitian(to_dense(gen), Complex(0.0, -dt));
    out.state = apply_matrix(u, domain, psi);
    out.state.normalize();
    if (opts.compute_fidelity) rec.fidelity_vs_exact = fidelity(out.state, expm_multiply(term, psi, dt));
    return out;
}

QiteResult qite_evolve(const StateVector& psi, const PauliSum& h, double tau, const QiteOptions& opts) {
    opts.validate();
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw ContractError("qite_evolve requires finite tau >= 0");
    if (!psi.is_normalized()) throw ContractError("qite_evolve requires a normalized state");
    const std::size_t cap = std::max<std::size_t>(2, opts.domain_size.value_or(2));
    const std::vector<PauliSum> terms = trotter_terms(h, cap);
    QiteResult out{psi, {}, {}};
    if (tau > 0.0 && !terms.empty()) {
        std::mt19937_64 rng(opts.rng_seed);
        QiteOptions step_opts = opts;
        step_opts.compute_fidelity = false;
        const double dt = tau / static_cast<double>(opts.n_steps);
        out.records.reserve(opts.n_steps * terms.size());
        for (std::size_t s = 0; s < opts.n_steps; ++s) {
            for (const auto& t : terms) {
                QiteStepResult r = qite_step(out.state, t, dt, step_opts, opts.shot_noise ? &rng : nullptr);
                out.state = std::move(r.state);
                out.records.push_back(std::move(r.record));
            }
        }
    }
    if (opts.compute_fidelity) out.fidelity_vs_exact = fidelity(out.state, expm_multiply(h, psi, tau));
    return out;
}

}  // namespace qrbm
