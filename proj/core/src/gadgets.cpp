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

#include "qrbm/gadgets.hpp"

#include <algorithm>
#include <cmath>

#include "qrbm/error.hpp"

namespace qrbm {

namespace {

constexpr char kAxes[3] = {'X', 'Y', 'Z'};

PauliSum single(std::size_t n, std::size_t q, char op, double coeff = 1.0) {
    PauliSum s(n);
    s.add(coeff, PauliString::single(n, q, op));
    return s;
}

PauliSum identity(std::size_t n, double coeff = 1.0) {
    PauliSum s(n);
    s.add_identity(coeff);
    return s;
}

// (x)^{2/3} for any real x, using the real cube root.
double two_thirds_power(double x) {
    const double c = std::cbrt(x);
    return c * c;
}

}  // namespace

// ---------------------------------------------------------------------------

Theorem2Gadget theorem2_build(const Theorem2Input& input) {
    const std::size_t n = input.y.n_qubits();
    if (!(input.delta > 0.0) || !std::isfinite(input.delta)) throw ContractError("theorem2_build: delta must be positive");
    if (!input.y.is_hermitian()) throw InputError("theorem2_build: Y must be Hermitian");
    const std::size_t m = input.b_triples.size();
    const std::size_t total = n + 3 * m;
    if (total > kMaxDenseQubits) throw CapacityError("theorem2_build: system plus ancillas exceed the dense bound");
    const double floor = 1.0 / std::pow(static_cast<double>(n), 3);
    for (const auto& triple : input.b_triples) {
        for (const auto& b : triple) {
            if (b.n_qubits() != n) throw DimensionError("theorem2_build: B operator on the wrong register");
            if (!b.is_hermitian()) throw InputError("theorem2_build: B operator is not Hermitian");
            const double lo = eigh(b).eigenvalues[0];
            if (lo < floor - 1e-12) {
                throw InputError("theorem2_build: B operator has eigenvalue " + std::to_string(lo) +
                                 " below 1/n^3 = " + std::to_string(floor));
            }
        }
    }

    const double d = input.delta;
    Theorem2Gadget g;
    g.n_system = n;
    g.delta = d;
    g.lambda_c = 0.5 * std::pow(d, -3);
    g.h = PauliSum(total);
    g.v = input.y.embedded(total);
    g.h_eff = input.y.embedded(total);
    g.h3 = input.y;
    for (std::size_t t = 0; t < m; ++t) {
        const std::size_t a0 = n + 3 * t;
        const std::array<std::size_t, 3> anc{a0, a0 + 1, a0 + 2};
        PauliSum zz(total);
        zz.add(1.0, PauliString::on(total, {{anc[0], 'Z'}, {anc[1], 'Z'}}));
        zz.add(1.0, PauliString::on(total, {{anc[0], 'Z'}, {anc[2], 'Z'}}));
        zz.add(1.0, PauliString::on(total, {{anc[1], 'Z'}, {anc[2], 'Z'}}));
        zz.add_identity(-3.0);
        g.h = g.h + (-0.25 * std::pow(d, -3)) * zz;

        const auto& triple = input.b_triples[t];
        for (int r = 0; r < 3; ++r) {
            const PauliSum be = triple[r].embedded(total);
            g.v = g.v + (1.0 / d) * multiply(be, be);
            g.v = g.v - (1.0 / (d * d)) * multiply(be, single(total, anc[r], 'X'));
        }
        const PauliSum bbb = multiply(multiply(triple[0], triple[1]), triple[2]);
        PauliSum xxx(total);
        xxx.add(1.0, PauliString::on(total, {{anc[0], 'X'}, {anc[1], 'X'}, {anc[2], 'X'}}));
        g.h_eff = g.h_eff - 6.0 * multiply(bbb.embedded(total), xxx);
        g.h3 = g.h3 - 6.0 * bbb;
    }
    g.h2 = g.h + g.v;
    return g;
}

Theorem2Report theorem2_verify(const Theorem2Gadget& g, std::size_t window_points, double window_margin) {
    Theorem2Report r;
    const DenseMatrix heff = to_dense(g.h_eff);
    const double norm = operator_norm(heff);
    auto deviation = [&](double z) {
        const SelfEnergy se = self_energy(g.h, g.h2, z, g.lambda_c);
        return operator_norm(se.sigma - restrict_to(heff, se.low_basis));
    };
    r.deviation_at_zero = deviation(0.0);
    const double lo = -norm - window_margin;
    const double hi = norm + window_margin;
    for (std::size_t k = 0; k < window_points; ++k) {
        const double z = window_points == 1 ? 0.0 : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(window_points - 1);
        r.window_z.push_back(z);
        r.window_deviation.push_back(deviation(z));
        r.max_deviation_window = std::max(r.max_deviation_window, r.window_deviation.back());
    }

    // Ground of the effective model: |v3> with each ancilla triple in (|000> + |111>)/sqrt(2).
    StateVector eff = eigh(g.h3).ground_state;
    const std::size_t m = (g.h2.n_qubits() - g.n_system) / 3;
    Eigen::VectorXcd ghz = Eigen::VectorXcd::Zero(8);
    ghz[0] = ghz[7] = 1.0 / std::sqrt(2.0);
    for (std::size_t t = 0; t < m; ++t) eff = tensor_product(eff, StateVector(3, ghz, true));
    r.ground_overlap = fidelity(eigh(g.h2).ground_state, eff);
    return r;
}

// ---------------------------------------------------------------------------

Theorem3Gadget theorem3_build(std::size_t i, std::size_t j, double alpha, double delta, double e,
                              std::optional<std::size_t> n_system) {
    if (!(delta > 0.0 && delta <= 0.25)) throw ContractError("theorem3_build requires 0 < delta <= 0.25");
    if (e == 0.0 || !std::isfinite(e)) throw ContractError("theorem3_build requires a finite nonzero E");
    if (!std::isfinite(alpha)) throw ContractError("theorem3_build requires a finite alpha");
    if (i == j) throw ContractError("theorem3_build requires distinct qubits");
    const std::size_t n = n_system.value_or(std::max(i, j) + 1);
    if (i >= n || j >= n) throw DimensionError("theorem3_build: qubit index outside the system");
    const std::size_t total = n + 1;
    const std::size_t k = n;

    Theorem3Gadget g;
    g.n_system = n;
    g.i = i;
    g.j = j;
    g.ancilla = k;
    g.alpha = alpha;
    g.delta = delta;
    g.e = e;
    g.a = alpha;
    g.b = two_thirds_power(1.0 / (delta * e)) * e;
    g.c = alpha * two_thirds_power(1.0 / (delta * e)) / 2.0;
    g.d = 2.0 * std::pow(delta, -1.0 / 3.0) * two_thirds_power(e);
    // B^2 / (z - 1/delta)^2 at z = 0.
    const double s = g.b * g.b * delta * delta;
    g.h_i = 1.0 + 2.0 * s;
    g.delta_i = 1.0 + 4.0 * s;
    g.delta_j = 1.0 + 2.0 * s;
    g.k_ij = 1.0 + 4.0 * s;
    g.h_j = 1.0;

    g.h2_star = PauliSum(n);
    g.h2_star.add(g.h_i, PauliString::single(n, i, 'X'));
    g.h2_star.add(g.h_j, PauliString::single(n, j, 'X'));
    g.h2_star.add(g.delta_i, PauliString::single(n, i, 'Y'));
    g.h2_star.add(g.delta_j, PauliString::single(n, j, 'Y'));
    g.h2_star.add(1.0, PauliString::on(n, {{i, 'X'}, {j, 'X'}}));
    g.h2_star.add(g.k_ij, PauliString::on(n, {{i, 'Y'}, {j, 'Y'}}));

    const PauliSum yj_plus_i = single(total, j, 'Y') + identity(total);
    const PauliSum proj_plus = 0.5 * (identity(total) + single(total, k, 'X'));
    const PauliSum proj_minus = 0.5 * (identity(total) - single(total, k, 'X'));
    const PauliSum xi = single(total, i, 'X');

    const PauliSum v1 = g.h2_star.embedded(total) + g.d * yj_plus_i - g.a * multiply(xi, proj_minus);
    const PauliSum v2 = g.b * multiply(yj_plus_i, single(total, k, 'Y'));
    const PauliSum v3 = g.c * multiply(xi, proj_plus);
    g.penalty = (1.0 / delta) * proj_plus;
    g.gadget_hamiltonian = g.penalty + v1 + v2 + v3;
    return g;
}

PauliSum theorem3_target(const Theorem3Gadget& g) {
    const std::size_t n = g.n_system;
    const double s = g.b * g.b * g.delta * g.delta;
    const PauliSum yj_plus_i = single(n, g.j, 'Y') + identity(n);
    PauliSum out = g.h2_star + s * multiply(multiply(yj_plus_i, g.h2_star), yj_plus_i);
    PauliSum cross(n);
    cross.add(g.alpha, PauliString::on(n, {{g.i, 'X'}, {g.j, 'Y'}}));
    return out + cross;
}

Theorem3Report theorem3_verify(const Theorem3Gadget& g, const PauliSum& target) {
    if (target.n_qubits() != g.n_system) throw DimensionError("theorem3_verify: target must live on the system");
    const std::size_t total = g.n_system + 1;
    const double lambda_c = 0.5 / g.delta;
    Theorem3Report r;
    SelfEnergy se;
    try {
        se = self_energy(g.penalty, g.gadget_hamiltonian, 0.0, lambda_c);
    } catch (const SingularityError&) {
        r.z_shifted = true;
        r.z = -1e-3;
        se = self_energy(g.penalty, g.gadget_hamiltonian, r.z, lambda_c);
    }
    const DenseMatrix t = to_dense(target.embedded(total));
    r.deviation = operator_norm(se.sigma - restrict_to(t, se.low_basis));

    Eigen::VectorXcd minus(2);
    minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    const StateVector dressed = tensor_product(eigh(target).ground_state, StateVector(1, minus, true));
    r.ground_overlap = fidelity(eigh(g.gadget_hamiltonian).ground_state, dressed);
    return r;
}

bool is_simplified_form(const PauliSum& h) {
    for (const auto& t : h.terms()) {
        const auto w = t.string.weight();
        if (w == 1) continue;
        if (w != 2) return false;
        const auto sup = t.string.support();
        if (t.string.at(sup[0]) != t.string.at(sup[1])) return false;
    }
    return true;
}

bool is_xy_form(const PauliSum& h) {
    if (!is_simplified_form(h)) return false;
    for (const auto& t : h.terms()) {
        if (t.string.z_mask() & ~t.string.x_mask()) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

std::string to_string(HiddenMode m) { return m == HiddenMode::kSingleHidden ? "single_hidden" : "diagonal_hidden"; }

HiddenMode hidden_mode_from_string(const std::string& s) {
    if (s == "single_hidden") return HiddenMode::kSingleHidden;
    if (s == "diagonal_hidden") return HiddenMode::kDiagonalHidden;
    throw ParseError("unknown hidden mode '" + s + "'", 0);
}

namespace {

QrbmParams plan_theta(const UniversalityPlan& plan, double tau) {
    const std::size_t n = plan.h_simplified.n_qubits();
    const std::size_t m = plan.hidden_mode == HiddenMode::kSingleHidden ? 1 : n;
    QrbmParams p = QrbmParams::zeros(n, m);
    for (const auto& t : plan.h_simplified.terms()) {
        const double coeff = -tau * t.coeff.real();
        const auto sup = t.string.support();
        const char op = t.string.at(sup[0]);
        const int axis = op == 'X' ? 0 : op == 'Y' ? 1 : 2;
        if (sup.size() == 1) {
            p.b[sup[0]][axis] += coeff;
        } else {
            p.k[p.pair_index(sup[0], sup[1])][axis] += coeff;
        }
    }
    // acosh(e^{lambda* tau / N}) without overflow.
    const double x = plan.lambda_star * tau / static_cast<double>(n);
    const double w = x + std::log1p(std::sqrt(-std::expm1(-2.0 * x)));
    for (std::size_t i = 0; i < n; ++i) {
        p.weight(i, plan.hidden_mode == HiddenMode::kSingleHidden ? 0 : i) = w;
    }
    return p;
}

}  // namespace

UniversalityPlan theorem4_params(const PauliSum& h_simplified, double epsilon, HiddenMode mode,
                                 std::optional<double> lambda_star) {
    if (!is_simplified_form(h_simplified)) throw InputError("theorem4_params: Hamiltonian is not in simplified form");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ContractError("theorem4_params requires 0 < epsilon < 1");
    const SpectralReport rep = eigh(h_simplified);
    if (rep.degeneracy_flag) {
        throw InputError("theorem4_params: ground level is degenerate (gap " + std::to_string(rep.gap) + ")");
    }
    UniversalityPlan plan;
    plan.h_simplified = h_simplified;
    plan.hidden_mode = mode;
    plan.epsilon = epsilon;
    plan.e0 = rep.eigenvalues[0];
    plan.gap = rep.gap;
    plan.delta_shift = 0.5 * rep.gap;
    plan.shifted_energies = rep.eigenvalues.array() - (plan.e0 + plan.delta_shift);
    const double e0t = plan.shifted_energies[0];
    const double e1t = plan.shifted_energies[1];
    // The midpoint is zero up to rounding.
    plan.lambda_star = lambda_star.value_or(std::max(0.0, 0.5 * (e0t + e1t)));
    if (!(plan.lambda_star > e0t && plan.lambda_star <= e1t)) {
        throw ContractError("theorem4_params: lambda* must satisfy E~0 < lambda* <= E~1");
    }
    if (plan.lambda_star < 0.0) throw ContractError("theorem4_params: lambda* must be non-negative");
    if (plan.lambda_star == e1t) throw ContractError("theorem4_params: lambda* = E~1 leaves tau unbounded");
    const double n = static_cast<double>(h_simplified.n_qubits());
    plan.h_tilde = h_simplified;
    plan.h_tilde.add_identity(-(plan.e0 + plan.delta_shift));
    plan.eigenvectors = rep.eigenvectors;
    const StateVector plus = StateVector::plus(h_simplified.n_qubits());
    plan.plus_amplitudes = rep.eigenvectors.adjoint() * plus.amplitudes();
    plan.overlap_k = std::abs(plan.plus_amplitudes[0]);
    return with_tau(plan, (std::log(1.0 / epsilon) + n) / (e1t - plan.lambda_star));
}

UniversalityPlan with_tau(const UniversalityPlan& plan, double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw ContractError("with_tau requires finite tau >= 0");
    UniversalityPlan out = plan;
    out.tau = tau;
    out.theta_star = plan_theta(out, tau);
    out.w_coupling = out.theta_star.w.empty() ? 0.0 : out.theta_star.w[0];
    out.predicted_fidelity = predicted_fidelity(out, tau);
    return out;
}

double predicted_fidelity(const UniversalityPlan& plan, double tau) {
    const double k2 = std::norm(plan.plus_amplitudes[0]);
    if (k2 == 0.0) return 0.0;
    double r = 0.0;
    const double e0 = plan.shifted_energies[0];
    for (Eigen::Index j = 1; j < plan.shifted_energies.size(); ++j) {
        r += std::norm(plan.plus_amplitudes[j]) * std::exp(-2.0 * (plan.shifted_energies[j] - e0) * tau);
    }
    return 1.0 / (1.0 + r / k2);
}

StateVector direct_path_state(const UniversalityPlan& plan, double tau) {
    const double e0 = plan.shifted_energies[0];
    Eigen::VectorXcd c = plan.plus_amplitudes;
    for (Eigen::Index j = 0; j < c.size(); ++j) c[j] *= std::exp(-(plan.shifted_energies[j] - e0) * tau);
    Eigen::VectorXcd amps = plan.eigenvectors * c;
    amps.normalize();
    return StateVector(plan.h_simplified.n_qubits(), std::move(amps), true);
}

double direct_path_fidelity(const UniversalityPlan& plan, double tau) {
    const StateVector ground(plan.h_simplified.n_qubits(), plan.eigenvectors.col(0), true);
    return fidelity(direct_path_state(plan, tau), ground);
}

UniversalityReport universality_check(const UniversalityPlan& plan) {
    UniversalityReport r;
    r.predicted_fidelity = plan.predicted_fidelity;
    if (plan.overlap_k < 1e-10) {
        r.convergence_possible = false;
        r.diagnostic = "|+>^N has zero overlap with the ground state; imaginary-time amplification cannot converge";
        return r;
    }
    const StateVector ground(plan.h_simplified.n_qubits(), plan.eigenvectors.col(0), true);
    const StateVector direct = direct_path_state(plan, plan.tau);
    r.direct_fidelity = fidelity(direct, ground);
    try {
        const StateVector trial = trial_state_exact(plan.theta_star, {TrialPath::kHiddenSum, ExpMethod::kDense});
        r.trial_fidelity = fidelity(trial, ground);
        r.trial_vs_direct = fidelity(trial, direct);
    } catch (const ContractError& e) {
        r.diagnostic = std::string("trial path unavailable: ") + e.what();
    }
    return r;
}

PauliSum random_simplified_hamiltonian(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PauliSum h(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (char op : kAxes) h.add(u(rng), PauliString::single(n, i, op));
    }
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t k = s + 1; k < n; ++k) {
            for (char op : kAxes) h.add(u(rng), PauliString::on(n, {{s, op}, {k, op}}));
        }
    }
    return h;
}

}  // namespace qrbm
