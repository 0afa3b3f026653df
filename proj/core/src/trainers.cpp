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

#include "qrbm/trainers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "qrbm/error.hpp"
#include "qrbm/exactdiag.hpp"

namespace qrbm {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::size_t> active_indices(const ParameterMask& mask, std::size_t n) {
    if (!mask.empty() && mask.size() != n) throw DimensionError("parameter mask length mismatch");
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (mask.empty() || mask[i]) out.push_back(i);
    }
    return out;
}

void clamp_flat(std::vector<double>& x) {
    for (double& v : x) v = std::clamp(v, -kMaxParameter, kMaxParameter);
}

QrbmParams with_flat(const QrbmParams& shape, const std::vector<double>& flat) {
    QrbmParams p = shape;
    p.assign(flat);
    return p;
}

double condition_number(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
    const double lo = es.eigenvalues().cwiseAbs().minCoeff();
    if (hi == 0.0) return 1.0;
    return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

void SpsaSchedule::validate() const {
    if (!(a > 0.0) || !(c > 0.0)) throw ContractError("SpsaSchedule: a and c must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0) || !(gamma > 0.0 && gamma <= 1.0)) {
        throw ContractError("SpsaSchedule: alpha and gamma must lie in (0, 1]");
    }
    if (a_stability && !(*a_stability >= 0.0)) throw ContractError("SpsaSchedule: A_stability must be non-negative");
    if (max_iters == 0) throw ContractError("SpsaSchedule: max_iters must be positive");
}

double SpsaSchedule::stability() const { return a_stability.value_or(0.1 * static_cast<double>(max_iters)); }

double SpsaSchedule::gain_a(std::size_t k) const {
    return a / std::pow(static_cast<double>(k) + 1.0 + stability(), alpha);
}

double SpsaSchedule::gain_c(std::size_t k) const { return c / std::pow(static_cast<double>(k) + 1.0, gamma); }

void ItePath::validate() const {
    if (!(dtau > 0.0) || !std::isfinite(dtau)) throw ContractError("ItePath: dtau must be positive");
    if (!(tau_max >= 0.0) || !std::isfinite(tau_max)) throw ContractError("ItePath: tau_max must be non-negative");
    if (tau_max > 0.0 && dtau > tau_max) throw ContractError("ItePath: dtau exceeds tau_max");
    if (!(regularization >= 0.0)) throw ContractError("ItePath: regularization must be non-negative");
    if (!(fd_step >= 1e-6 && fd_step <= 1e-2)) throw ContractError("ItePath: fd_step must lie in [1e-6, 1e-2]");
}

std::string theta_hash(const std::vector<double>& theta) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[32];
    for (double v : theta) {
        const int len = std::snprintf(buf, sizeof buf, "%.17g;", v);
        for (int i = 0; i < len; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunTrace::to_csv() const {
    std::ostringstream os;
    os << "iter,objective,residual,cond_A,elapsed_ms,theta_hash\n";
    char buf[128];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.3f,", r.iter, r.objective, r.residual, r.cond_a,
                      r.elapsed_ms);
        os << buf << r.theta_hash << '\n';
    }
    return os.str();
}

ParameterMask first_register_mask(const QrbmParams& p, std::size_t n_first, std::optional<std::size_t> max_range) {
    ParameterMask mask(p.num_parameters(), false);
    std::size_t at = 0;
    for (std::size_t i = 0; i < p.n_visible; ++i) {
        for (int t = 0; t < 3; ++t) mask[at++] = i < n_first;
    }
    at += p.n_hidden + p.n_visible * p.n_hidden;
    for (std::size_t idx = 0; idx < p.k.size(); ++idx) {
        const auto [s, k] = p.pair_at(idx);
        const bool ok = k < n_first && (!max_range || k - s <= *max_range);
        for (int t = 0; t < 3; ++t) mask[at++] = ok;
    }
    return mask;
}

SpsaResult spsa_minimize(const Objective& objective, const QrbmParams& theta0, const SpsaSchedule& sched,
                         const ParameterMask& mask, bool record_timing) {
    sched.validate();
    theta0.validate();
    const std::size_t dim = theta0.num_parameters();
    const std::vector<std::size_t> active = active_indices(mask, dim);
    std::mt19937_64 rng(sched.seed);
    const auto start = Clock::now();

    auto eval = [&](const std::vector<double>& x) {
        double v = std::numeric_limits<double>::infinity();
        try {
            v = objective(with_flat(theta0, x));
        } catch (const NumericalError&) {
        }
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    SpsaResult out;
    std::vector<double> x = theta0.flatten();
    std::vector<double> best_x = x;
    double best = eval(x);
    double shrink = 1.0;
    auto consider = [&](const std::vector<double>& cand, double v) {
        if (v < best) {
            best = v;
            best_x = cand;
        }
    };

    std::vector<double> delta(dim, 0.0);
    for (std::size_t k = 0; k < sched.max_iters; ++k) {
        const double ak = shrink * sched.gain_a(k);
        const double ck = sched.gain_c(k);
        for (std::size_t i : active) delta[i] = (rng() & 1U) ? 1.0 : -1.0;
        std::vector<double> xp = x;
        std::vector<double> xm = x;
        for (std::size_t i : active) {
            xp[i] += ck * delta[i];
            xm[i] -= ck * delta[i];
        }
        clamp_flat(xp);
        clamp_flat(xm);
        const double fp = eval(xp);
        const double fm = eval(xm);
        double grad_norm = std::numeric_limits<double>::quiet_NaN();
        if (std::isfinite(fp) && std::isfinite(fm)) {
            consider(xp, fp);
            consider(xm, fm);
            const double g = (fp - fm) / (2.0 * ck);
            std::vector<double> xn = x;
            for (std::size_t i : active) xn[i] -= ak * g * delta[i];
            clamp_flat(xn);
            const double fn = eval(xn);
            grad_norm = std::abs(g) * std::sqrt(static_cast<double>(active.size()));
            if (std::isfinite(fn)) {
                x = std::move(xn);
                consider(x, fn);
            } else {
                shrink *= 0.5;
                ++out.rejected_steps;
            }
        } else {
            shrink *= 0.5;
            ++out.rejected_steps;
        }
        TraceRecord rec;
        rec.iter = k;
        rec.theta = x;
        rec.objective = best;
        rec.residual = grad_norm;
        rec.cond_a = std::numeric_limits<double>::quiet_NaN();
        rec.elapsed_ms =
            record_timing ? std::chrono::duration<double, std::milli>(Clock::now() - start).count() : 0.0;
        rec.theta_hash = theta_hash(x);
        out.trace.records.push_back(std::move(rec));
    }
    out.best = with_flat(theta0, best_x);
    out.best_value = best;
    return out;
}

EnergyObjective ground_state_energy_objective(const PauliSum& h, TrialMode mode, const TrialOptions& trial,
                                              const QiteOptions& qite) {
    if (!h.is_hermitian()) throw ContractError("energy objective requires a Hermitian operator");
    auto failures = std::make_shared<std::size_t>(0);
    EnergyObjective out;
    out.postselection_failures = failures;
    out.fn = [h, mode, trial, qite, failures](const QrbmParams& p) {
        if (p.n_visible != h.n_qubits()) throw DimensionError("energy objective: N does not match the Hamiltonian");
        try {
            const StateVector psi = mode == TrialMode::kExact ? trial_state_exact(p, trial) : trial_state_qite(p, qite);
            return expectation(h, psi);
        } catch (const PostselectionError&) {
            ++*failures;
            return std::numeric_limits<double>::infinity();
        }
    };
    return out;
}

McLachlanSystem mclachlan_system(const QrbmParams& theta, const PauliSum& h, const ItePath& path,
                                 const ParameterMask& mask, const TrialOptions& trial) {
    path.validate();
    theta.validate();
    if (h.n_qubits() != theta.n_visible) throw DimensionError("mclachlan_system: N does not match the Hamiltonian");
    McLachlanSystem sys;
    sys.active = active_indices(mask, theta.num_parameters());
    const StateVector psi = trial_state_exact(theta, trial);
    const StateVector hpsi = apply_pauli_sum(h, psi);
    sys.energy = inner(psi, hpsi).real();

    const auto n_act = static_cast<Eigen::Index>(sys.active.size());
    Eigen::MatrixXcd tangents(static_cast<Eigen::Index>(psi.dim()), n_act);
    const std::vector<double> flat = theta.flatten();
    const double step = path.fd_step;
    for (Eigen::Index m = 0; m < n_act; ++m) {
        const std::size_t idx = sys.active[static_cast<std::size_t>(m)];
        std::vector<double> fp = flat;
        std::vector<double> fm = flat;
        fp[idx] += step;
        fm[idx] -= step;
        const StateVector sp = trial_state_exact(with_flat(theta, fp), trial);
        const StateVector sm = trial_state_exact(with_flat(theta, fm), trial);
        tangents.col(m) = (sp.amplitudes() - sm.amplitudes()) / (2.0 * step);
        if (!tangents.col(m).allFinite()) {
            throw NumericalError("non-finite tangent for parameter " + theta.parameter_name(idx));
        }
    }
    sys.a = (tangents.adjoint() * tangents).real();
    sys.c = -(tangents.adjoint() * hpsi.amplitudes()).real();
    return sys;
}

VarIteStep var_ite_step(const QrbmParams& theta, const PauliSum& h, const ItePath& path, const ParameterMask& mask,
                        const TrialOptions& trial) {
    const McLachlanSystem sys = mclachlan_system(theta, h, path, mask, trial);
    VarIteStep out;
    out.energy = sys.energy;
    out.cond_a = condition_number(sys.a);
    const Eigen::Index n = sys.a.rows();
    out.theta_dot = Eigen::VectorXd::Zero(n);
    const double max_diag = n > 0 ? sys.a.diagonal().maxCoeff() : 0.0;
    if (max_diag > 0.0) {
        Eigen::MatrixXd reg = sys.a;
        reg.diagonal().array() += path.regularization * max_diag;
        out.theta_dot = reg.ldlt().solve(sys.c);
    }
    if (!out.theta_dot.allFinite()) throw NumericalError("var_ite_step: non-finite parameter velocity");
    out.residual = (sys.a * out.theta_dot - sys.c).norm();
    std::vector<double> flat = theta.flatten();
    for (Eigen::Index m = 0; m < n; ++m) flat[sys.active[static_cast<std::size_t>(m)]] += out.theta_dot[m] * path.dtau;
    clamp_flat(flat);
    out.next = with_flat(theta, flat);
    return out;
}

GibbsResult gibbs_train(const PauliSum& h, double beta, const QrbmParams& theta0, ItePath path,
                        const ParameterMask& mask, bool record_timing) {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ContractError("gibbs_train requires finite beta >= 0");
    if (theta0.base != BaseState::kBellPairs) throw ContractError("gibbs_train requires the bell_pairs base");
    const std::size_t n = h.n_qubits();
    if (theta0.n_visible != 2 * n) throw DimensionError("gibbs_train: theta0 must have 2N visible nodes");
    path.tau_max = 0.5 * beta;
    if (path.tau_max > 0.0 && path.dtau > path.tau_max) path.dtau = path.tau_max;
    path.validate();

    const PauliSum h_full = h.embedded(2 * n, 0);
    TrialOptions trial;
    {
        // The first-register fast path can use dense exponentials of the N-qubit block.
        const ParameterMask reg1 = first_register_mask(theta0, n);
        const auto act = active_indices(mask, theta0.num_parameters());
        const bool first_only = std::all_of(act.begin(), act.end(), [&](std::size_t i) { return reg1[i]; });
        trial.method = first_only && n <= kMaxDenseQubits ? ExpMethod::kDense : ExpMethod::kTaylor;
    }

    GibbsResult out;
    out.theta = theta0;
    const auto start = Clock::now();
    double tau = 0.0;
    std::size_t iter = 0;
    while (tau < path.tau_max - 1e-12) {
        ItePath local = path;
        local.dtau = std::min(path.dtau, path.tau_max - tau);
        local.tau_max = std::max(local.tau_max, local.dtau);
        const VarIteStep step = var_ite_step(out.theta, h_full, local, mask, trial);
        out.theta = step.next;
        tau += local.dtau;
        TraceRecord rec;
        rec.iter = iter++;
        rec.theta = out.theta.flatten();
        rec.objective = step.energy;
        rec.residual = step.residual;
        rec.cond_a = step.cond_a;
        rec.elapsed_ms =
            record_timing ? std::chrono::duration<double, std::milli>(Clock::now() - start).count() : 0.0;
        rec.theta_hash = theta_hash(rec.theta);
        out.trace.records.push_back(std::move(rec));
    }
    out.state = trial_state_exact(out.theta, trial);
    out.fidelity = fidelity(out.state, gibbs_purification(h, beta));
    return out;
}

}  // namespace qrbm
