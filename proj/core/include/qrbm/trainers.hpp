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
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrbm/ansatz.hpp"
#include "qrbm/pauli.hpp"
#include "qrbm/qite.hpp"

namespace qrbm {

/// a_k = a / (k + 1 + A)^alpha, c_k = c / (k + 1)^gamma.
struct SpsaSchedule {
    double a = 0.2;
    double c = 0.1;
    /// Unset means 0.1 * max_iters.
    std::optional<double> a_stability;
    double alpha = 0.602;
    double gamma = 0.101;
    std::size_t max_iters = 1000;
    std::uint64_t seed = 0;

    void validate() const;
    double stability() const;
    double gain_a(std::size_t k) const;
    double gain_c(std::size_t k) const;
};

/// Imaginary-time integration settings for the McLachlan update.
struct ItePath {
    double dtau = 0.01;
    double tau_max = 1.0;
    /// Relative to the largest diagonal entry of A.
    double regularization = 1e-6;
    double fd_step = 1e-4;

    void validate() const;
};

struct TraceRecord {
    std::size_t iter = 0;
    std::vector<double> theta;
    double objective = 0.0;
    double residual = 0.0;
    double cond_a = 0.0;
    double elapsed_ms = 0.0;
    std::string theta_hash;
};

struct RunTrace {
    std::vector<TraceRecord> records;
    /// Columns iter, objective, residual, cond_A, elapsed_ms, theta_hash.
    std::string to_csv() const;
};

/// FNV-1a over the %.17g rendering of each entry.
std::string theta_hash(const std::vector<double>& theta);

using Objective = std::function<double(const QrbmParams&)>;

/// Which flat parameters a trainer may move. Empty means all.
using ParameterMask = std::vector<bool>;

/// Parameters acting only on visible qubits [0, n_first); K pairs further apart
/// than `max_range` are excluded when it is set.
ParameterMask first_register_mask(const QrbmParams& p, std::size_t n_first, std::optional<std::size_t> max_range = {});

struct SpsaResult {
    QrbmParams best;
    double best_value = 0.0;
    RunTrace trace;
    std::size_t rejected_steps = 0;
};

/// Minimize `objective` by simultaneous-perturbation stochastic approximation.
/// The trace objective column holds the best value seen so far.
SpsaResult spsa_minimize(const Objective& objective, const QrbmParams& theta0, const SpsaSchedule& sched,
                         const ParameterMask& mask = {}, bool record_timing = false);

enum class TrialMode { kExact, kQite };

struct EnergyObjective {
    Objective fn;
    /// Count of evaluations that hit an impossible post-selection.
    std::shared_ptr<std::size_t> postselection_failures;
};

/// theta -> <Psi_v(theta)|H|Psi_v(theta)>; an impossible post-selection maps to +inf.
EnergyObjective ground_state_energy_objective(const PauliSum& h, TrialMode mode, const TrialOptions& trial = {},
                                              const QiteOptions& qite = {});

struct VarIteStep {
    QrbmParams next;
    Eigen::VectorXd theta_dot;
    double residual = 0.0;  // ||A theta_dot - C||
    double cond_a = 0.0;
    double energy = 0.0;    // <H> before the step
};

/// Tangent matrix A_mn = Re<d_n Psi|d_m Psi> and force C_n = -Re<d_n Psi|H|Psi>.
struct McLachlanSystem {
    Eigen::MatrixXd a;
    Eigen::VectorXd c;
    double energy = 0.0;
    std::vector<std::size_t> active;  // flat indices
};

McLachlanSystem mclachlan_system(const QrbmParams& theta, const PauliSum& h, const ItePath& path,
                                 const ParameterMask& mask = {}, const TrialOptions& trial = {});

/// theta + A^{-1} C dtau with regularized solve.
VarIteStep var_ite_step(const QrbmParams& theta, const PauliSum& h, const ItePath& path,
                        const ParameterMask& mask = {}, const TrialOptions& trial = {});

struct GibbsResult {
    QrbmParams theta;
    RunTrace trace;
    double fidelity = 0.0;
    StateVector state;
};

/// Evolve a Bell-pair trial state on 2N visible qubits under H (x) I up to tau = beta / 2.
/// `path.tau_max` is overwritten by beta / 2.
GibbsResult gibbs_train(const PauliSum& h, double beta, const QrbmParams& theta0, ItePath path,
                        const ParameterMask& mask = {}, bool record_timing = false);

}  // namespace qrbm
