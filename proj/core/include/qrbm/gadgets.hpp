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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrbm/ansatz.hpp"
#include "qrbm/exactdiag.hpp"
#include "qrbm/pauli.hpp"

namespace qrbm {

// ---------------------------------------------------------------------------
// 3-local -> 2-local reduction

/// H3 = Y - 6 sum_m B_m1 B_m2 B_m3 on the system register.
struct Theorem2Input {
    PauliSum y;
    std::vector<std::array<PauliSum, 3>> b_triples;
    double delta = 0.1;
};

/// System qubits keep their indices; triple m uses ancillas n + 3m, n + 3m + 1, n + 3m + 2.
struct Theorem2Gadget {
    std::size_t n_system = 0;
    double delta = 0.0;
    PauliSum h;      // -(delta^-3 / 4) sum (ZZ + ZZ + ZZ - 3)
    PauliSum v;      // Y + delta^-1 sum B^2 - delta^-2 sum B (x) X
    PauliSum h2;     // h + v
    PauliSum h_eff;  // Y - 6 sum B B B (x) XXX
    PauliSum h3;     // Y - 6 sum B B B on the system alone
    double lambda_c = 0.0;
};

Theorem2Gadget theorem2_build(const Theorem2Input& input);

struct Theorem2Report {
    double deviation_at_zero = 0.0;   // ||Sigma_-(0) - H_eff||
    double max_deviation_window = 0.0;
    std::vector<double> window_z;
    std::vector<double> window_deviation;
    double ground_overlap = 0.0;      // |<v2|v3 (x) GHZ+>|^2 per ancilla triple
};

/// Self-energy check over z in [-||H_eff|| - eps, ||H_eff|| + eps].
Theorem2Report theorem2_verify(const Theorem2Gadget& g, std::size_t window_points = 9, double window_margin = 0.1);

// ---------------------------------------------------------------------------
// Cross-term elimination for alpha X_i Y_j

struct Theorem3Gadget {
    std::size_t n_system = 2;
    std::size_t i = 0;
    std::size_t j = 1;
    std::size_t ancilla = 2;
    double alpha = 0.0;
    double delta = 0.0;
    double e = 1.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;
    double h_i = 1.0;
    double h_j = 1.0;
    double delta_i = 1.0;
    double delta_j = 1.0;
    double k_ij = 1.0;
    PauliSum h2_star;              // on the system
    PauliSum penalty;              // delta^-1 |+><+|_k
    PauliSum gadget_hamiltonian;   // penalty + V1 + V2 + V3 on system + ancilla
};

/// Build the gadget for alpha X_i Y_j. Requires 0 < delta <= 0.25 and E != 0.
Theorem3Gadget theorem3_build(std::size_t i, std::size_t j, double alpha, double delta, double e,
                              std::optional<std::size_t> n_system = {});

/// H~(2*) + alpha X_i Y_j on the system register.
PauliSum theorem3_target(const Theorem3Gadget& g);

struct Theorem3Report {
    double deviation = 0.0;      // ||Sigma_-(z) - target restricted||
    double z = 0.0;              // evaluation point actually used
    bool z_shifted = false;
    double ground_overlap = 0.0; // gadget ground vs target ground (x) |->_k
};

Theorem3Report theorem3_verify(const Theorem3Gadget& g, const PauliSum& target);

/// Single-qubit and equal-axis two-qubit terms only.
bool is_simplified_form(const PauliSum& h);
/// Every term drawn from {X, Y, XX, YY} placements.
bool is_xy_form(const PauliSum& h);

// ---------------------------------------------------------------------------
// Universality parameter map

enum class HiddenMode {
    kSingleHidden,    // M = 1, W_i1 = w
    kDiagonalHidden,  // M = N, W_ii = w
};

std::string to_string(HiddenMode m);
HiddenMode hidden_mode_from_string(const std::string& s);

struct UniversalityPlan {
    PauliSum h_simplified;
    PauliSum h_tilde;  // h_simplified - (E0 + delta_shift) I
    HiddenMode hidden_mode = HiddenMode::kDiagonalHidden;
    double epsilon = 0.0;
    double e0 = 0.0;
    double gap = 0.0;
    double delta_shift = 0.0;
    double lambda_star = 0.0;
    double tau = 0.0;
    double w_coupling = 0.0;
    double overlap_k = 0.0;   // |<+^N|psi_0>|
    Eigen::VectorXd shifted_energies;
    Eigen::VectorXcd plus_amplitudes;  // <psi_j|+^N>
    DenseMatrix eigenvectors;
    QrbmParams theta_star;
    double predicted_fidelity = 0.0;
};

/// Build the plan. `lambda_star` defaults to the midpoint of the two lowest shifted levels.
/// Throws InputError for a non-simplified H or a degenerate ground level.
UniversalityPlan theorem4_params(const PauliSum& h_simplified, double epsilon, HiddenMode mode,
                                 std::optional<double> lambda_star = {});

/// Same plan with a different evolution time; theta_star and the prediction follow.
UniversalityPlan with_tau(const UniversalityPlan& plan, double tau);

/// Closed-form fidelity 1 / (1 + sum_{j>=1} |a_j|^2 e^{-2 (E~_j - E~_0) tau} / K^2).
double predicted_fidelity(const UniversalityPlan& plan, double tau);

/// Normalized e^{-tau (H~ - lambda* I)} |+>^N.
StateVector direct_path_state(const UniversalityPlan& plan, double tau);
double direct_path_fidelity(const UniversalityPlan& plan, double tau);

struct UniversalityReport {
    bool convergence_possible = true;
    std::string diagnostic;
    double predicted_fidelity = 0.0;
    double direct_fidelity = 0.0;
    double trial_fidelity = 0.0;
    double trial_vs_direct = 0.0;  // |<trial|direct>|^2
};

UniversalityReport universality_check(const UniversalityPlan& plan);

/// sum_i sum_t b_i^t sigma_i^t + sum_{s<k} sum_t K_sk^t sigma_s^t sigma_k^t with uniform [-1, 1] entries.
PauliSum random_simplified_hamiltonian(std::size_t n, std::mt19937_64& rng);

}  // namespace qrbm
