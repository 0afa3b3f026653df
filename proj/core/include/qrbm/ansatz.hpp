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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qrbm/pauli.hpp"
#include "qrbm/statevector.hpp"

namespace qrbm {

struct QiteOptions;

enum class BaseState {
    kPlusProduct,  // |+>^N
    kBellPairs,    // qubit i entangled with qubit i + N/2
};

std::string to_string(BaseState b);
BaseState base_state_from_string(const std::string& s);

/// Bound on every Boltzmann parameter.
inline constexpr double kMaxParameter = 30.0;

/// theta = {b_i^t, m_j, W_ij, K_sk^t}. Visible qubits are 0..N-1, hidden N..N+M-1.
/// t runs over x, y, z in that order; K pairs s<k are stored lexicographically.
struct QrbmParams {
    std::size_t n_visible = 0;
    std::size_t n_hidden = 0;
    std::vector<std::array<double, 3>> b;
    std::vector<double> m;
    std::vector<double> w;  // row-major N x M
    std::vector<std::array<double, 3>> k;
    BaseState base = BaseState::kPlusProduct;

    static QrbmParams zeros(std::size_t n_visible, std::size_t n_hidden, BaseState base = BaseState::kPlusProduct);

    static std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }
    /// Index of pair (s, k), s < k, in `k`.
    std::size_t pair_index(std::size_t s, std::size_t kk) const;
    std::pair<std::size_t, std::size_t> pair_at(std::size_t index) const;

    double& weight(std::size_t i, std::size_t j) { return w[i * n_hidden + j]; }
    double weight(std::size_t i, std::size_t j) const { return w[i * n_hidden + j]; }

    std::size_t num_parameters() const;
    /// Flat order: b, m, W, K.
    std::vector<double> flatten() const;
    void assign(const std::vector<double>& flat);
    std::string parameter_name(std::size_t index) const;

    /// Throws ContractError on shape mismatch, non-finite or out-of-bound entries,
    /// or a Bell base with odd N.
    void validate() const;

    friend bool operator==(const QrbmParams&, const QrbmParams&) = default;
};

/// H_RBM(theta) on N+M qubits. Terms appear in the order b, m, W, K.
PauliSum build_hrbm(const QrbmParams& p);

/// H_RBM(theta, h) on N qubits; bit j of `hidden` is h_j, entering as (1 - 2 h_j).
PauliSum build_hrbm_fixed_hidden(const QrbmParams& p, std::uint64_t hidden);

StateVector base_state(BaseState base, std::size_t n_qubits);

enum class TrialPath {
    kHiddenSum,         // sum_h exp(H(theta,h)) |base>
    kJointPostselect,   // exp(H_RBM) on N+M qubits, then <+| on the hidden layer
};
enum class ExpMethod {
    kTaylor,  // action of the exponential on the vector
    kDense,   // eigendecomposition of the dense matrix
};

struct TrialOptions {
    TrialPath path = TrialPath::kHiddenSum;
    ExpMethod method = ExpMethod::kTaylor;
};

/// Normalized 2L-QRBM trial state on the visible register.
StateVector trial_state_exact(const QrbmParams& p, const TrialOptions& opts = {});

/// Trial state with exp(H_RBM) prepared by QITE and the hidden layer post-selected.
StateVector trial_state_qite(const QrbmParams& p, const QiteOptions& opts);

struct ClassicalRbmParams {
    std::size_t n_visible = 0;
    std::size_t n_hidden = 0;
    std::vector<double> b;
    std::vector<double> m;
    std::vector<double> w;  // row-major N x M
    std::vector<double> k;  // pairs s<k, lexicographic

    void validate() const;
};

struct ClassicalRbmConvention {
    /// Flip every parameter sign, giving the positive-exponent closed form.
    bool positive_exponent = false;
    /// Visible units take values in {-1,+1} (bit b -> 1 - 2b) instead of {0,1}.
    bool visible_plus_minus = false;
    /// Hidden units summed over {0,1} instead of {-1,+1}.
    bool hidden_zero_one = false;
};

/// Psi(v) = 2^{-M} sum_h e^{-E(v,h)} in closed form,
/// E(v,h) = sum b_i v_i + sum m_j h_j + sum W_ij v_i h_j + sum_{s<k} K_sk v_s v_k.
/// Bit i of `v` is visible unit i. The 2^{-M} factor is dropped for {0,1} hidden units.
double classical_rbm_amplitude(const ClassicalRbmParams& p, std::uint64_t v, const ClassicalRbmConvention& c = {});

/// Key-value text form: lines `N n`, `M m`, `base name`, `b i t v`, `m j v`, `W i j v`, `K s k t v`.
std::string format_params(const QrbmParams& p);
QrbmParams parse_params(const std::string& text);

}  // namespace qrbm
