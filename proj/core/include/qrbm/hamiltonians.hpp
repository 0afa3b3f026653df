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

#include <filesystem>
#include <string>
#include <string_view>

#include "qrbm/pauli.hpp"

namespace qrbm {

/// Open spin-1/2 chain H = -J sum Z_i X_{i+1} Z_{i+2} - h1 sum X_i - h2 sum X_i X_{i+1}.
struct HaldaneSpec {
    std::size_t n = 3;
    double j = 1.0;
    double h1 = 0.0;
    double h2 = 0.0;
};

/// Terms in the order ZXZ, X, XX. Zero-coefficient groups are omitted.
PauliSum haldane_chain(const HaldaneSpec& spec);

/// Pauli-sum text: optional `qubits <n>` header, then `<coeff> <pauli-text>` lines.
/// `#` starts a comment. Coefficients must be real.
PauliSum parse_pauli_sum(std::string_view text);
/// Canonical text: header, identity line (if nonzero), then terms; %.17g coefficients.
std::string format_pauli_sum(const PauliSum& h);

PauliSum load_pauli_sum(const std::filesystem::path& path);
void save_pauli_sum(const PauliSum& h, const std::filesystem::path& path);

}  // namespace qrbm
