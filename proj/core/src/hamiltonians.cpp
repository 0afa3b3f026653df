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

#include "qrbm/hamiltonians.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "qrbm/error.hpp"

namespace qrbm {

PauliSum haldane_chain(const HaldaneSpec& spec) {
    if (spec.n < 3) throw ContractError("haldane_chain requires N >= 3");
    const std::size_t n = spec.n;
    PauliSum h(n);
    if (spec.j != 0.0) {
        for (std::size_t i = 0; i + 2 < n; ++i) h.add(-spec.j, PauliString::on(n, {{i, 'Z'}, {i + 1, 'X'}, {i + 2, 'Z'}}));
    }
    if (spec.h1 != 0.0) {
        for (std::size_t i = 0; i < n; ++i) h.add(-spec.h1, PauliString::single(n, i, 'X'));
    }
    if (spec.h2 != 0.0) {
        for (std::size_t i = 0; i + 1 < n; ++i) h.add(-spec.h2, PauliString::on(n, {{i, 'X'}, {i + 1, 'X'}}));
    }
    return h;
}

PauliSum parse_pauli_sum(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> header;
    struct Row {
        double coeff;
        PauliString p;
    };
    std::vector<Row> rows;
    std::optional<std::size_t> width;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "qubits") {
            if (header || !rows.empty()) throw ParseError("qubits header must come first and once", line_no);
            std::string v;
            std::string extra;
            if (!(ls >> v) || (ls >> extra)) throw ParseError("expected `qubits <n>`", line_no);
            std::size_t pos = 0;
            unsigned long n = 0;
            try {
                n = std::stoul(v, &pos);
            } catch (const std::exception&) {
                throw ParseError("bad qubit count '" + v + "'", line_no);
            }
            if (pos != v.size() || n == 0 || n > PauliString::kMaxQubits) {
                throw ParseError("bad qubit count '" + v + "'", line_no);
            }
            header = n;
            continue;
        }
        std::string pauli;
        std::string extra;
        if (!(ls >> pauli) || (ls >> extra)) throw ParseError("expected `<coeff> <pauli>`", line_no);
        std::size_t pos = 0;
        double c = 0.0;
        bool ok = true;
        try {
            c = std::stod(first, &pos);
        } catch (const std::exception&) {
            ok = false;
        }
        if (!ok || pos != first.size()) {
            if (first.find_first_of("ij(,") != std::string::npos) {
                throw ParseError("complex coefficient '" + first + "' rejected; Hamiltonians must be Hermitian",
                                 line_no);
            }
            throw ParseError("bad coefficient '" + first + "'", line_no);
        }
        if (!std::isfinite(c)) throw ParseError("non-finite coefficient", line_no);
        PauliString p;
        try {
            p = parse_pauli_text(pauli);
        } catch (const ParseError& e) {
            throw ParseError(std::string("bad Pauli text: ") + e.what(), line_no);
        }
        if (pauli.empty() || (width && *width != pauli.size())) throw ParseError("inconsistent Pauli length", line_no);
        if (header && *header != pauli.size()) throw ParseError("Pauli length does not match qubits header", line_no);
        width = pauli.size();
        rows.push_back({c, p});
    }
    if (!header && !width) throw ParseError("empty Pauli sum without a qubits header", line_no);
    PauliSum h(header ? *header : *width);
    for (const auto& r : rows) h.add(r.coeff, r.p);
    return h;
}

std::string format_pauli_sum(const PauliSum& h) {
    if (!h.is_hermitian()) throw ContractError("format_pauli_sum requires real coefficients");
    std::string out = "qubits " + std::to_string(h.n_qubits()) + "\n";
    char buf[64];
    if (h.identity_coeff() != Complex{}) {
        std::snprintf(buf, sizeof buf, "%.17g ", h.identity_coeff().real());
        out += buf + std::string(h.n_qubits(), 'I') + "\n";
    }
    for (const auto& t : h.terms()) {
        std::snprintf(buf, sizeof buf, "%.17g ", t.coeff.real());
        out += buf + format_pauli_text(t.string) + "\n";
    }
    return out;
}

PauliSum load_pauli_sum(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open Pauli-sum file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pauli_sum(ss.str());
}

void save_pauli_sum(const PauliSum& h, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write Pauli-sum file " + path.string());
    out << format_pauli_sum(h);
}

}  // namespace qrbm
