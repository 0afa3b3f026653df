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

#include "qrbm/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "qrbm/error.hpp"

namespace qrbm {

namespace {

std::uint64_t low_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

void check_qubit_count(std::size_t n) {
    if (n > PauliString::kMaxQubits) {
        throw CapacityError("PauliString supports at most 64 qubits, got " + std::to_string(n));
    }
}

}  // namespace

Complex to_complex(Phase p) {
    switch (p) {
        case Phase::kPlusOne:
            return {1.0, 0.0};
        case Phase::kPlusI:
            return {0.0, 1.0};
        case Phase::kMinusOne:
            return {-1.0, 0.0};
        case Phase::kMinusI:
            return {0.0, -1.0};
    }
    return {};
}

PauliString::PauliString(std::size_t n_qubits) : n_qubits_(n_qubits) { check_qubit_count(n_qubits); }

PauliString::PauliString(std::size_t n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : n_qubits_(n_qubits), x_(x_mask), z_(z_mask) {
    check_qubit_count(n_qubits);
    if (((x_ | z_) & ~low_mask(n_qubits)) != 0) {
        throw DimensionError("Pauli mask has bits beyond qubit " + std::to_string(n_qubits));
    }
}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit, char op) {
    return on(n_qubits, {{qubit, op}});
}

PauliString PauliString::on(std::size_t n_qubits, std::initializer_list<std::pair<std::size_t, char>> ops) {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    for (auto [q, op] : ops) {
        if (q >= n_qubits) throw DimensionError("qubit index out of range");
        const std::uint64_t bit = std::uint64_t{1} << q;
        switch (op) {
            case 'I':
                break;
            case 'X':
                x |= bit;
                break;
            case 'Y':
                x |= bit;
                z |= bit;
                break;
            case 'Z':
                z |= bit;
                break;
            default:
                throw ParseError(std::string("illegal Pauli character '") + op + "'", q);
        }
    }
    return PauliString(n_qubits, x, z);
}

std::size_t PauliString::weight() const noexcept { return static_cast<std::size_t>(std::popcount(x_ | z_)); }

std::vector<std::size_t> PauliString::support() const {
    std::vector<std::size_t> out;
    for (std::uint64_t m = x_ | z_; m != 0; m &= m - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    return out;
}

char PauliString::at(std::size_t qubit) const {
    if (qubit >= n_qubits_) throw DimensionError("qubit index out of range");
    const bool x = (x_ >> qubit) & 1U;
    const bool z = (z_ >> qubit) & 1U;
    if (x && z) return 'Y';
    if (x) return 'X';
    if (z) return 'Z';
    return 'I';
}

PauliString PauliString::embedded(std::size_t n_qubits, std::size_t offset) const {
    if (n_qubits_ + offset > n_qubits) throw DimensionError("embedding does not fit the target register");
    return PauliString(n_qubits, x_ << offset, z_ << offset);
}

PauliProduct pauli_mul(const PauliString& p, const PauliString& q) {
    if (p.n_qubits() != q.n_qubits()) throw DimensionError("pauli_mul: qubit counts differ");
    // p = i^{a} X^{x1} Z^{z1}, q = i^{b} X^{x2} Z^{z2};
    // Z^{z1} X^{x2} = (-1)^{|z1 & x2|} X^{x2} Z^{z1}.
    const std::uint64_t x = p.x_mask() ^ q.x_mask();
    const std::uint64_t z = p.z_mask() ^ q.z_mask();
    const int k = std::popcount(p.x_mask() & p.z_mask()) + std::popcount(q.x_mask() & q.z_mask()) -
                  std::popcount(x & z) + 2 * std::popcount(p.z_mask() & q.x_mask());
    return {static_cast<Phase>(((k % 4) + 4) % 4), PauliString(p.n_qubits(), x, z)};
}

bool commutes(const PauliString& p, const PauliString& q) {
    const int anti = std::popcount(p.x_mask() & q.z_mask()) + std::popcount(p.z_mask() & q.x_mask());
    return anti % 2 == 0;
}

PauliString parse_pauli_text(std::string_view text) {
    if (text.empty()) throw ParseError("empty Pauli text", 0);
    check_qubit_count(text.size());
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    for (std::size_t q = 0; q < text.size(); ++q) {
        const std::uint64_t bit = std::uint64_t{1} << q;
        switch (text[q]) {
            case 'I':
                break;
            case 'X':
                x |= bit;
                break;
            case 'Y':
                x |= bit;
                z |= bit;
                break;
            case 'Z':
                z |= bit;
                break;
            default:
                throw ParseError(std::string("illegal Pauli character '") + text[q] + "'", q);
        }
    }
    return PauliString(text.size(), x, z);
}

std::string format_pauli_text(const PauliString& p) {
    std::string out(p.n_qubits(), 'I');
    for (std::size_t q = 0; q < p.n_qubits(); ++q) out[q] = p.at(q);
    return out;
}

std::size_t PauliStringHash::operator()(const PauliString& p) const noexcept {
    std::uint64_t h = p.x_mask() * 0x9E3779B97F4A7C15ULL;
    h ^= p.z_mask() + 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h ^ p.n_qubits());
}

PauliSum::PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) { check_qubit_count(n_qubits); }

PauliSum& PauliSum::add(Complex coeff, const PauliString& p) {
    if (p.n_qubits() != n_qubits_) throw DimensionError("PauliSum::add: qubit counts differ");
    if (p.is_identity()) {
        identity_ += coeff;
        return *this;
    }
    if (auto it = index_.find(p); it != index_.end()) {
        terms_[it->second].coeff += coeff;
    } else {
        index_.emplace(p, terms_.size());
        terms_.push_back({coeff, p});
    }
    return *this;
}

PauliSum& PauliSum::add(Complex coeff, std::string_view pauli_text) { return add(coeff, parse_pauli_text(pauli_text)); }

PauliSum& PauliSum::add_identity(Complex coeff) {
    identity_ += coeff;
    return *this;
}

Complex PauliSum::coeff_of(const PauliString& p) const {
    if (p.is_identity()) return identity_;
    auto it = index_.find(p);
    return it == index_.end() ? Complex{} : terms_[it->second].coeff;
}

bool PauliSum::is_hermitian() const noexcept {
    if (identity_.imag() != 0.0) return false;
    return std::all_of(terms_.begin(), terms_.end(), [](const PauliTerm& t) { return t.coeff.imag() == 0.0; });
}

double PauliSum::coeff_norm() const noexcept {
    double s = 0.0;
    for (const auto& t : terms_) s += std::abs(t.coeff);
    return s;
}

std::size_t PauliSum::max_locality() const noexcept {
    std::size_t k = 0;
    for (const auto& t : terms_) k = std::max(k, t.string.weight());
    return k;
}

PauliSum& PauliSum::prune(double rel_tol) {
    double scale = std::abs(identity_);
    for (const auto& t : terms_) scale = std::max(scale, std::abs(t.coeff));
    const double cut = rel_tol * scale;
    auto clean = [cut](Complex c) {
        return Complex{std::abs(c.real()) <= cut ? 0.0 : c.real(), std::abs(c.imag()) <= cut ? 0.0 : c.imag()};
    };
    identity_ = clean(identity_);
    std::erase_if(terms_, [cut](const PauliTerm& t) { return std::abs(t.coeff) <= cut; });
    for (auto& t : terms_) t.coeff = clean(t.coeff);
    reindex();
    return *this;
}

PauliSum& PauliSum::scale(Complex factor) {
    identity_ *= factor;
    for (auto& t : terms_) t.coeff *= factor;
    return *this;
}

PauliSum PauliSum::embedded(std::size_t n_qubits, std::size_t offset) const {
    PauliSum out(n_qubits);
    out.identity_ = identity_;
    for (const auto& t : terms_) out.add(t.coeff, t.string.embedded(n_qubits, offset));
    return out;
}

void PauliSum::reindex() {
    index_.clear();
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i].string, i);
}

PauliSum sum_combine(const PauliSum& a, const PauliSum& b, double alpha, double beta) {
    if (a.n_qubits() != b.n_qubits()) throw DimensionError("sum_combine: qubit counts differ");
    PauliSum out(a.n_qubits());
    out.add_identity(alpha * a.identity_coeff() + beta * b.identity_coeff());
    for (const auto& t : a.terms()) out.add(alpha * t.coeff, t.string);
    for (const auto& t : b.terms()) out.add(beta * t.coeff, t.string);
    out.prune();
    return out;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
    if (a.n_qubits() != b.n_qubits()) throw DimensionError("multiply: qubit counts differ");
    const std::size_t n = a.n_qubits();
    // Treat the identity coefficient as an ordinary term during the product.
    std::vector<PauliTerm> lhs{{a.identity_coeff(), PauliString(n)}};
    std::vector<PauliTerm> rhs{{b.identity_coeff(), PauliString(n)}};
    lhs.insert(lhs.end(), a.terms().begin(), a.terms().end());
    rhs.insert(rhs.end(), b.terms().begin(), b.terms().end());
    PauliSum out(n);
    for (const auto& l : lhs) {
        if (l.coeff == Complex{}) continue;
        for (const auto& r : rhs) {
            if (r.coeff == Complex{}) continue;
            const auto [phase, s] = pauli_mul(l.string, r.string);
            out.add(to_complex(phase) * l.coeff * r.coeff, s);
        }
    }
    out.prune();
    return out;
}

PauliSum operator+(const PauliSum& a, const PauliSum& b) { return sum_combine(a, b, 1.0, 1.0); }
PauliSum operator-(const PauliSum& a, const PauliSum& b) { return sum_combine(a, b, 1.0, -1.0); }
PauliSum operator*(const PauliSum& a, const PauliSum& b) { return multiply(a, b); }
PauliSum operator*(double s, const PauliSum& a) {
    PauliSum out = a;
    out.scale(s);
    return out;
}

bool approx_equal(const PauliSum& a, const PauliSum& b, double tol) {
    if (a.n_qubits() != b.n_qubits()) return false;
    if (std::abs(a.identity_coeff() - b.identity_coeff()) > tol) return false;
    for (const auto& t : a.terms()) {
        if (std::abs(t.coeff - b.coeff_of(t.string)) > tol) return false;
    }
    for (const auto& t : b.terms()) {
        if (std::abs(t.coeff - a.coeff_of(t.string)) > tol) return false;
    }
    return true;
}

}  // namespace qrbm
