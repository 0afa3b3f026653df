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

#include "qrbm/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "qrbm/error.hpp"
#include "qrbm/exactdiag.hpp"
#include "qrbm/qite.hpp"

namespace qrbm {

namespace {

constexpr char kAxes[3] = {'X', 'Y', 'Z'};
constexpr char kAxisNames[3] = {'x', 'y', 'z'};

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Combine sum_i e^{log_i} dir_i without overflow.
Eigen::VectorXcd log_sum(const std::vector<ScaledState>& parts) {
    double top = -INFINITY;
    for (const auto& s : parts) top = std::max(top, s.log_norm);
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(parts.front().direction.amplitudes().size());
    for (const auto& s : parts) acc += std::exp(s.log_norm - top) * s.direction.amplitudes();
    return acc;
}

ScaledState dense_action(const PauliSum& h, const StateVector& psi) {
    const HermitianEigen es = hermitian_eigen(to_dense(h));
    const double top = es.values.maxCoeff();
    const Eigen::VectorXcd f = (es.values.array() - top).exp().cast<Complex>();
    Eigen::VectorXcd v = es.vectors * (f.asDiagonal() * (es.vectors.adjoint() * psi.amplitudes()));
    const double n = v.norm();
    if (!(n > 0.0)) throw NumericalError("trial state: exponential annihilated the base state");
    v /= n;
    return {StateVector(psi.n_qubits(), std::move(v), true), top + std::log(n)};
}

ScaledState exp_action(const PauliSum& h, const StateVector& psi, ExpMethod method) {
    return method == ExpMethod::kDense ? dense_action(h, psi) : expm_multiply_scaled(h, psi);
}

// True when every nonzero parameter lives on the first half of a Bell-paired register.
bool first_register_only(const QrbmParams& p) {
    if (p.base != BaseState::kBellPairs || p.n_hidden != 0) return false;
    const std::size_t half = p.n_visible / 2;
    for (std::size_t i = half; i < p.n_visible; ++i) {
        for (double v : p.b[i]) {
            if (v != 0.0) return false;
        }
    }
    for (std::size_t idx = 0; idx < p.k.size(); ++idx) {
        if (p.pair_at(idx).second < half) continue;
        for (double v : p.k[idx]) {
            if (v != 0.0) return false;
        }
    }
    return true;
}

// (e^{H_1} (x) I) 2^{-n/2} sum_x |x>|x>, computed on the first register alone.
StateVector first_register_trial(const QrbmParams& p, ExpMethod method) {
    const std::size_t half = p.n_visible / 2;
    const PauliSum full = build_hrbm(p);
    PauliSum h1(half);
    h1.add_identity(full.identity_coeff());
    const std::uint64_t low = (std::uint64_t{1} << half) - 1;
    for (const auto& t : full.terms()) h1.add(t.coeff, PauliString(half, t.string.x_mask() & low, t.string.z_mask() & low));
    const Eigen::Index d = Eigen::Index{1} << half;
    DenseMatrix a(d, d);
    if (method == ExpMethod::kDense) {
        a = expm_hermitian(to_dense(h1), 1.0);
    } else {
        std::vector<ScaledState> cols;
        cols.reserve(static_cast<std::size_t>(d));
        for (Eigen::Index x = 0; x < d; ++x) {
            cols.push_back(expm_multiply_scaled(h1, StateVector::basis(half, static_cast<std::uint64_t>(x))));
        }
        double top = -INFINITY;
        for (const auto& c : cols) top = std::max(top, c.log_norm);
        for (Eigen::Index x = 0; x < d; ++x) {
            const auto& c = cols[static_cast<std::size_t>(x)];
            a.col(x) = std::exp(c.log_norm - top) * c.direction.amplitudes();
        }
    }
    Eigen::VectorXcd amps(d * d);
    for (Eigen::Index x = 0; x < d; ++x) amps.segment(x * d, d) = a.col(x);
    const double n = amps.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("trial state: non-finite amplitudes");
    amps /= n;
    return StateVector(p.n_visible, std::move(amps), true);
}

}  // namespace

std::string to_string(BaseState b) { return b == BaseState::kBellPairs ? "bell_pairs" : "plus_product"; }

BaseState base_state_from_string(const std::string& s) {
    if (s == "plus_product") return BaseState::kPlusProduct;
    if (s == "bell_pairs") return BaseState::kBellPairs;
    throw ParseError("unknown base state '" + s + "'", 0);
}

QrbmParams QrbmParams::zeros(std::size_t n_visible, std::size_t n_hidden, BaseState base) {
    QrbmParams p;
    p.n_visible = n_visible;
    p.n_hidden = n_hidden;
    p.b.assign(n_visible, {0.0, 0.0, 0.0});
    p.m.assign(n_hidden, 0.0);
    p.w.assign(n_visible * n_hidden, 0.0);
    p.k.assign(pair_count(n_visible), {0.0, 0.0, 0.0});
    p.base = base;
    return p;
}

std::size_t QrbmParams::pair_index(std::size_t s, std::size_t kk) const {
    if (!(s < kk && kk < n_visible)) throw DimensionError("pair_index requires s < k < N");
    // Pairs before row s: sum_{r<s} (N-1-r).
    return s * (2 * n_visible - s - 1) / 2 + (kk - s - 1);
}

std::pair<std::size_t, std::size_t> QrbmParams::pair_at(std::size_t index) const {
    std::size_t s = 0;
    while (index >= n_visible - 1 - s) {
        index -= n_visible - 1 - s;
        ++s;
    }
    return {s, s + 1 + index};
}

std::size_t QrbmParams::num_parameters() const { return 3 * n_visible + n_hidden + n_visible * n_hidden + 3 * pair_count(n_visible); }

std::vector<double> QrbmParams::flatten() const {
    std::vector<double> out;
    out.reserve(num_parameters());
    for (const auto& t : b) out.insert(out.end(), t.begin(), t.end());
    out.insert(out.end(), m.begin(), m.end());
    out.insert(out.end(), w.begin(), w.end());
    for (const auto& t : k) out.insert(out.end(), t.begin(), t.end());
    return out;
}

void QrbmParams::assign(const std::vector<double>& flat) {
    if (flat.size() != num_parameters()) throw DimensionError("assign: flat parameter length mismatch");
    std::size_t at = 0;
    for (auto& t : b) {
        for (double& v : t) v = flat[at++];
    }
    for (double& v : m) v = flat[at++];
    for (double& v : w) v = flat[at++];
    for (auto& t : k) {
        for (double& v : t) v = flat[at++];
    }
}

std::string QrbmParams::parameter_name(std::size_t index) const {
    if (index >= num_parameters()) throw DimensionError("parameter index out of range");
    if (index < 3 * n_visible) {
        return "b[" + std::to_string(index / 3) + "]." + kAxisNames[index % 3];
    }
    index -= 3 * n_visible;
    if (index < n_hidden) return "m[" + std::to_string(index) + "]";
    index -= n_hidden;
    if (index < n_visible * n_hidden) {
        return "W[" + std::to_string(index / n_hidden) + "," + std::to_string(index % n_hidden) + "]";
    }
    index -= n_visible * n_hidden;
    const auto [s, kk] = pair_at(index / 3);
    return "K[" + std::to_string(s) + "," + std::to_string(kk) + "]." + kAxisNames[index % 3];
}

void QrbmParams::validate() const {
    if (b.size() != n_visible || m.size() != n_hidden || w.size() != n_visible * n_hidden ||
        k.size() != pair_count(n_visible)) {
        throw ContractError("QrbmParams: array sizes do not match N and M");
    }
    if (n_visible == 0) throw ContractError("QrbmParams: N must be positive");
    if (base == BaseState::kBellPairs && n_visible % 2 != 0) {
        throw ContractError("QrbmParams: bell_pairs base requires even N");
    }
    const std::vector<double> flat = flatten();
    for (std::size_t i = 0; i < flat.size(); ++i) {
        if (!std::isfinite(flat[i]) || std::abs(flat[i]) > kMaxParameter) {
            throw ContractError("QrbmParams: " + parameter_name(i) + " is non-finite or exceeds the bound 30");
        }
    }
}

PauliSum build_hrbm(const QrbmParams& p) {
    p.validate();
    const std::size_t n = p.n_visible + p.n_hidden;
    PauliSum h(n);
    for (std::size_t i = 0; i < p.n_visible; ++i) {
        for (int t = 0; t < 3; ++t) {
            if (p.b[i][t] != 0.0) h.add(p.b[i][t], PauliString::single(n, i, kAxes[t]));
        }
    }
    for (std::size_t j = 0; j < p.n_hidden; ++j) {
        if (p.m[j] != 0.0) h.add(p.m[j], PauliString::single(n, p.n_visible + j, 'Z'));
    }
    for (std::size_t i = 0; i < p.n_visible; ++i) {
        for (std::size_t j = 0; j < p.n_hidden; ++j) {
            if (p.weight(i, j) != 0.0) h.add(p.weight(i, j), PauliString::on(n, {{i, 'Z'}, {p.n_visible + j, 'Z'}}));
        }
    }
    for (std::size_t idx = 0; idx < p.k.size(); ++idx) {
        const auto [s, kk] = p.pair_at(idx);
        for (int t = 0; t < 3; ++t) {
            if (p.k[idx][t] != 0.0) h.add(p.k[idx][t], PauliString::on(n, {{s, kAxes[t]}, {kk, kAxes[t]}}));
        }
    }
    return h;
}

PauliSum build_hrbm_fixed_hidden(const QrbmParams& p, std::uint64_t hidden) {
    p.validate();
    if (p.n_hidden < 64 && (hidden >> p.n_hidden) != 0) throw DimensionError("hidden configuration has too many bits");
    const std::size_t n = p.n_visible;
    auto sign = [hidden](std::size_t j) { return ((hidden >> j) & 1U) ? -1.0 : 1.0; };
    PauliSum h(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (int t = 0; t < 3; ++t) {
            if (p.b[i][t] != 0.0) h.add(p.b[i][t], PauliString::single(n, i, kAxes[t]));
        }
    }
    double shift = 0.0;
    for (std::size_t j = 0; j < p.n_hidden; ++j) shift += sign(j) * p.m[j];
    h.add_identity(shift);
    for (std::size_t i = 0; i < n; ++i) {
        double zc = 0.0;
        for (std::size_t j = 0; j < p.n_hidden; ++j) zc += sign(j) * p.weight(i, j);
        if (zc != 0.0) h.add(zc, PauliString::single(n, i, 'Z'));
    }
    for (std::size_t idx = 0; idx < p.k.size(); ++idx) {
        const auto [s, kk] = p.pair_at(idx);
        for (int t = 0; t < 3; ++t) {
            if (p.k[idx][t] != 0.0) h.add(p.k[idx][t], PauliString::on(n, {{s, kAxes[t]}, {kk, kAxes[t]}}));
        }
    }
    h.prune();
    return h;
}

StateVector base_state(BaseState base, std::size_t n_qubits) {
    if (base == BaseState::kPlusProduct) return StateVector::plus(n_qubits);
    if (n_qubits % 2 != 0) throw ContractError("bell_pairs base requires an even qubit count");
    const std::size_t half = n_qubits / 2;
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
    const double amp = std::pow(2.0, -0.5 * static_cast<double>(half));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << half); ++x) a[static_cast<Eigen::Index>(x | (x << half))] = amp;
    return StateVector(n_qubits, std::move(a), true);
}

StateVector trial_state_exact(const QrbmParams& p, const TrialOptions& opts) {
    p.validate();
    const std::size_t n = p.n_visible;
    if (first_register_only(p)) return first_register_trial(p, opts.method);
    const StateVector base = base_state(p.base, n);
    if (p.n_hidden == 0 || opts.path == TrialPath::kHiddenSum) {
        if (p.n_hidden >= 32) throw CapacityError("hidden-sum path limited to fewer than 32 hidden units");
        std::vector<ScaledState> parts;
        for (std::uint64_t h = 0; h < (std::uint64_t{1} << p.n_hidden); ++h) {
            parts.push_back(exp_action(build_hrbm_fixed_hidden(p, h), base, opts.method));
        }
        Eigen::VectorXcd acc = log_sum(parts);
        const double norm = acc.norm();
        if (!(norm > 1e-300) || !std::isfinite(norm)) throw PostselectionError("hidden sum cancelled to zero");
        acc /= norm;
        return StateVector(n, std::move(acc), true);
    }
    const StateVector joint = tensor_product(base, StateVector::plus(p.n_hidden));
    const ScaledState evolved = exp_action(build_hrbm(p), joint, opts.method);
    std::vector<std::size_t> hidden(p.n_hidden);
    std::iota(hidden.begin(), hidden.end(), n);
    return postselect_plus(evolved.direction, hidden).state;
}

StateVector trial_state_qite(const QrbmParams& p, const QiteOptions& opts) {
    p.validate();
    const StateVector joint = p.n_hidden == 0 ? base_state(p.base, p.n_visible)
                                              : tensor_product(base_state(p.base, p.n_visible), StateVector::plus(p.n_hidden));
    QiteOptions local = opts;
    local.compute_fidelity = false;
    const QiteResult r = qite_evolve(joint, build_hrbm(p), 1.0, local);
    if (p.n_hidden == 0) return r.state;
    std::vector<std::size_t> hidden(p.n_hidden);
    std::iota(hidden.begin(), hidden.end(), p.n_visible);
    return postselect_plus(r.state, hidden).state;
}

void ClassicalRbmParams::validate() const {
    if (b.size() != n_visible || m.size() != n_hidden || w.size() != n_visible * n_hidden ||
        k.size() != QrbmParams::pair_count(n_visible)) {
        throw ContractError("ClassicalRbmParams: array sizes do not match N and M");
    }
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(b) || !finite(m) || !finite(w) || !finite(k)) throw ContractError("ClassicalRbmParams: non-finite entry");
}

double classical_rbm_amplitude(const ClassicalRbmParams& p, std::uint64_t v, const ClassicalRbmConvention& c) {
    p.validate();
    const double sgn = c.positive_exponent ? -1.0 : 1.0;
    std::vector<double> vis(p.n_visible);
    for (std::size_t i = 0; i < p.n_visible; ++i) {
        const double bit = static_cast<double>((v >> i) & 1U);
        vis[i] = c.visible_plus_minus ? 1.0 - 2.0 * bit : bit;
    }
    double linear = 0.0;
    for (std::size_t i = 0; i < p.n_visible; ++i) linear += p.b[i] * vis[i];
    std::size_t idx = 0;
    for (std::size_t s = 0; s < p.n_visible; ++s) {
        for (std::size_t kk = s + 1; kk < p.n_visible; ++kk) linear += p.k[idx++] * vis[s] * vis[kk];
    }
    double amp = std::exp(-sgn * linear);
    for (std::size_t j = 0; j < p.n_hidden; ++j) {
        double x = p.m[j];
        for (std::size_t i = 0; i < p.n_visible; ++i) x += p.w[i * p.n_hidden + j] * vis[i];
        x *= sgn;
        // sum over h_j of e^{-h_j x}
        amp *= c.hidden_zero_one ? 1.0 + std::exp(-x) : std::cosh(x);
    }
    return amp;
}

std::string format_params(const QrbmParams& p) {
    std::ostringstream os;
    os << "N " << p.n_visible << "\nM " << p.n_hidden << "\nbase " << to_string(p.base) << "\n";
    for (std::size_t i = 0; i < p.n_visible; ++i) {
        for (int t = 0; t < 3; ++t) os << "b " << i << ' ' << kAxisNames[t] << ' ' << fmt17(p.b[i][t]) << '\n';
    }
    for (std::size_t j = 0; j < p.n_hidden; ++j) os << "m " << j << ' ' << fmt17(p.m[j]) << '\n';
    for (std::size_t i = 0; i < p.n_visible; ++i) {
        for (std::size_t j = 0; j < p.n_hidden; ++j) os << "W " << i << ' ' << j << ' ' << fmt17(p.weight(i, j)) << '\n';
    }
    for (std::size_t idx = 0; idx < p.k.size(); ++idx) {
        const auto [s, kk] = p.pair_at(idx);
        for (int t = 0; t < 3; ++t) {
            os << "K " << s << ' ' << kk << ' ' << kAxisNames[t] << ' ' << fmt17(p.k[idx][t]) << '\n';
        }
    }
    return os.str();
}

QrbmParams parse_params(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    long n = -1;
    long m = -1;
    BaseState base = BaseState::kPlusProduct;
    struct Entry {
        std::string kind;
        std::vector<std::string> fields;
        std::size_t line;
    };
    std::vector<Entry> entries;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        std::vector<std::string> fields;
        for (std::string f; ls >> f;) fields.push_back(f);
        if (key == "N" || key == "M") {
            if (fields.size() != 1) throw ParseError("expected one value after " + key, line_no);
            try {
                (key == "N" ? n : m) = std::stol(fields[0]);
            } catch (const std::exception&) {
                throw ParseError("bad count '" + fields[0] + "'", line_no);
            }
        } else if (key == "base") {
            if (fields.size() != 1) throw ParseError("expected one value after base", line_no);
            base = base_state_from_string(fields[0]);
        } else if (key == "b" || key == "m" || key == "W" || key == "K") {
            entries.push_back({key, fields, line_no});
        } else {
            throw ParseError("unknown key '" + key + "'", line_no);
        }
    }
    if (n <= 0 || m < 0) throw ParseError("params document must declare N > 0 and M >= 0", line_no);
    QrbmParams p = QrbmParams::zeros(static_cast<std::size_t>(n), static_cast<std::size_t>(m), base);
    auto index = [](const std::string& s, std::size_t bound, std::size_t ln) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(s, &pos);
        } catch (const std::exception&) {
            throw ParseError("bad index '" + s + "'", ln);
        }
        if (pos != s.size() || v >= bound) throw ParseError("index '" + s + "' out of range", ln);
        return static_cast<std::size_t>(v);
    };
    auto axis = [](const std::string& s, std::size_t ln) {
        if (s == "x") return 0;
        if (s == "y") return 1;
        if (s == "z") return 2;
        throw ParseError("bad axis '" + s + "'", ln);
    };
    auto value = [](const std::string& s, std::size_t ln) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw ParseError("bad value '" + s + "'", ln);
        }
        if (pos != s.size()) throw ParseError("bad value '" + s + "'", ln);
        return v;
    };
    const std::size_t nn = p.n_visible;
    for (const auto& e : entries) {
        const auto& f = e.fields;
        const std::size_t want = e.kind == "b" ? 3 : e.kind == "m" ? 2 : e.kind == "W" ? 3 : 4;
        if (f.size() != want) throw ParseError("wrong field count for " + e.kind, e.line);
        if (e.kind == "b") {
            p.b[index(f[0], nn, e.line)][axis(f[1], e.line)] = value(f[2], e.line);
        } else if (e.kind == "m") {
            p.m[index(f[0], p.n_hidden, e.line)] = value(f[1], e.line);
        } else if (e.kind == "W") {
            p.weight(index(f[0], nn, e.line), index(f[1], p.n_hidden, e.line)) = value(f[2], e.line);
        } else {
            const std::size_t s = index(f[0], nn, e.line);
            const std::size_t kk = index(f[1], nn, e.line);
            if (s >= kk) throw ParseError("K pair requires s < k", e.line);
            p.k[p.pair_index(s, kk)][axis(f[2], e.line)] = value(f[3], e.line);
        }
    }
    p.validate();
    return p;
}

}  // namespace qrbm
