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

#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <Eigen/Core>

#include "qrbm/ansatz.hpp"
#include "qrbm/error.hpp"
#include "qrbm/exactdiag.hpp"
#include "qrbm/gadgets.hpp"
#include "qrbm/hamiltonians.hpp"
#include "qrbm/qite.hpp"
#include "qrbm/trainers.hpp"

namespace qrbm::harness {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

const std::set<std::string> kKinds = {"ground_state", "gibbs", "universality", "gadget_verify", "spectrum",
                                      "qite_bench"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Typed access to one object of the config, writing defaults back.
class Section {
   public:
    Section(Json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
        if (obj_.is_null()) obj_ = Json::object();
        if (!obj_.is_object()) fail("must be an object");
    }

    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(where_ + ": " + what); }

    void allow(std::initializer_list<const char*> keys) const {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto& [k, v] : obj_.items()) {
            if (!ok.count(k)) fail("unknown key '" + k + "'");
        }
    }

    bool has(const char* key) const { return obj_.contains(key) && !obj_.at(key).is_null(); }

    double num(const char* key, std::optional<double> def, double lo = -INFINITY, double hi = INFINITY) {
        if (!has(key)) {
            if (!def) fail(std::string("missing number '") + key + "'");
            obj_[key] = *def;
        }
        const Json& v = obj_.at(key);
        if (!v.is_number()) fail(std::string("'") + key + "' must be a number");
        const double d = v.get<double>();
        if (!std::isfinite(d) || d < lo || d > hi) {
            fail(std::string("'") + key + "' = " + fmt(d) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
        }
        return d;
    }

    std::optional<double> opt_num(const char* key, double lo = -INFINITY, double hi = INFINITY) {
        if (!has(key)) {
            obj_[key] = nullptr;
            return std::nullopt;
        }
        return num(key, std::nullopt, lo, hi);
    }

    std::uint64_t integer(const char* key, std::optional<std::uint64_t> def, std::uint64_t lo = 0,
                          std::uint64_t hi = UINT64_MAX) {
        if (!has(key)) {
            if (!def) fail(std::string("missing integer '") + key + "'");
            obj_[key] = *def;
        }
        const Json& v = obj_.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            fail(std::string("'") + key + "' must be a non-negative integer");
        }
        const auto u = v.get<std::uint64_t>();
        if (u < lo || u > hi) fail(std::string("'") + key + "' outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return u;
    }

    std::optional<std::uint64_t> opt_integer(const char* key, std::uint64_t lo = 0, std::uint64_t hi = UINT64_MAX) {
        if (!has(key)) {
            obj_[key] = nullptr;
            return std::nullopt;
        }
        return integer(key, std::nullopt, lo, hi);
    }

    std::string str(const char* key, std::optional<std::string> def, std::initializer_list<const char*> choices = {}) {
        if (!has(key)) {
            if (!def) fail(std::string("missing string '") + key + "'");
            obj_[key] = *def;
        }
        const Json& v = obj_.at(key);
        if (!v.is_string()) fail(std::string("'") + key + "' must be a string");
        std::string s = v.get<std::string>();
        if (choices.size() > 0 && std::find(choices.begin(), choices.end(), s) == choices.end()) {
            std::string list;
            for (const char* c : choices) list += std::string(list.empty() ? "" : ", ") + c;
            fail(std::string("'") + key + "' must be one of {" + list + "}, got '" + s + "'");
        }
        return s;
    }

    bool boolean(const char* key, bool def) {
        if (!has(key)) obj_[key] = def;
        if (!obj_.at(key).is_boolean()) fail(std::string("'") + key + "' must be a boolean");
        return obj_.at(key).get<bool>();
    }

    Section sub(const char* key) {
        if (!obj_.contains(key) || obj_.at(key).is_null()) obj_[key] = Json::object();
        return Section(obj_[key], where_ + "." + key);
    }

    Json& raw() { return obj_; }

   private:
    Json& obj_;
    std::string where_;
};

// ---------------------------------------------------------------------------
// Hamiltonian resolution

PauliSum hamiltonian_from(const Json& spec, const fs::path& base_dir, std::uint64_t seed) {
    if (spec.contains("file")) {
        fs::path p = spec.at("file").get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        return load_pauli_sum(p);
    }
    if (spec.contains("inline")) return parse_pauli_sum(spec.at("inline").get<std::string>());
    if (spec.contains("haldane")) {
        const Json& h = spec.at("haldane");
        return haldane_chain({h.at("n").get<std::size_t>(), h.at("j").get<double>(), h.at("h1").get<double>(),
                              h.at("h2").get<double>()});
    }
    const Json& r = spec.at("random_simplified");
    std::mt19937_64 rng(r.at("seed").is_null() ? seed : r.at("seed").get<std::uint64_t>());
    return random_simplified_hamiltonian(r.at("n").get<std::size_t>(), rng);
}

void validate_hamiltonian(Section h, const fs::path& base_dir) {
    h.allow({"file", "inline", "haldane", "random_simplified"});
    int count = static_cast<int>(h.has("file")) + static_cast<int>(h.has("inline")) +
                static_cast<int>(h.has("haldane")) + static_cast<int>(h.has("random_simplified"));
    if (count != 1) h.fail("exactly one of file, inline, haldane, random_simplified is required");
    if (h.has("file")) {
        fs::path p = h.str("file", std::nullopt);
        if (p.is_relative()) p = base_dir / p;
        if (!fs::exists(p)) h.fail("file '" + p.string() + "' does not exist");
    } else if (h.has("inline")) {
        h.str("inline", std::nullopt);
    } else if (h.has("haldane")) {
        Section s = h.sub("haldane");
        s.allow({"n", "j", "h1", "h2"});
        s.integer("n", std::nullopt, 3, 14);
        s.num("j", 1.0);
        s.num("h1", 0.0);
        s.num("h2", 0.0);
    } else {
        Section s = h.sub("random_simplified");
        s.allow({"n", "seed"});
        s.integer("n", std::nullopt, 1, 10);
        s.opt_integer("seed");
    }
}

// ---------------------------------------------------------------------------
// Per-kind validation

void validate_engine(Section e) {
    e.allow({"mode", "path", "method", "n_steps", "domain_size", "regularization", "shot_noise"});
    e.str("mode", "exact", {"exact", "qite"});
    e.str("path", "hidden_sum", {"hidden_sum", "joint_postselect"});
    e.str("method", "taylor", {"taylor", "dense"});
    e.integer("n_steps", 50, 1, 100000);
    e.opt_integer("domain_size", 1, kMaxQiteDomain);
    e.num("regularization", 1e-8, 0.0);
    e.opt_integer("shot_noise", 1);
}

void validate_ansatz(Section a, const std::string& default_base) {
    a.allow({"n_hidden", "base", "init", "init_scale", "params_file"});
    a.integer("n_hidden", 0, 0, 8);
    a.str("base", default_base, {"plus_product", "bell_pairs"});
    a.str("init", "zeros", {"zeros", "random"});
    a.num("init_scale", 0.1, 0.0, kMaxParameter);
    if (a.has("params_file")) a.str("params_file", std::nullopt);
    else a.raw()["params_file"] = nullptr;
}

TrialOptions trial_options(const Json& e) {
    TrialOptions t;
    t.path = e.at("path") == "joint_postselect" ? TrialPath::kJointPostselect : TrialPath::kHiddenSum;
    t.method = e.at("method") == "dense" ? ExpMethod::kDense : ExpMethod::kTaylor;
    return t;
}

QiteOptions qite_options(const Json& e, std::uint64_t seed) {
    QiteOptions q;
    q.n_steps = e.at("n_steps").get<std::size_t>();
    if (!e.at("domain_size").is_null()) q.domain_size = e.at("domain_size").get<std::size_t>();
    q.regularization = e.at("regularization").get<double>();
    if (!e.at("shot_noise").is_null()) q.shot_noise = e.at("shot_noise").get<std::uint64_t>();
    q.rng_seed = seed;
    return q;
}

QrbmParams initial_params(const Json& a, std::size_t n_visible, const fs::path& base_dir, std::uint64_t seed) {
    if (!a.at("params_file").is_null()) {
        fs::path p = a.at("params_file").get<std::string>();
        if (p.is_relative()) p = base_dir / p;
        std::ifstream in(p);
        if (!in) throw InputError("cannot open params file " + p.string());
        std::stringstream ss;
        ss << in.rdbuf();
        QrbmParams q = parse_params(ss.str());
        if (q.n_visible != n_visible) throw InputError("params file N does not match the Hamiltonian");
        return q;
    }
    const BaseState base = base_state_from_string(a.at("base").get<std::string>());
    QrbmParams p = QrbmParams::zeros(n_visible, a.at("n_hidden").get<std::size_t>(), base);
    if (a.at("init") == "random") {
        std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const double scale = a.at("init_scale").get<double>();
        std::vector<double> flat = p.flatten();
        for (double& v : flat) v = scale * u(rng);
        p.assign(flat);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Outputs

struct Artifacts {
    Json result = Json::object();
    RunTrace trace;
    std::map<std::string, std::string> plotdata;
    std::string hamiltonian_text;
    std::string params_text;
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError("cannot write " + p.string());
    out << text;
}

Json eigen_vector(const Eigen::VectorXd& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

// ---------------------------------------------------------------------------
// Kinds

void run_spectrum(const PauliSum& h, Artifacts& art) {
    const SpectralReport s = eigh(h);
    art.result["n_qubits"] = h.n_qubits();
    art.result["ground_energy"] = s.eigenvalues[0];
    art.result["gap"] = s.gap;
    art.result["degeneracy_flag"] = s.degeneracy_flag;
    art.result["norm"] = s.norm;
    art.result["eigenvalues"] = eigen_vector(s.eigenvalues);
    std::string csv = "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) csv += std::to_string(i) + "," + fmt(s.eigenvalues[i]) + "\n";
    art.plotdata["spectrum.csv"] = csv;
}

void run_ground_state(const ExperimentConfig& cfg, const PauliSum& h, Artifacts& art) {
    const Json& d = cfg.doc;
    const std::uint64_t seed = d.at("seed").get<std::uint64_t>();
    const Json& sp = d.at("trainer").at("spsa");
    SpsaSchedule sched;
    sched.a = sp.at("a").get<double>();
    sched.c = sp.at("c").get<double>();
    if (!sp.at("a_stability").is_null()) sched.a_stability = sp.at("a_stability").get<double>();
    sched.alpha = sp.at("alpha").get<double>();
    sched.gamma = sp.at("gamma").get<double>();
    sched.max_iters = sp.at("max_iters").get<std::size_t>();
    sched.seed = seed;
    const Json& e = d.at("engine");
    const TrialMode mode = e.at("mode") == "qite" ? TrialMode::kQite : TrialMode::kExact;
    const EnergyObjective obj = ground_state_energy_objective(h, mode, trial_options(e), qite_options(e, seed));
    const QrbmParams theta0 = initial_params(d.at("ansatz"), h.n_qubits(), cfg.base_dir, seed);
    const SpsaResult r = spsa_minimize(obj.fn, theta0, sched, {}, d.at("record_timing").get<bool>());
    const double exact = eigh(h).eigenvalues[0];
    art.trace = r.trace;
    art.params_text = format_params(r.best);
    art.result["energy"] = r.best_value;
    art.result["exact_ground_energy"] = exact;
    art.result["energy_error"] = r.best_value - exact;
    art.result["iterations"] = sched.max_iters;
    art.result["rejected_steps"] = r.rejected_steps;
    art.result["postselection_failures"] = *obj.postselection_failures;
    std::string csv = "iter,best_energy\n";
    for (const auto& rec : r.trace.records) csv += std::to_string(rec.iter) + "," + fmt(rec.objective) + "\n";
    art.plotdata["convergence.csv"] = csv;
}

void run_gibbs(const ExperimentConfig& cfg, const PauliSum& h, Artifacts& art) {
    const Json& d = cfg.doc;
    const std::uint64_t seed = d.at("seed").get<std::uint64_t>();
    const Json& ite = d.at("trainer").at("ite");
    const double beta = ite.at("beta").get<double>();
    ItePath path;
    path.dtau = ite.at("dtau").get<double>();
    path.regularization = ite.at("regularization").get<double>();
    path.fd_step = ite.at("fd_step").get<double>();
    const std::size_t n = h.n_qubits();
    if (2 * n > StateVector::kMaxQubits) throw CapacityError("gibbs: 2N exceeds the statevector bound");
    QrbmParams theta0 = initial_params(d.at("ansatz"), 2 * n, cfg.base_dir, seed);
    if (theta0.base != BaseState::kBellPairs) throw InputError("gibbs requires ansatz.base = bell_pairs");
    ParameterMask mask;
    const std::string m = ite.at("mask").get<std::string>();
    if (m == "first_register") mask = first_register_mask(theta0, n);
    if (m == "first_register_local") mask = first_register_mask(theta0, n, ite.at("max_range").get<std::size_t>());
    const GibbsResult g = gibbs_train(h, beta, theta0, path, mask, d.at("record_timing").get<bool>());
    art.trace = g.trace;
    art.params_text = format_params(g.theta);
    art.result["beta"] = beta;
    art.result["tau"] = 0.5 * beta;
    art.result["fidelity"] = g.fidelity;
    art.result["steps"] = g.trace.records.size();
    std::string energy = "tau,energy\n";
    for (std::size_t i = 0; i < g.trace.records.size(); ++i) {
        energy += fmt(path.dtau * static_cast<double>(i)) + "," + fmt(g.trace.records[i].objective) + "\n";
    }
    art.plotdata["energy_vs_tau.csv"] = energy;

    const Json& smp = d.at("sampling");
    const std::uint64_t shots = smp.at("shots").get<std::uint64_t>();
    const std::size_t top = smp.at("top").get<std::size_t>();
    if (shots > 0 && top > 0) {
        const StateVector oracle = gibbs_purification(h, beta);
        const std::vector<double> po = probabilities(oracle);
        const std::vector<double> pm = probabilities(g.state);
        const auto counts = sample_counts(g.state, shots, seed);
        std::vector<std::uint64_t> idx(po.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::uint64_t a, std::uint64_t b) { return po[a] > po[b]; });
        idx.resize(std::min<std::size_t>(top, idx.size()));
        double max_sampled = 0.0;
        double max_model = 0.0;
        Json rows = Json::array();
        std::string csv = "basis,oracle_probability,model_probability,sampled_frequency,abs_error\n";
        for (std::uint64_t i : idx) {
            const auto it = counts.find(i);
            const double freq = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(shots);
            const double err = std::abs(freq - po[i]);
            max_sampled = std::max(max_sampled, err);
            max_model = std::max(max_model, std::abs(pm[i] - po[i]));
            const std::string bs = basis_string(i, 2 * n);
            rows.push_back({{"basis", bs}, {"oracle", po[i]}, {"model", pm[i]}, {"sampled", freq}, {"abs_error", err}});
            csv += bs + "," + fmt(po[i]) + "," + fmt(pm[i]) + "," + fmt(freq) + "," + fmt(err) + "\n";
        }
        art.result["shots"] = shots;
        art.result["sampled_basis"] = rows;
        art.result["max_sampled_error"] = max_sampled;
        art.result["max_model_error"] = max_model;
        art.plotdata["sampled_probabilities.csv"] = csv;
    }
}

void run_universality(const ExperimentConfig& cfg, const PauliSum& h, Artifacts& art) {
    const Json& u = cfg.doc.at("universality");
    std::optional<double> lambda;
    if (!u.at("lambda_star").is_null()) lambda = u.at("lambda_star").get<double>();
    const UniversalityPlan plan = theorem4_params(h, u.at("epsilon").get<double>(),
                                                  hidden_mode_from_string(u.at("hidden_mode").get<std::string>()), lambda);
    const UniversalityReport rep = universality_check(plan);
    Json& r = art.result;
    r["n_qubits"] = h.n_qubits();
    r["e0"] = plan.e0;
    r["gap"] = plan.gap;
    r["delta_shift"] = plan.delta_shift;
    r["lambda_star"] = plan.lambda_star;
    r["tau"] = plan.tau;
    r["w_coupling"] = plan.w_coupling;
    r["overlap_k"] = plan.overlap_k;
    r["hidden_mode"] = to_string(plan.hidden_mode);
    r["convergence_possible"] = rep.convergence_possible;
    r["diagnostic"] = rep.diagnostic;
    r["predicted_fidelity"] = rep.predicted_fidelity;
    r["fidelity"] = rep.direct_fidelity;
    r["trial_fidelity"] = rep.trial_fidelity;
    r["trial_vs_direct"] = rep.trial_vs_direct;
    art.params_text = format_params(plan.theta_star);
    const std::size_t points = u.at("tau_grid_points").get<std::size_t>();
    std::string csv = "tau,direct_fidelity,predicted_fidelity\n";
    bool monotone = true;
    double prev = -1.0;
    for (std::size_t k = 1; k <= points; ++k) {
        const double tau = plan.tau * static_cast<double>(k) / static_cast<double>(points);
        const double f = rep.convergence_possible ? direct_path_fidelity(plan, tau) : 0.0;
        monotone = monotone && f >= prev - 1e-12;
        prev = f;
        csv += fmt(tau) + "," + fmt(f) + "," + fmt(predicted_fidelity(plan, tau)) + "\n";
    }
    r["monotone_in_tau"] = monotone;
    art.plotdata["fidelity_vs_tau.csv"] = csv;
}

void run_gadget(const ExperimentConfig& cfg, Artifacts& art) {
    const Json& g = cfg.doc.at("gadget");
    Json& r = art.result;
    if (g.at("theorem").get<int>() == 3) {
        const Theorem3Gadget t = theorem3_build(0, 1, g.at("alpha").get<double>(), g.at("delta").get<double>(),
                                                g.at("e").get<double>());
        const Theorem3Report rep = theorem3_verify(t, theorem3_target(t));
        r["theorem"] = 3;
        r["delta"] = t.delta;
        r["deviation"] = rep.deviation;
        r["z"] = rep.z;
        r["z_shifted"] = rep.z_shifted;
        r["ground_overlap"] = rep.ground_overlap;
        r["A"] = t.a;
        r["B"] = t.b;
        r["C"] = t.c;
        r["D"] = t.d;
        r["h_i"] = t.h_i;
        r["h_j"] = t.h_j;
        r["delta_i"] = t.delta_i;
        r["delta_j"] = t.delta_j;
        r["K_ij"] = t.k_ij;
        r["xy_only"] = is_xy_form(t.gadget_hamiltonian);
        art.hamiltonian_text = format_pauli_sum(t.gadget_hamiltonian);
        return;
    }
    Theorem2Input in;
    in.y = parse_pauli_sum(g.at("y").get<std::string>());
    for (const auto& tri : g.at("b_triples")) {
        in.b_triples.push_back({parse_pauli_sum(tri.at(0).get<std::string>()), parse_pauli_sum(tri.at(1).get<std::string>()),
                                parse_pauli_sum(tri.at(2).get<std::string>())});
    }
    in.delta = g.at("delta").get<double>();
    const Theorem2Gadget t = theorem2_build(in);
    const Theorem2Report rep = theorem2_verify(t, g.at("window_points").get<std::size_t>());
    r["theorem"] = 2;
    r["delta"] = t.delta;
    r["deviation"] = rep.deviation_at_zero;
    r["max_deviation_window"] = rep.max_deviation_window;
    r["ground_overlap"] = rep.ground_overlap;
    r["max_locality"] = t.h2.max_locality();
    std::string csv = "z,deviation\n";
    for (std::size_t k = 0; k < rep.window_z.size(); ++k) csv += fmt(rep.window_z[k]) + "," + fmt(rep.window_deviation[k]) + "\n";
    art.plotdata["self_energy_window.csv"] = csv;
    art.hamiltonian_text = format_pauli_sum(t.h2);
}

void run_qite_bench(const ExperimentConfig& cfg, const PauliSum& h, Artifacts& art) {
    const Json& b = cfg.doc.at("qite_bench");
    const double tau = b.at("tau").get<double>();
    QiteOptions opts = qite_options(cfg.doc.at("engine"), cfg.doc.at("seed").get<std::uint64_t>());
    const StateVector psi0 = StateVector::plus(h.n_qubits());
    std::string csv = "n_steps,infidelity\n";
    Json rows = Json::array();
    std::vector<double> ns;
    std::vector<double> infs;
    std::size_t iter = 0;
    for (const auto& nj : b.at("n_steps")) {
        opts.n_steps = nj.get<std::size_t>();
        const QiteResult q = qite_evolve(psi0, h, tau, opts);
        const double inf = 1.0 - q.fidelity_vs_exact.value_or(0.0);
        double max_res = 0.0;
        std::vector<double> last_a;
        for (const auto& rec : q.records) max_res = std::max(max_res, rec.residual);
        if (!q.records.empty()) last_a = q.records.back().a_coeffs;
        ns.push_back(static_cast<double>(opts.n_steps));
        infs.push_back(inf);
        rows.push_back({{"n_steps", opts.n_steps}, {"infidelity", inf}, {"max_residual", max_res}});
        csv += std::to_string(opts.n_steps) + "," + fmt(inf) + "\n";
        TraceRecord rec;
        rec.iter = iter++;
        rec.theta = last_a;
        rec.objective = inf;
        rec.residual = max_res;
        rec.cond_a = std::numeric_limits<double>::quiet_NaN();
        rec.theta_hash = theta_hash(last_a);
        art.trace.records.push_back(std::move(rec));
    }
    art.result["tau"] = tau;
    art.result["runs"] = rows;
    if (ns.size() >= 2 && infs.front() > 0.0 && infs.back() > 0.0) {
        art.result["order_exponent"] = -std::log(infs.back() / infs.front()) / std::log(ns.back() / ns.front());
    }
    art.plotdata["infidelity_vs_steps.csv"] = csv;
}

double headline_metric(const std::string& kind, const Json& result, std::string& name) {
    auto get = [&](const char* k) { return result.contains(k) && result.at(k).is_number() ? result.at(k).get<double>() : NAN; };
    if (kind == "ground_state") return name = "energy_error", get("energy_error");
    if (kind == "gibbs") return name = "fidelity", get("fidelity");
    if (kind == "universality") return name = "fidelity", get("fidelity");
    if (kind == "gadget_verify") return name = "deviation", get("deviation");
    if (kind == "spectrum") return name = "gap", get("gap");
    return name = "order_exponent", get("order_exponent");
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentConfig config_from_json(Json doc, fs::path base_dir) {
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    return {std::move(doc), std::move(base_dir)};
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    Json doc;
    try {
        doc = Json::parse(in, nullptr, true, true);
    } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    fs::path base = path.parent_path();
    if (base.empty()) base = ".";
    return config_from_json(std::move(doc), base);
}

void validate(ExperimentConfig& config) {
    Section top(config.doc, "config");
    top.allow({"kind", "seed", "output_dir", "record_timing", "hamiltonian", "ansatz", "trainer", "engine", "sampling",
               "universality", "gadget", "qite_bench", "description"});
    const std::string kind = top.str("kind", std::nullopt);
    if (!kKinds.count(kind)) top.fail("unknown kind '" + kind + "'");
    top.integer("seed", 0);
    top.boolean("record_timing", false);
    if (top.has("output_dir")) top.str("output_dir", std::nullopt);
    if (top.has("description")) top.str("description", std::nullopt);

    if (kind != "gadget_verify") {
        if (!config.doc.contains("hamiltonian")) top.fail("missing 'hamiltonian'");
        validate_hamiltonian(top.sub("hamiltonian"), config.base_dir);
    }
    auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys) {
            if (config.doc.contains(k)) top.fail(std::string("'") + k + "' is not used by kind " + kind);
        }
    };
    if (kind == "ground_state") {
        forbid({"sampling", "universality", "gadget", "qite_bench"});
        validate_ansatz(top.sub("ansatz"), "plus_product");
        Section tr = top.sub("trainer");
        tr.allow({"spsa"});
        Section sp = tr.sub("spsa");
        sp.allow({"a", "c", "a_stability", "alpha", "gamma", "max_iters"});
        sp.num("a", 0.2, 1e-12);
        sp.num("c", 0.1, 1e-12);
        sp.opt_num("a_stability", 0.0);
        sp.num("alpha", 0.602, 1e-12, 1.0);
        sp.num("gamma", 0.101, 1e-12, 1.0);
        sp.integer("max_iters", 1000, 1, 10000000);
        validate_engine(top.sub("engine"));
    } else if (kind == "gibbs") {
        forbid({"universality", "gadget", "qite_bench", "engine"});
        validate_ansatz(top.sub("ansatz"), "bell_pairs");
        Section tr = top.sub("trainer");
        tr.allow({"ite"});
        Section ite = tr.sub("ite");
        ite.allow({"beta", "dtau", "regularization", "fd_step", "mask", "max_range"});
        const double beta = ite.num("beta", 1.0, 0.0, 1e3);
        const double dtau = ite.num("dtau", 0.01, 1e-9);
        if (beta > 0.0 && dtau > 0.5 * beta) ite.fail("dtau exceeds beta / 2");
        ite.num("regularization", 1e-6, 0.0);
        ite.num("fd_step", 1e-4, 1e-6, 1e-2);
        ite.str("mask", "all", {"all", "first_register", "first_register_local"});
        ite.integer("max_range", 2, 1);
        Section s = top.sub("sampling");
        s.allow({"shots", "top"});
        s.integer("shots", 100000);
        s.integer("top", 16);
    } else if (kind == "universality") {
        forbid({"ansatz", "trainer", "engine", "sampling", "gadget", "qite_bench"});
        Section u = top.sub("universality");
        u.allow({"epsilon", "hidden_mode", "lambda_star", "tau_grid_points"});
        u.num("epsilon", 1e-2, 1e-300, 1.0);
        u.str("hidden_mode", "diagonal_hidden", {"single_hidden", "diagonal_hidden"});
        u.opt_num("lambda_star", 0.0);
        u.integer("tau_grid_points", 5, 1, 1000);
    } else if (kind == "gadget_verify") {
        forbid({"hamiltonian", "ansatz", "trainer", "engine", "sampling", "universality", "qite_bench"});
        Section g = top.sub("gadget");
        const auto theorem = g.integer("theorem", 3, 2, 3);
        if (theorem == 3) {
            g.allow({"theorem", "alpha", "delta", "e"});
            g.num("alpha", 0.5);
            g.num("delta", 0.1, 1e-6, 0.25);
            const double e = g.num("e", 1.0);
            if (e == 0.0) g.fail("'e' must be nonzero");
        } else {
            g.allow({"theorem", "delta", "y", "b_triples", "window_points"});
            g.num("delta", 0.1, 1e-6, 1.0);
            g.str("y", std::nullopt);
            g.integer("window_points", 9, 1, 1000);
            const Json& t = g.raw().at("b_triples");
            if (!t.is_array()) g.fail("'b_triples' must be an array of string triples");
            for (const auto& tri : t) {
                if (!tri.is_array() || tri.size() != 3 || !tri[0].is_string() || !tri[1].is_string() || !tri[2].is_string()) {
                    g.fail("each entry of 'b_triples' must be three Pauli-sum texts");
                }
            }
        }
    } else if (kind == "spectrum") {
        forbid({"ansatz", "trainer", "engine", "sampling", "universality", "gadget", "qite_bench"});
    } else if (kind == "qite_bench") {
        forbid({"ansatz", "trainer", "sampling", "universality", "gadget"});
        validate_engine(top.sub("engine"));
        Section b = top.sub("qite_bench");
        b.allow({"tau", "n_steps"});
        b.num("tau", 1.0, 0.0);
        if (!b.has("n_steps")) b.raw()["n_steps"] = Json::array({50, 100, 200});
        const Json& ns = b.raw().at("n_steps");
        if (!ns.is_array() || ns.empty()) b.fail("'n_steps' must be a non-empty array");
        for (const auto& v : ns) {
            if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0) b.fail("'n_steps' entries must be positive integers");
        }
    }
}

void set_dotted(Json& doc, const std::string& dotted, const Json& value) {
    if (dotted.empty()) throw ConfigError("sweep parameter path is empty");
    Json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("sweep parameter path '" + dotted + "' has an empty component");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        Json& next = (*node)[key];
        if (next.is_null()) next = Json::object();
        if (!next.is_object()) throw ConfigError("sweep parameter path '" + dotted + "' crosses a non-object");
        node = &next;
        start = dot + 1;
    }
}

RunOutcome run(const ExperimentConfig& config, const fs::path& output_dir) {
    ExperimentConfig cfg = config;
    validate(cfg);
    fs::create_directories(output_dir / "plotdata");
    const std::string kind = cfg.kind();

    Artifacts art;
    RunOutcome out;
    out.status = "ok";
    Json manifest = Json::object();
    manifest["tool"] = "qrbm";
    manifest["version"] = kVersion;
    manifest["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION);
    manifest["kind"] = kind;
    manifest["seed"] = cfg.doc.at("seed");
    manifest["config"] = cfg.doc;

    try {
        std::optional<PauliSum> h;
        if (cfg.doc.contains("hamiltonian")) {
            h = hamiltonian_from(cfg.doc.at("hamiltonian"), cfg.base_dir, cfg.doc.at("seed").get<std::uint64_t>());
            art.hamiltonian_text = format_pauli_sum(*h);
        }
        if (kind == "spectrum") run_spectrum(*h, art);
        else if (kind == "ground_state") run_ground_state(cfg, *h, art);
        else if (kind == "gibbs") run_gibbs(cfg, *h, art);
        else if (kind == "universality") run_universality(cfg, *h, art);
        else if (kind == "gadget_verify") run_gadget(cfg, art);
        else run_qite_bench(cfg, *h, art);
    } catch (const CapacityError& e) {
        out = {kExitCapacity, "capacity_failure", e.what(), {}};
    } catch (const NumericalError& e) {
        out = {kExitNumerical, "numerical_failure", e.what(), {}};
    } catch (const ParseError& e) {
        out = {kExitConfig, "config_error", e.what(), {}};
    } catch (const InputError& e) {
        out = {kExitConfig, "config_error", e.what(), {}};
    } catch (const ContractError& e) {
        out = {kExitConfig, "config_error", e.what(), {}};
    } catch (const DimensionError& e) {
        out = {kExitConfig, "config_error", e.what(), {}};
    }

    Json result = Json::object();
    result["kind"] = kind;
    result["status"] = out.status;
    if (!out.message.empty()) result["message"] = out.message;
    for (auto& [k, v] : art.result.items()) result[k] = v;
    out.result = result;

    if (!art.hamiltonian_text.empty()) manifest["hamiltonian"] = art.hamiltonian_text;
    write_text(output_dir / "manifest.json", manifest.dump(2) + "\n");
    write_text(output_dir / "trace.csv", art.trace.to_csv());
    write_text(output_dir / "result.json", result.dump(2) + "\n");
    if (!art.params_text.empty()) write_text(output_dir / "params.txt", art.params_text);
    for (const auto& [name, csv] : art.plotdata) write_text(output_dir / "plotdata" / name, csv);
    return out;
}

int sweep(const ExperimentConfig& config, const std::string& parameter, const std::vector<Json>& values,
          const fs::path& output_dir, std::size_t workers) {
    if (values.empty()) throw ConfigError("sweep requires at least one value");
    std::vector<ExperimentConfig> points;
    for (const auto& v : values) {
        ExperimentConfig c = config;
        set_dotted(c.doc, parameter, v);
        validate(c);
        points.push_back(std::move(c));
    }
    fs::create_directories(output_dir);
    struct Row {
        int exit_code = kExitOk;
        std::string status;
        double metric = NAN;
        std::string metric_name;
    };
    std::vector<Row> rows(points.size());
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    auto worker = [&]() {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            char name[32];
            std::snprintf(name, sizeof name, "point_%03zu", i);
            const fs::path dir = output_dir / name;
            Row row;
            bool reused = false;
            if (fs::exists(dir / "result.json") && fs::exists(dir / "manifest.json")) {
                try {
                    std::ifstream rin(dir / "result.json");
                    std::ifstream min(dir / "manifest.json");
                    const Json prev = Json::parse(rin);
                    const Json man = Json::parse(min);
                    if (prev.at("status") == "ok" && man.at("config") == points[i].doc) {
                        row.status = "ok";
                        row.metric = headline_metric(points[i].kind(), prev, row.metric_name);
                        reused = true;
                    }
                } catch (const std::exception&) {
                }
            }
            if (!reused) {
                try {
                    const RunOutcome o = run(points[i], dir);
                    row.exit_code = o.exit_code;
                    row.status = o.status;
                    row.metric = headline_metric(points[i].kind(), o.result, row.metric_name);
                } catch (const std::exception& e) {
                    row.exit_code = kExitConfig;
                    row.status = std::string("failed: ") + e.what();
                }
            }
            std::lock_guard<std::mutex> lock(mu);
            rows[i] = row;
        }
    };
    const std::size_t n_threads = std::max<std::size_t>(1, std::min(workers, points.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::string csv = "index,value,status,exit_code,metric,metric_value\n";
    int worst = kExitOk;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::string status = rows[i].status;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        csv += std::to_string(i) + "," + values[i].dump() + "," + status + "," + std::to_string(rows[i].exit_code) + "," +
               rows[i].metric_name + "," + fmt(rows[i].metric) + "\n";
        worst = std::max(worst, rows[i].exit_code);
    }
    write_text(output_dir / "summary.csv", csv);
    return worst;
}

Json spectrum_of_file(const fs::path& path) {
    const PauliSum h = load_pauli_sum(path);
    const SpectralReport s = eigh(h);
    Json out = Json::object();
    out["file"] = path.string();
    out["n_qubits"] = h.n_qubits();
    out["ground_energy"] = s.eigenvalues[0];
    out["gap"] = s.gap;
    out["degeneracy_flag"] = s.degeneracy_flag;
    out["eigenvalues"] = eigen_vector(s.eigenvalues);
    return out;
}

}  // namespace qrbm::harness
