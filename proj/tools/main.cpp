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

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "harness.hpp"
#include "qrbm/error.hpp"

namespace {

using qrbm::harness::Json;
namespace fs = std::filesystem;

// "0.1,0.2" or a JSON array.
std::vector<Json> parse_values(const std::string& text) {
    std::vector<Json> out;
    const auto first = text.find_first_not_of(" \t");
    if (first != std::string::npos && text[first] == '[') {
        const Json arr = Json::parse(text);
        for (const auto& v : arr) out.push_back(v);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out.push_back(Json::parse(item));
        } catch (const Json::parse_error&) {
            out.emplace_back(item);
        }
    }
    return out;
}

fs::path output_for(const qrbm::harness::ExperimentConfig& cfg, const std::string& cli_out) {
    if (!cli_out.empty()) return cli_out;
    if (cfg.doc.contains("output_dir")) {
        fs::path p = cfg.doc.at("output_dir").get<std::string>();
        return p.is_relative() ? cfg.base_dir / p : p;
    }
    return "qrbm_out";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum RBM toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "qrbm 0.1.0");

    std::string config_path;
    std::string out_dir;
    auto* run_cmd = app.add_subcommand("run", "Run one experiment config");
    run_cmd->add_option("config", config_path, "JSON experiment config")->required();
    run_cmd->add_option("-o,--out", out_dir, "Output directory");

    std::string param;
    std::string values;
    std::size_t workers = 1;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a config over a list of values for one parameter");
    sweep_cmd->add_option("config", config_path, "JSON experiment config")->required();
    sweep_cmd->add_option("--param", param, "Dotted parameter path")->required();
    sweep_cmd->add_option("--values", values, "Comma list or JSON array")->required();
    sweep_cmd->add_option("--workers", workers, "Parallel points")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("-o,--out", out_dir, "Output directory");

    std::string ham_path;
    auto* spec_cmd = app.add_subcommand("spectrum", "Print the spectrum of a Pauli-sum file");
    spec_cmd->add_option("file", ham_path, "Hamiltonian file")->required();

    auto* val_cmd = app.add_subcommand("validate", "Check a config and print it with defaults filled in");
    val_cmd->add_option("config", config_path, "JSON experiment config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qrbm::harness::kExitConfig;
    }

    try {
        if (*spec_cmd) {
            std::cout << qrbm::harness::spectrum_of_file(ham_path).dump(2) << "\n";
            return 0;
        }
        auto cfg = qrbm::harness::load_config(config_path);
        if (*val_cmd) {
            qrbm::harness::validate(cfg);
            std::cout << cfg.doc.dump(2) << "\n";
            return 0;
        }
        if (*run_cmd) {
            qrbm::harness::validate(cfg);
            const fs::path out = output_for(cfg, out_dir);
            const auto outcome = qrbm::harness::run(cfg, out);
            std::cout << outcome.result.dump(2) << "\n";
            if (outcome.exit_code != 0) std::cerr << "qrbm: " << outcome.status << ": " << outcome.message << "\n";
            return outcome.exit_code;
        }
        const auto vals = parse_values(values);
        const fs::path out = output_for(cfg, out_dir);
        const int code = qrbm::harness::sweep(cfg, param, vals, out, workers);
        std::cout << "summary: " << (out / "summary.csv").string() << "\n";
        return code;
    } catch (const qrbm::harness::ConfigError& e) {
        std::cerr << "qrbm: config error: " << e.what() << "\n";
        return qrbm::harness::kExitConfig;
    } catch (const qrbm::CapacityError& e) {
        std::cerr << "qrbm: capacity: " << e.what() << "\n";
        return qrbm::harness::kExitCapacity;
    } catch (const qrbm::NumericalError& e) {
        std::cerr << "qrbm: numerical failure: " << e.what() << "\n";
        return qrbm::harness::kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "qrbm: " << e.what() << "\n";
        return qrbm::harness::kExitConfig;
    }
}
