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
#include <vector>

#include <json.hpp>

namespace qrbm::harness {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitCapacity = 4,
};

/// Invalid experiment description.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Parsed experiment: the resolved document plus where relative paths start.
struct ExperimentConfig {
    Json doc;
    std::filesystem::path base_dir;

    std::string kind() const { return doc.at("kind").get<std::string>(); }
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig config_from_json(Json doc, std::filesystem::path base_dir);

/// Fill defaults and check every field. Throws ConfigError.
void validate(ExperimentConfig& config);

struct RunOutcome {
    int exit_code = kExitOk;
    std::string status;  // ok | numerical_failure | capacity_failure
    std::string message;
    Json result;
};

/// Execute and write manifest.json, trace.csv, result.json and plotdata/ under `output_dir`.
RunOutcome run(const ExperimentConfig& config, const std::filesystem::path& output_dir);

/// Set a dotted path (e.g. "hamiltonian.haldane.h1") inside a document.
void set_dotted(Json& doc, const std::string& dotted, const Json& value);

/// One run per value in output_dir/point_NNN plus summary.csv. Existing successful
/// points are reused. Returns the worst exit code.
int sweep(const ExperimentConfig& config, const std::string& parameter, const std::vector<Json>& values,
          const std::filesystem::path& output_dir, std::size_t workers = 1);

/// Eigenvalues and gap of a Pauli-sum file as JSON.
Json spectrum_of_file(const std::filesystem::path& path);

}  // namespace qrbm::harness
