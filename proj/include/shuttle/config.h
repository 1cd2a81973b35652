// Copyright 2026 The Shuttlesim Authors
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

#ifndef SHUTTLE_CONFIG_H
#define SHUTTLE_CONFIG_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "shuttle/drive.h"
#include "shuttle/electrostatics.h"
#include "shuttle/power.h"
#include "shuttle/roughness.h"
#include "shuttle/valley.h"

namespace shuttle {

/// Invalid configuration. what() starts with the dotted path of the offending field.
struct ConfigError : std::invalid_argument {
    ConfigError(const std::string &path, const std::string &message)
        : std::invalid_argument(path + ": " + message), path(path) {
    }
    std::string path;
};

enum class Method { Analog, Digital };
enum class ValleyModelKind { Tilted, Roughness };
enum class SweepAxis { V0, Frequency, TauOverT0 };

std::string_view to_string(Method m);
std::string_view to_string(SweepAxis a);

struct SweepConfig {
    SweepAxis axis = SweepAxis::TauOverT0;
    std::vector<double> values;
    std::vector<Method> methods = {Method::Digital, Method::Analog};
};

struct NamedVariation {
    std::string name;
    VariationSpec variation;
};

struct VariationSuiteConfig {
    /// Empty means the built-in suite.
    std::vector<NamedVariation> entries;
    double flag_ratio = 2.0;
    /// Relative gain error of the extra out-of-range run; zero disables it.
    double extreme_gain_error = 0.5;
};

struct PowerConfig {
    PowerParams params;
    std::vector<int64_t> n_qubits = {1000, 10000, 100000, 1000000, 10000000, 100000000, 1000000000};
    std::vector<double> v0s_mv = {10.0, 100.0};
    std::vector<bool> shared = {false, true};
};

struct ExperimentConfig {
    Method method = Method::Digital;
    GateStack stack;
    /// Set when the file gives stack.n_gates; otherwise sized from the period count.
    bool n_gates_explicit = false;
    int guard_gates = 12;
    DriveSpec drive = DigitalDriveSpec{};
    /// Filter constant as a fraction of t0 when the file does not pin tau_ns.
    std::optional<double> tau_over_t0 = 0.1;
    ValleyModelKind valley_kind = ValleyModelKind::Tilted;
    TiltedInterfaceModel tilted;
    RoughnessModel roughness;
    std::optional<VariationSpec> variation;
    int periods = 3;
    int points_per_period = 600;
    std::optional<double> valley_dt_ns;
    uint64_t master_seed = 0;
    size_t realizations = 100;
    int workers = 1;
    bool write_svg = true;
    bool write_traces = true;
    std::optional<SweepConfig> sweep;
    VariationSuiteConfig variations;
    PowerConfig power;

    /// Cross-field checks; throws ConfigError.
    void validate() const;
    double period_ns() const;
    int n_phases() const;
    /// stack with n_gates filled in.
    GateStack resolved_stack() const;
    /// The same experiment run with the other drive method at matching amplitude,
    /// period and phase count.
    ExperimentConfig with_method(Method m) const;
};

ExperimentConfig parse_config(const nlohmann::json &j);
/// Reads and validates a JSON file. An empty file parses as an empty object.
ExperimentConfig load_config(const std::filesystem::path &path);
/// Normalized JSON form with every default filled in. Parses back to the same experiment.
nlohmann::json to_json(const ExperimentConfig &c);

}  // namespace shuttle

#endif
