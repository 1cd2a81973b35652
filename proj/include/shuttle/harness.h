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


#ifndef SHUTTLE_HARNESS_H
#define SHUTTLE_HARNESS_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "shuttle/config.h"

namespace shuttle {

/// A pipeline failure tagged with the stage it came from: drive, trace, signals or evolve.
struct StageError : std::runtime_error {
    StageError(const std::string &stage, const std::string &message)
        : std::runtime_error(stage + ": " + message), stage(stage) {
    }
    std::string stage;
};

/// Sampled quantities are taken from the values as written to CSV, so they can be
/// recomputed from the files exactly.
struct RunSummary {
    /// Maximum over every integrator step.
    double max_leakage = 0;
    double max_leakage_sampled = 0;
    double mean_v_s = 0;
    double min_a_x_nm = 0;
    double max_a_x_nm = 0;
    double max_norm_drift = 0;
    double valley_dt_ns = 0;
    std::optional<uint64_t> realization_seed;
};

RunSummary summarize(const Trajectory &traj, const ValleyTrace &valley);

struct ShuttleResult {
    ExperimentConfig config;
    SampledDrive drive;
    Trajectory trajectory;
    ValleySignals signals;
    ValleyTrace valley;
    RunSummary summary;
};

/// drive -> trace -> signals -> evolve. A roughness model uses realization 0 of the master seed.
ShuttleResult run_shuttle(const ExperimentConfig &config);

struct SweepRow {
    double axis_value = 0;
    Method method = Method::Digital;
    /// NaN when the point failed.
    double max_leakage = 0;
    /// "ok" or "failed: <reason>".
    std::string status;
};

/// The experiment at one sweep coordinate. Returns base unchanged when value is already its
/// setting, so a one-point sweep reproduces the plain run.
ExperimentConfig sweep_point(const ExperimentConfig &base, SweepAxis axis, double value, Method method);

/// Rows ordered value-major, then by the configured method order.
std::vector<SweepRow> run_sweep(const ExperimentConfig &config);

struct VariationRow {
    std::string name;
    double max_leakage = 0;
    double max_waveform_deviation_mv = 0;
    double ratio_to_baseline = 0;
    bool flagged = false;
    std::string status;
};

struct VariationReport {
    double baseline_max_leakage = 0;
    /// First row is the unperturbed baseline.
    std::vector<VariationRow> rows;

    const VariationRow &row(const std::string &name) const;
};

/// Clock-edge skews, gate gain patterns, level errors and a filter spread, two of each kind.
std::vector<NamedVariation> default_variation_suite(const ExperimentConfig &config);

/// Requires a digital drive. Adds an "extreme_gain" entry unless extreme_gain_error is zero.
VariationReport run_variations(const ExperimentConfig &config);

std::vector<PowerRow> run_power(const PowerConfig &config);

struct RoughnessResult {
    Trajectory trajectory;
    EnsembleSummary ensemble;
};

RoughnessResult run_roughness(const ExperimentConfig &config);

std::string sweep_csv(const std::vector<SweepRow> &rows);
std::string variations_csv(const VariationReport &report);
nlohmann::json summary_json(const ShuttleResult &result);

/// Writes artifacts under one directory and records them for manifest.json.
class ArtifactWriter {
   public:
    ArtifactWriter(std::filesystem::path dir, std::string subcommand, const ExperimentConfig &config);

    void write(const std::string &relative_path, const std::string &content);
    /// Writes manifest.json; call once after every artifact.
    void finish(const nlohmann::json &seeds);

    const std::filesystem::path &dir() const {
        return dir_;
    }

   private:
    std::filesystem::path dir_;
    std::string subcommand_;
    nlohmann::json config_echo_;
    std::vector<std::string> artifacts_;
};

void write_shuttle(const ShuttleResult &result, ArtifactWriter &out);
void write_sweep(const ExperimentConfig &config, const std::vector<SweepRow> &rows, ArtifactWriter &out);
void write_variations(const ExperimentConfig &config, const VariationReport &report, ArtifactWriter &out);
void write_power(const ExperimentConfig &config, const std::vector<PowerRow> &rows, ArtifactWriter &out);
void write_roughness(const ExperimentConfig &config, const RoughnessResult &result, ArtifactWriter &out);

}  // namespace shuttle

#endif
