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


// Command-line front end: shuttle, sweep, variations, power and roughness.

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "shuttle/csv.h"
#include "shuttle/harness.h"

using namespace shuttle;

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    std::optional<uint64_t> seed;
    std::optional<int> workers;
};

void add_common(CLI::App *cmd, CommonArgs &args) {
    cmd->add_option("--config", args.config, "Experiment JSON file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out, "Output directory")->required();
    cmd->add_option("--seed", args.seed, "Master seed, overrides seeds.master");
    cmd->add_option("--workers", args.workers, "Worker threads, overrides execution.workers")
        ->check(CLI::PositiveNumber);
}

ExperimentConfig load(const CommonArgs &args) {
    ExperimentConfig c = load_config(args.config);
    if (args.seed) {
        c.master_seed = *args.seed;
    }
    if (args.workers) {
        c.workers = *args.workers;
    }
    return c;
}

int cmd_shuttle(const CommonArgs &args) {
    ExperimentConfig c = load(args);
    ShuttleResult r = run_shuttle(c);
    ArtifactWriter out(args.out, "shuttle", c);
    write_shuttle(r, out);
    std::printf("method %s  max(1-F) %s  mean v_s %s m/s  a_x [%s, %s] nm\n", std::string(to_string(c.method)).c_str(),
                format_number(r.summary.max_leakage).c_str(), format_number(r.summary.mean_v_s).c_str(),
                format_number(r.summary.min_a_x_nm).c_str(), format_number(r.summary.max_a_x_nm).c_str());
    return 0;
}

int cmd_sweep(const CommonArgs &args) {
    ExperimentConfig c = load(args);
    auto rows = run_sweep(c);
    ArtifactWriter out(args.out, "sweep", c);
    write_sweep(c, rows, out);
    std::cout << sweep_csv(rows);
    for (const auto &r : rows) {
        if (r.status != "ok") {
            return 1;
        }
    }
    return 0;
}

int cmd_variations(const CommonArgs &args) {
    ExperimentConfig c = load(args);
    auto report = run_variations(c);
    ArtifactWriter out(args.out, "variations", c);
    write_variations(c, report, out);
    std::cout << variations_csv(report);
    return 0;
}

int cmd_power(const CommonArgs &args) {
    ExperimentConfig c = load(args);
    auto rows = run_power(c.power);
    ArtifactWriter out(args.out, "power", c);
    write_power(c, rows, out);
    std::cout << power_csv(rows);
    return 0;
}

int cmd_roughness(const CommonArgs &args) {
    ExperimentConfig c = load(args);
    auto r = run_roughness(c);
    ArtifactWriter out(args.out, "roughness", c);
    write_roughness(c, r, out);
    std::cout << ensemble_summary_csv(r.ensemble);
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Conveyor-belt spin shuttling simulator"};
    app.require_subcommand(1);
    CommonArgs args;
    struct Sub {
        const char *name;
        const char *help;
        int (*run)(const CommonArgs &);
    };
    const Sub subs[] = {
        {"shuttle", "Single drive -> trajectory -> valley run", cmd_shuttle},
        {"sweep", "Maximum leakage over V0, f or tau/t0", cmd_sweep},
        {"variations", "Waveform variation suite for the digital drive", cmd_variations},
        {"power", "Heat dissipation versus qubit count", cmd_power},
        {"roughness", "Seeded alloy-disorder ensemble", cmd_roughness},
    };
    for (const auto &s : subs) {
        add_common(app.add_subcommand(s.name, s.help), args);
    }
    CLI11_PARSE(app, argc, argv);
    try {
        for (const auto &s : subs) {
            if (app.got_subcommand(s.name)) {
                return s.run(args);
            }
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
