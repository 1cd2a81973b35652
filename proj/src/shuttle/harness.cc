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


#include "shuttle/harness.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>

#include "shuttle/csv.h"
#include "shuttle/parallel.h"
#include "shuttle/svg.h"

using namespace shuttle;
using nlohmann::json;

namespace {

template <typename F>
auto stage(const char *name, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const StageError &) {
        throw;
    } catch (const std::exception &e) {
        throw StageError(name, e.what());
    }
}

std::string one_line(std::string s) {
    for (char &c : s) {
        if (c == ',' || c == '\n' || c == '\r') {
            c = ';';
        }
    }
    return s;
}

std::vector<double> column(const Trajectory &traj, double DotState::*field) {
    std::vector<double> out;
    out.reserve(traj.samples.size());
    for (const auto &s : traj.samples) {
        out.push_back(s.*field);
    }
    return out;
}

double max_deviation(const SampledDrive &a, const SampledDrive &b) {
    if (a.n_gates() != b.n_gates() || a.grid().n_samples != b.grid().n_samples) {
        throw std::invalid_argument("drives differ in shape");
    }
    double m = 0;
    for (int g = 1; g <= a.n_gates(); g++) {
        auto sa = a.series(g);
        auto sb = b.series(g);
        for (size_t k = 0; k < sa.size(); k++) {
            m = std::max(m, std::abs(sa[k] - sb[k]));
        }
    }
    return m;
}

struct Motion {
    SampledDrive drive;
    Trajectory trajectory;
};

Motion drive_and_trace(const ExperimentConfig &config) {
    const GateStack stack = config.resolved_stack();
    const TimeGrid grid = TimeGrid::over_periods(config.period_ns(), config.periods, config.points_per_period);
    std::optional<VariationSpec> var;
    if (config.variation && !config.variation->is_zero()) {
        var = config.variation;
    }
    SampledDrive drive = stage("drive", [&] { return synthesize(config.drive, var, stack.n_gates, grid); });
    Trajectory traj = stage("trace", [&] {
        return trace(stack, drive, grid.t_start_ns, grid.t_end_ns(), grid.n_samples,
                     TraceOptions{config.guard_gates, config.n_phases()});
    });
    return Motion{std::move(drive), std::move(traj)};
}

}  // namespace

RunSummary shuttle::summarize(const Trajectory &traj, const ValleyTrace &valley) {
    if (traj.samples.empty() || traj.v_s.size() != traj.samples.size()) {
        throw std::invalid_argument("summarize: empty or inconsistent trajectory");
    }
    RunSummary s;
    s.max_leakage = valley.max_leakage;
    s.max_norm_drift = valley.max_norm_drift;
    s.valley_dt_ns = valley.dt_ns;
    for (double l : valley.leakage) {
        s.max_leakage_sampled = std::max(s.max_leakage_sampled, as_written(l));
    }
    double sum = 0;
    for (double v : traj.v_s) {
        sum += as_written(v);
    }
    s.mean_v_s = sum / static_cast<double>(traj.v_s.size());
    s.min_a_x_nm = std::numeric_limits<double>::infinity();
    s.max_a_x_nm = -s.min_a_x_nm;
    for (const auto &d : traj.samples) {
        double a = as_written(d.a_x_nm);
        s.min_a_x_nm = std::min(s.min_a_x_nm, a);
        s.max_a_x_nm = std::max(s.max_a_x_nm, a);
    }
    return s;
}

ShuttleResult shuttle::run_shuttle(const ExperimentConfig &config) {
    stage("config", [&] { config.validate(); });
    const double period = config.period_ns();
    Motion motion = drive_and_trace(config);
    const Trajectory &traj = motion.trajectory;

    ValleySignals signals;
    ValleyTrace valley;
    std::optional<uint64_t> seed;
    if (config.valley_kind == ValleyModelKind::Tilted) {
        signals = stage("signals", [&] { return tilted_signals(traj, config.tilted); });
        valley = stage("evolve", [&] {
            double dt = config.valley_dt_ns ? *config.valley_dt_ns : default_valley_step(signals, period);
            return evolve(signals, dt);
        });
    } else {
        seed = realization_seed(config.master_seed, 0);
        PsiZ psi = stage("signals", [&] { return solve_psi_z(config.roughness); });
        valley = stage("evolve", [&] {
            return run_realization(traj, config.roughness, psi, *seed, period, config.valley_dt_ns, &signals);
        });
    }
    RunSummary summary = summarize(traj, valley);
    summary.realization_seed = seed;
    return ShuttleResult{
        config, std::move(motion.drive), std::move(motion.trajectory), std::move(signals), std::move(valley), summary};
}

ExperimentConfig shuttle::sweep_point(const ExperimentConfig &base, SweepAxis axis, double value, Method method) {
    ExperimentConfig c = base.with_method(method);
    if (!(value > 0)) {
        throw ConfigError("sweep.values", "every value must be > 0");
    }
    if (auto *a = std::get_if<AnalogDriveSpec>(&c.drive)) {
        switch (axis) {
            case SweepAxis::V0:
                a->v0_mv = value;
                break;
            case SweepAxis::Frequency:
                a->f_mhz = value;
                break;
            case SweepAxis::TauOverT0:
                // The analog reference has no filter; every tau point repeats it.
                break;
        }
    } else {
        auto &d = std::get<DigitalDriveSpec>(c.drive);
        switch (axis) {
            case SweepAxis::V0:
                if (value != d.v0_mv) {
                    double scale = value / d.v0_mv;
                    for (double &l : d.dc_levels_mv) {
                        l *= scale;
                    }
                    d.v0_mv = value;
                }
                break;
            case SweepAxis::Frequency:
                if (value != 1000.0 / d.t0_ns) {
                    double t0 = 1000.0 / value;
                    double scale = t0 / d.t0_ns;
                    for (double &s : d.segments_ns) {
                        s *= scale;
                    }
                    d.t0_ns = t0;
                    d.tau_ns = c.tau_over_t0 ? *c.tau_over_t0 * t0 : d.tau_ns * scale;
                }
                break;
            case SweepAxis::TauOverT0:
                if (!c.tau_over_t0 || value != *c.tau_over_t0) {
                    d.tau_ns = value * d.t0_ns;
                    c.tau_over_t0 = value;
                }
                break;
        }
    }
    c.sweep.reset();
    c.validate();
    return c;
}

std::vector<SweepRow> shuttle::run_sweep(const ExperimentConfig &config) {
    if (!config.sweep) {
        throw ConfigError("sweep", "required field missing");
    }
    const SweepConfig &sw = *config.sweep;
    std::vector<SweepRow> rows;
    for (double v : sw.values) {
        for (Method m : sw.methods) {
            rows.push_back(SweepRow{v, m, std::numeric_limits<double>::quiet_NaN(), ""});
        }
    }
    parallel_for(rows.size(), config.workers, [&](size_t k) {
        SweepRow &r = rows[k];
        try {
            ExperimentConfig c = sweep_point(config, sw.axis, r.axis_value, r.method);
            r.max_leakage = run_shuttle(c).summary.max_leakage;
            r.status = "ok";
        } catch (const std::exception &e) {
            r.status = "failed: " + one_line(e.what());
        }
    });
    return rows;
}

const VariationRow &VariationReport::row(const std::string &name) const {
    for (const auto &r : rows) {
        if (r.name == name) {
            return r;
        }
    }
    throw std::out_of_range("no variation row named " + name);
}

std::vector<NamedVariation> shuttle::default_variation_suite(const ExperimentConfig &config) {
    const int n_gates = config.resolved_stack().n_gates;
    const int n = config.n_phases();
    std::vector<NamedVariation> suite;
    suite.push_back({"none", {}});

    VariationSpec skew_a;
    skew_a.edge_skews = {{1, 1, 0.3}, {1, 3, -0.3}};
    suite.push_back({"skew_phase1", skew_a});
    VariationSpec skew_b;
    for (int p = 0; p < n; p++) {
        skew_b.edge_skews.push_back({p, 2, p % 2 == 0 ? 0.3 : -0.3});
    }
    suite.push_back({"skew_alternating", skew_b});

    VariationSpec gain_a;
    VariationSpec gain_b;
    VariationSpec tau_a;
    for (int g = 1; g <= n_gates; g++) {
        if ((g - 1) % n == 0) {
            gain_a.gate_gain_errors.push_back({g, 0.05});
        }
        gain_b.gate_gain_errors.push_back({g, 0.05 * (((7 * g) % 5) - 2) / 2.0});
        tau_a.tau_spread.push_back({g, 0.1 * (((3 * g) % 5) - 2) / 2.0});
    }
    suite.push_back({"gain_phase0", gain_a});
    suite.push_back({"gain_pattern", gain_b});

    VariationSpec level_a;
    level_a.channel_level_errors_mv = {10.0, 0.0, -10.0};
    suite.push_back({"levels_split", level_a});
    VariationSpec level_b;
    level_b.channel_level_errors_mv = {-10.0, 10.0, 10.0};
    suite.push_back({"levels_shift", level_b});

    suite.push_back({"tau_spread", tau_a});
    return suite;
}

VariationReport shuttle::run_variations(const ExperimentConfig &config) {
    if (!std::holds_alternative<DigitalDriveSpec>(config.drive)) {
        throw ConfigError("method", "variation suites need the digital method");
    }
    std::vector<NamedVariation> entries =
        config.variations.entries.empty() ? default_variation_suite(config) : config.variations.entries;
    if (config.variations.extreme_gain_error != 0) {
        VariationSpec extreme;
        const int n = config.n_phases();
        for (int g = 1; g <= config.resolved_stack().n_gates; g++) {
            if ((g - 1) % n == 0) {
                extreme.gate_gain_errors.push_back({g, config.variations.extreme_gain_error});
            }
        }
        entries.push_back({"extreme_gain", extreme});
    }

    ExperimentConfig base = config;
    base.variation.reset();
    ShuttleResult baseline = run_shuttle(base);

    VariationReport report;
    report.baseline_max_leakage = baseline.summary.max_leakage;
    report.rows.push_back({"baseline", report.baseline_max_leakage, 0.0, 1.0, false, "ok"});
    std::vector<VariationRow> rows(entries.size());
    parallel_for(entries.size(), config.workers, [&](size_t k) {
        VariationRow &r = rows[k];
        r.name = entries[k].name;
        try {
            ExperimentConfig c = base;
            c.variation = entries[k].variation;
            ShuttleResult res = run_shuttle(c);
            r.max_leakage = res.summary.max_leakage;
            r.max_waveform_deviation_mv = max_deviation(res.drive, baseline.drive);
            r.ratio_to_baseline = report.baseline_max_leakage > 0 ? r.max_leakage / report.baseline_max_leakage
                                  : r.max_leakage > 0                ? std::numeric_limits<double>::infinity()
                                                                     : 1.0;
            r.flagged = r.ratio_to_baseline > config.variations.flag_ratio;
            r.status = "ok";
        } catch (const std::exception &e) {
            r.max_leakage = std::numeric_limits<double>::quiet_NaN();
            r.max_waveform_deviation_mv = std::numeric_limits<double>::quiet_NaN();
            r.ratio_to_baseline = std::numeric_limits<double>::quiet_NaN();
            r.flagged = true;
            r.status = "failed: " + one_line(e.what());
        }
    });
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    return report;
}

std::vector<PowerRow> shuttle::run_power(const PowerConfig &config) {
    auto shared = std::make_unique<bool[]>(config.shared.size());
    for (size_t k = 0; k < config.shared.size(); k++) {
        shared[k] = config.shared[k];
    }
    return p_total_curve(config.params, config.n_qubits, config.v0s_mv,
                         std::span<const bool>(shared.get(), config.shared.size()));
}

RoughnessResult shuttle::run_roughness(const ExperimentConfig &config) {
    if (config.valley_kind != ValleyModelKind::Roughness) {
        throw ConfigError("valley_model.kind", "the roughness ensemble needs kind \"roughness\"");
    }
    RoughnessResult out;
    out.trajectory = drive_and_trace(config).trajectory;
    EnsembleOptions opt;
    opt.n_realizations = config.realizations;
    opt.master_seed = config.master_seed;
    opt.workers = config.workers;
    opt.period_ns = config.period_ns();
    opt.dt_ns = config.valley_dt_ns;
    opt.keep_traces = config.write_traces;
    out.ensemble = stage("evolve", [&] { return run_ensemble(out.trajectory, config.roughness, opt); });
    return out;
}

std::string shuttle::sweep_csv(const std::vector<SweepRow> &rows) {
    CsvBuilder b({"axis_value", "method", "max_leakage", "status"});
    for (const auto &r : rows) {
        b.cell(r.axis_value).cell(to_string(r.method));
        if (std::isnan(r.max_leakage)) {
            b.cell("nan");
        } else {
            b.cell(r.max_leakage);
        }
        b.cell(r.status);
        b.end_row();
    }
    return b.str();
}

std::string shuttle::variations_csv(const VariationReport &report) {
    CsvBuilder b({"name", "max_leakage", "max_waveform_deviation_mV", "ratio_to_baseline", "flagged", "status"});
    auto num = [&](double x) -> CsvBuilder & {
        return std::isnan(x) ? b.cell("nan") : std::isinf(x) ? b.cell("inf") : b.cell(x);
    };
    for (const auto &r : report.rows) {
        b.cell(r.name);
        num(r.max_leakage);
        num(r.max_waveform_deviation_mv);
        num(r.ratio_to_baseline);
        b.cell(r.flagged ? "true" : "false").cell(r.status);
        b.end_row();
    }
    return b.str();
}

json shuttle::summary_json(const ShuttleResult &result) {
    const RunSummary &s = result.summary;
    json j = {
        {"method", to_string(result.config.method)},
        {"max_leakage", s.max_leakage},
        {"max_leakage_sampled", s.max_leakage_sampled},
        {"mean_v_s_m_per_s", s.mean_v_s},
        {"min_a_x_nm", s.min_a_x_nm},
        {"max_a_x_nm", s.max_a_x_nm},
        {"max_norm_drift", s.max_norm_drift},
        {"valley_dt_ns", s.valley_dt_ns},
        {"period_ns", result.config.period_ns()},
        {"n_gates", result.drive.n_gates()},
    };
    if (s.realization_seed) {
        j["realization_seed"] = *s.realization_seed;
    }
    return j;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir, std::string subcommand, const ExperimentConfig &config)
    : dir_(std::move(dir)), subcommand_(std::move(subcommand)), config_echo_(to_json(config)) {
    std::filesystem::create_directories(dir_);
}

void ArtifactWriter::write(const std::string &relative_path, const std::string &content) {
    std::filesystem::path p = dir_ / relative_path;
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream f(p, std::ios::binary);
    f << content;
    f.close();
    if (!f) {
        throw std::runtime_error("cannot write " + p.string());
    }
    artifacts_.push_back(relative_path);
}

void ArtifactWriter::finish(const json &seeds) {
    json m = {
        {"subcommand", subcommand_},
        {"artifacts", artifacts_},
        {"config", config_echo_},
        {"seeds", seeds},
    };
    std::ofstream f(dir_ / "manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
    if (!f) {
        throw std::runtime_error("cannot write manifest in " + dir_.string());
    }
}

void shuttle::write_shuttle(const ShuttleResult &result, ArtifactWriter &out) {
    out.write("trajectory.csv", trajectory_csv(result.trajectory));
    out.write("valley.csv", valley_csv(result.signals, result.valley));
    if (result.config.write_traces) {
        out.write("drive.csv", drive_csv(result.drive));
    }
    out.write("summary.json", summary_json(result).dump(2) + "\n");
    if (result.config.write_svg) {
        auto t = result.trajectory.times();
        out.write("leakage.svg", line_plot_svg({"Valley leakage", "t (ns)", "1 - F", true,
                                                {{"leakage", t, result.valley.leakage}}}));
        out.write("trajectory.svg",
                  line_plot_svg({"Dot position", "t (ns)", "x_QD (nm)", false,
                                 {{"x_QD", t, column(result.trajectory, &DotState::x_nm)}}}));
    }
    json seeds = {{"master", result.config.master_seed}};
    if (result.summary.realization_seed) {
        seeds["realizations"] = json::array({*result.summary.realization_seed});
    }
    out.finish(seeds);
}

void shuttle::write_sweep(const ExperimentConfig &config, const std::vector<SweepRow> &rows, ArtifactWriter &out) {
    out.write("sweep.csv", sweep_csv(rows));
    if (config.write_svg && config.sweep) {
        PlotSpec plot{"Maximum leakage", std::string(to_string(config.sweep->axis)), "max 1 - F", true, {}};
        for (Method m : config.sweep->methods) {
            PlotSeries s{std::string(to_string(m)), {}, {}};
            for (const auto &r : rows) {
                if (r.method == m && r.status == "ok") {
                    s.x.push_back(r.axis_value);
                    s.y.push_back(r.max_leakage);
                }
            }
            plot.series.push_back(std::move(s));
        }
        out.write("sweep.svg", line_plot_svg(plot));
    }
    out.finish({{"master", config.master_seed}});
}

void shuttle::write_variations(const ExperimentConfig &config, const VariationReport &report, ArtifactWriter &out) {
    out.write("variations.csv", variations_csv(report));
    out.finish({{"master", config.master_seed}});
}

void shuttle::write_power(const ExperimentConfig &config, const std::vector<PowerRow> &rows, ArtifactWriter &out) {
    out.write("power.csv", power_csv(rows));
    if (config.write_svg) {
        PlotSpec plot{"Total heat dissipation", "n_qubit", "P (mW)", true, {}};
        for (double v0 : config.power.v0s_mv) {
            for (bool shared : config.power.shared) {
                PlotSeries s{"V0 " + format_number(v0) + " mV" + (shared ? " shared" : ""), {}, {}};
                for (const auto &r : rows) {
                    if (r.v0_mv == v0 && r.shared == shared) {
                        s.x.push_back(std::log10(static_cast<double>(r.n_qubit)));
                        s.y.push_back(r.total_mw);
                    }
                }
                plot.series.push_back(std::move(s));
            }
        }
        plot.x_label = "log10 n_qubit";
        out.write("power.svg", line_plot_svg(plot));
    }
    out.finish(json::object());
}

void shuttle::write_roughness(const ExperimentConfig &config, const RoughnessResult &result, ArtifactWriter &out) {
    const EnsembleSummary &e = result.ensemble;
    out.write("trajectory.csv", trajectory_csv(result.trajectory));
    out.write("ensemble.csv", ensemble_csv(e));
    out.write("ensemble_summary.csv", ensemble_summary_csv(e));
    if (config.write_traces) {
        for (size_t k = 0; k < e.traces.size(); k++) {
            out.write("traces/seed_" + std::to_string(k) + ".csv", valley_csv(e.signals[k], e.traces[k]));
        }
    }
    if (config.write_svg && !e.traces.empty()) {
        PlotSpec plot{"Leakage per realization", "t (ns)", "1 - F", true, {}};
        for (size_t k = 0; k < std::min<size_t>(e.traces.size(), 6); k++) {
            plot.series.push_back({std::to_string(e.seeds[k]), e.traces[k].times_ns, e.traces[k].leakage});
        }
        out.write("ensemble.svg", line_plot_svg(plot));
    }
    out.finish({{"master", config.master_seed}, {"realizations", e.seeds}});
}
