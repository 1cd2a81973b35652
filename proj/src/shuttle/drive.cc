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

#include "shuttle/drive.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

using namespace shuttle;

namespace {

int phase_of_gate(int gate, int n_phases) {
    int p = (gate - 1) % n_phases;
    return p < 0 ? p + n_phases : p;
}

double wrap(double t, double period) {
    double u = std::fmod(t, period);
    if (u < 0) {
        u += period;
    }
    return u;
}

}  // namespace

void AnalogDriveSpec::validate() const {
    if (!(v0_mv > 0)) {
        throw std::invalid_argument("analog drive: v0_mv must be > 0");
    }
    if (!(f_mhz > 0)) {
        throw std::invalid_argument("analog drive: f_mhz must be > 0");
    }
    if (n_phases < 2) {
        throw std::invalid_argument("analog drive: n_phases must be >= 2");
    }
    if (!(phase_mod_amp_rad >= 0 && phase_mod_amp_rad < constants::pi)) {
        throw std::invalid_argument("analog drive: phase_mod_amp_rad must lie in [0, pi)");
    }
}

DigitalDriveSpec DigitalDriveSpec::standard(double v0_mv, double t0_ns, int n_phases, double tau_over_t0) {
    DigitalDriveSpec s;
    s.v0_mv = v0_mv;
    s.t0_ns = t0_ns;
    s.n_phases = n_phases;
    s.segments_ns = {t0_ns / 5, 2 * t0_ns / 5, t0_ns / 5, t0_ns / 5};
    s.dc_levels_mv = {v0_mv, v0_mv / 2, -v0_mv};
    s.tau_ns = tau_over_t0 * t0_ns;
    return s;
}

void DigitalDriveSpec::validate() const {
    if (!(v0_mv > 0)) {
        throw std::invalid_argument("digital drive: v0_mv must be > 0");
    }
    if (!(t0_ns > 0)) {
        throw std::invalid_argument("digital drive: t0_ns must be > 0");
    }
    if (n_phases < 2) {
        throw std::invalid_argument("digital drive: n_phases must be >= 2");
    }
    if (!(tau_ns >= 0)) {
        throw std::invalid_argument("digital drive: tau_ns must be >= 0");
    }
    double sum = 0;
    for (double d : segments_ns) {
        if (!(d > 0)) {
            throw std::invalid_argument("digital drive: every segment duration must be > 0");
        }
        sum += d;
    }
    if (std::abs(sum - t0_ns) > 1e-9 * t0_ns) {
        throw std::invalid_argument(
            "digital drive: segment durations sum to " + std::to_string(sum) + " ns but must equal t0 = " +
            std::to_string(t0_ns) + " ns");
    }
    for (int c : segment_channels) {
        if (c < 0 || c > 2) {
            throw std::invalid_argument("digital drive: segment channel index must be 0, 1 or 2");
        }
    }
    if (!edge_shifts_ns.empty()) {
        if (static_cast<int>(edge_shifts_ns.size()) != n_phases) {
            throw std::invalid_argument("digital drive: edge shift table must have one row per phase");
        }
        for (int p = 0; p < n_phases; p++) {
            for (double d : phase_segments_ns(p)) {
                if (!(d > 0)) {
                    throw std::invalid_argument(
                        "digital drive: edge skew makes a segment of phase " + std::to_string(p) + " non-positive");
                }
            }
        }
    }
    for (const auto &[gate, g] : gate_gain) {
        if (!(g > 0)) {
            throw std::invalid_argument("digital drive: gain of gate " + std::to_string(gate) + " must be > 0");
        }
    }
    for (const auto &[gate, s] : gate_tau_scale) {
        if (!(s > 0)) {
            throw std::invalid_argument("digital drive: tau scale of gate " + std::to_string(gate) + " must be > 0");
        }
    }
}

std::array<double, 4> DigitalDriveSpec::phase_segments_ns(int phase) const {
    if (edge_shifts_ns.empty()) {
        return segments_ns;
    }
    const auto &s = edge_shifts_ns.at(phase);
    std::array<double, 4> edges{};
    double acc = 0;
    for (int k = 0; k < 4; k++) {
        edges[k] = acc + s[k];
        acc += segments_ns[k];
    }
    return {
        edges[1] - edges[0],
        edges[2] - edges[1],
        edges[3] - edges[2],
        t0_ns + edges[0] - edges[3],
    };
}

double DigitalDriveSpec::phase_start_shift_ns(int phase) const {
    return edge_shifts_ns.empty() ? 0.0 : edge_shifts_ns.at(phase)[0];
}

double DigitalDriveSpec::tau_for_gate(int gate) const {
    auto it = gate_tau_scale.find(gate);
    return it == gate_tau_scale.end() ? tau_ns : tau_ns * it->second;
}

double DigitalDriveSpec::gain_for_gate(int gate) const {
    auto it = gate_gain.find(gate);
    return it == gate_gain.end() ? 1.0 : it->second;
}

double DigitalDriveSpec::offset_for_gate(int gate) const {
    size_t k = static_cast<size_t>(gate - 1);
    return k < per_gate_offsets_mv.size() ? per_gate_offsets_mv[k] : 0.0;
}

bool VariationSpec::is_zero() const {
    auto all_zero = [](const std::vector<GateFactor> &v) {
        return std::all_of(v.begin(), v.end(), [](const GateFactor &f) { return f.value == 0.0; });
    };
    return std::all_of(edge_skews.begin(), edge_skews.end(), [](const EdgeSkew &s) { return s.offset_ns == 0.0; }) &&
           all_zero(gate_gain_errors) && all_zero(tau_spread) &&
           std::all_of(channel_level_errors_mv.begin(), channel_level_errors_mv.end(), [](double e) {
               return e == 0.0;
           });
}

UniformSeries shuttle::uniform_series(std::span<const double> times_ns, std::span<const double> values) {
    if (times_ns.size() != values.size()) {
        throw std::invalid_argument("uniform_series: times and values differ in length");
    }
    if (times_ns.size() < 2) {
        throw std::invalid_argument("uniform_series: need at least two samples");
    }
    double dt = (times_ns.back() - times_ns.front()) / static_cast<double>(times_ns.size() - 1);
    if (!(dt > 0)) {
        throw std::invalid_argument("uniform_series: times must increase");
    }
    for (size_t k = 1; k < times_ns.size(); k++) {
        if (std::abs((times_ns[k] - times_ns[k - 1]) - dt) > 1e-9 * dt) {
            throw std::invalid_argument("uniform_series: grid is not uniform at sample " + std::to_string(k));
        }
    }
    return UniformSeries{times_ns.front(), dt, std::vector<double>(values.begin(), values.end())};
}

TimeGrid TimeGrid::over_periods(double period_ns, int n_periods, int points_per_period) {
    if (n_periods < 1 || points_per_period < 2 || !(period_ns > 0)) {
        throw std::invalid_argument("TimeGrid: need period > 0, n_periods >= 1, points_per_period >= 2");
    }
    return TimeGrid{
        0.0,
        period_ns / points_per_period,
        static_cast<size_t>(n_periods) * static_cast<size_t>(points_per_period) + 1,
    };
}

SampledDrive::SampledDrive(TimeGrid grid, std::vector<std::vector<double>> gate_series)
    : grid_(grid), series_(std::move(gate_series)) {
    if (grid_.n_samples < 2 || !(grid_.dt_ns > 0)) {
        throw std::invalid_argument("SampledDrive: grid needs >= 2 samples and dt > 0");
    }
    for (const auto &s : series_) {
        if (s.size() != grid_.n_samples) {
            throw std::invalid_argument("SampledDrive: every gate series must match the grid length");
        }
    }
}

std::vector<double> SampledDrive::times() const {
    std::vector<double> t(grid_.n_samples);
    for (size_t k = 0; k < t.size(); k++) {
        t[k] = grid_.time(k);
    }
    return t;
}

std::span<const double> SampledDrive::series(int gate) const {
    return series_.at(static_cast<size_t>(gate - 1));
}

void SampledDrive::voltages_at(double t_ns, std::span<double> out) const {
    double u = (t_ns - grid_.t_start_ns) / grid_.dt_ns;
    double last = static_cast<double>(grid_.n_samples - 1);
    if (!(u >= -1e-9 && u <= last + 1e-9)) {
        throw std::out_of_range("SampledDrive: t = " + std::to_string(t_ns) + " ns outside the drive span");
    }
    u = std::clamp(u, 0.0, last);
    size_t k = std::min(static_cast<size_t>(u), grid_.n_samples - 2);
    double w = u - static_cast<double>(k);
    for (size_t g = 0; g < series_.size(); g++) {
        const auto &s = series_[g];
        out[g] = w == 0.0 ? s[k] : s[k] + w * (s[k + 1] - s[k]);
    }
}

double SampledDrive::max_abs_voltage() const {
    double m = 0;
    for (const auto &s : series_) {
        for (double v : s) {
            m = std::max(m, std::abs(v));
        }
    }
    return m;
}

double shuttle::drive_period_ns(const DriveSpec &drive) {
    if (const auto *a = std::get_if<AnalogDriveSpec>(&drive)) {
        return a->period_ns();
    }
    return std::get<DigitalDriveSpec>(drive).t0_ns;
}

int shuttle::drive_phase_count(const DriveSpec &drive) {
    return std::visit([](const auto &d) { return d.n_phases; }, drive);
}

double shuttle::rect_wave(const DigitalDriveSpec &spec, double t_ns, int phase) {
    auto seg = spec.phase_segments_ns(phase);
    double u = wrap(t_ns - spec.phase_start_shift_ns(phase), spec.t0_ns);
    double edge = 0;
    for (int k = 0; k < 3; k++) {
        edge += seg[k];
        if (u <= edge) {
            return spec.dc_levels_mv[spec.segment_channels[k]];
        }
    }
    return spec.dc_levels_mv[spec.segment_channels[3]];
}

double shuttle::phase_shifted_rect(const DigitalDriveSpec &spec, int gate, double t_ns) {
    int p = phase_of_gate(gate, spec.n_phases);
    double shift = static_cast<double>(spec.n_phases - p) / spec.n_phases * spec.t0_ns;
    return rect_wave(spec, t_ns + shift, p);
}

double shuttle::sin_wave(const AnalogDriveSpec &spec, int gate, double t_ns) {
    double w = 2 * constants::pi * spec.f_mhz * 1e-3;
    double dphi = spec.phase_mod_enabled ? spec.phase_mod_amp_rad * std::sin(spec.n_phases * w * t_ns) : 0.0;
    int p = phase_of_gate(gate, spec.n_phases);
    return spec.v0_mv * std::cos(w * t_ns + dphi + 2 * constants::pi * p / spec.n_phases);
}

UniformSeries shuttle::lpf_response(const UniformSeries &input, double tau_ns, double initial) {
    if (!(tau_ns >= 0)) {
        throw std::invalid_argument("lpf_response: tau must be >= 0");
    }
    UniformSeries out{input.t_start_ns, input.dt_ns, std::vector<double>(input.values.size())};
    if (tau_ns == 0) {
        out.values = input.values;
        return out;
    }
    double decay = std::exp(-input.dt_ns / tau_ns);
    double y = initial;
    for (size_t k = 0; k < input.values.size(); k++) {
        out.values[k] = y;
        double v = input.values[k];
        y = v + (y - v) * decay;
    }
    return out;
}

UniformSeries shuttle::lpf_filter(const UniformSeries &one_period, double tau_ns) {
    if (!(tau_ns >= 0)) {
        throw std::invalid_argument("lpf_filter: tau must be >= 0");
    }
    if (!(one_period.dt_ns > 0) || one_period.values.empty()) {
        throw std::invalid_argument("lpf_filter: need a non-empty series with dt > 0");
    }
    if (tau_ns == 0) {
        return one_period;
    }
    const auto &v = one_period.values;
    double decay = std::exp(-one_period.dt_ns / tau_ns);
    double one_minus_decay = -std::expm1(-one_period.dt_ns / tau_ns);

    // Fixed point of the one-period map y0 -> decay^M y0 + forced.
    double forced = 0;
    for (double x : v) {
        forced = forced * decay + one_minus_decay * x;
    }
    double period_ns = one_period.dt_ns * static_cast<double>(v.size());
    double y = forced / -std::expm1(-period_ns / tau_ns);

    UniformSeries out{one_period.t_start_ns, one_period.dt_ns, std::vector<double>(v.size())};
    double scale = 0;
    for (size_t k = 0; k < v.size(); k++) {
        out.values[k] = y;
        y = v[k] + (y - v[k]) * decay;
        scale = std::max(scale, std::abs(v[k]));
    }
    if (std::abs(y - out.values[0]) > 1e-9 * std::max(scale, 1e-300)) {
        throw std::runtime_error("lpf_filter: response failed to close on itself after one period");
    }
    return out;
}

DigitalDriveSpec shuttle::apply_variations(const DigitalDriveSpec &spec, const VariationSpec &var) {
    DigitalDriveSpec out = spec;
    for (const auto &s : var.edge_skews) {
        if (s.phase < 0 || s.phase >= spec.n_phases || s.edge < 0 || s.edge > 3) {
            throw std::invalid_argument(
                "apply_variations: edge skew targets phase " + std::to_string(s.phase) + " edge " +
                std::to_string(s.edge) + ", outside the drive");
        }
        if (out.edge_shifts_ns.empty()) {
            out.edge_shifts_ns.assign(static_cast<size_t>(spec.n_phases), {0.0, 0.0, 0.0, 0.0});
        }
        out.edge_shifts_ns[s.phase][s.edge] += s.offset_ns;
    }
    for (const auto &g : var.gate_gain_errors) {
        if (g.gate < 1) {
            throw std::invalid_argument("apply_variations: gate numbers start at 1");
        }
        auto [it, inserted] = out.gate_gain.try_emplace(g.gate, 1.0);
        it->second *= 1.0 + g.value;
    }
    for (int c = 0; c < 3; c++) {
        out.dc_levels_mv[c] += var.channel_level_errors_mv[c];
    }
    for (const auto &g : var.tau_spread) {
        if (g.gate < 1) {
            throw std::invalid_argument("apply_variations: gate numbers start at 1");
        }
        auto [it, inserted] = out.gate_tau_scale.try_emplace(g.gate, 1.0);
        it->second *= 1.0 + g.value;
    }
    out.validate();
    return out;
}

namespace {

SampledDrive synthesize_analog(const AnalogDriveSpec &spec, int n_gates, const TimeGrid &grid) {
    spec.validate();
    std::vector<std::vector<double>> series(static_cast<size_t>(n_gates), std::vector<double>(grid.n_samples));
    for (int g = 1; g <= n_gates; g++) {
        auto &s = series[g - 1];
        for (size_t k = 0; k < grid.n_samples; k++) {
            s[k] = sin_wave(spec, g, grid.time(k));
        }
    }
    return SampledDrive(grid, std::move(series));
}

SampledDrive synthesize_digital(
    const DigitalDriveSpec &base, const std::optional<VariationSpec> &var, int n_gates, const TimeGrid &grid) {
    base.validate();
    DigitalDriveSpec spec = var ? apply_variations(base, *var) : base;

    double steps = spec.t0_ns / grid.dt_ns;
    auto m = static_cast<size_t>(std::llround(steps));
    if (m < 2 || std::abs(steps - static_cast<double>(m)) > 1e-9 * steps) {
        throw std::invalid_argument("synthesize: grid step must divide the switching period t0");
    }

    std::vector<std::vector<double>> series(static_cast<size_t>(n_gates), std::vector<double>(grid.n_samples));
    UniformSeries one_period{grid.t_start_ns, grid.dt_ns, std::vector<double>(m)};
    for (int g = 1; g <= n_gates; g++) {
        // Cell midpoints keep the sampled input exact when edges fall on grid points.
        for (size_t k = 0; k < m; k++) {
            one_period.values[k] = phase_shifted_rect(spec, g, grid.time(k) + 0.5 * grid.dt_ns);
        }
        UniformSeries filtered = lpf_filter(one_period, spec.tau_for_gate(g));
        double gain = spec.gain_for_gate(g);
        double offset = spec.offset_for_gate(g);
        auto &s = series[g - 1];
        for (size_t k = 0; k < grid.n_samples; k++) {
            double y = filtered.values[k % m];
            s[k] = gain == 1.0 ? y + offset : gain * y + offset;
        }
    }
    return SampledDrive(grid, std::move(series));
}

}  // namespace

SampledDrive shuttle::synthesize(
    const DriveSpec &drive, const std::optional<VariationSpec> &var, int n_gates, const TimeGrid &grid) {
    if (n_gates < 1) {
        throw std::invalid_argument("synthesize: need at least one gate");
    }
    if (grid.n_samples < 2 || !(grid.dt_ns > 0)) {
        throw std::invalid_argument("synthesize: grid needs >= 2 samples and dt > 0");
    }
    if (const auto *a = std::get_if<AnalogDriveSpec>(&drive)) {
        return synthesize_analog(*a, n_gates, grid);
    }
    return synthesize_digital(std::get<DigitalDriveSpec>(drive), var, n_gates, grid);
}
