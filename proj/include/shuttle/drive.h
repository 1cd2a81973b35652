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

#ifndef SHUTTLE_DRIVE_H
#define SHUTTLE_DRIVE_H

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "shuttle/constants.h"

namespace shuttle {

/// Conventional drive: V_i(t) = V0 cos(2 pi f t + dphi(t) + 2 pi (i - 1) / N),
/// with dphi(t) = A sin(2 N pi f t) when phase modulation is enabled.
struct AnalogDriveSpec {
    double v0_mv = 200.0;
    double f_mhz = 1000.0 / 30.0;
    int n_phases = 3;
    double phase_mod_amp_rad = 0.07 * constants::pi;
    bool phase_mod_enabled = true;

    double period_ns() const {
        return 1000.0 / f_mhz;
    }
    void validate() const;
};

/// Index of a DC source in DigitalDriveSpec::dc_levels_mv.
enum DcChannel : int { kChannelHigh = 0, kChannelMid = 1, kChannelLow = 2 };

/// Switch-matrix drive: each phase cycles through four segments whose levels are
/// drawn from three DC sources, then passes through a first-order RC filter.
///
/// Default-constructed values are the reference operating point
/// (V0 = 200 mV, t0 = 30 ns, N = 3, tau = 0.1 t0, segments t0/5, 2t0/5, t0/5, t0/5).
struct DigitalDriveSpec {
    double v0_mv = 200.0;
    double t0_ns = 30.0;
    int n_phases = 3;
    std::array<double, 4> segments_ns = {6.0, 12.0, 6.0, 6.0};
    /// Source voltages indexed by DcChannel: (V0, V0/2, -V0).
    std::array<double, 3> dc_levels_mv = {200.0, 100.0, -200.0};
    /// Which DC channel feeds each segment.
    std::array<int, 4> segment_channels = {kChannelMid, kChannelLow, kChannelMid, kChannelHigh};
    double tau_ns = 3.0;
    /// Static offset per gate (element k is gate k + 1); missing entries are zero.
    std::vector<double> per_gate_offsets_mv;

    // Perturbation state written by apply_variations. Empty means nominal.
    std::vector<std::array<double, 4>> edge_shifts_ns;
    std::map<int, double> gate_gain;
    std::map<int, double> gate_tau_scale;

    /// Standard segment split and level roles for the given amplitude and period.
    static DigitalDriveSpec standard(double v0_mv, double t0_ns, int n_phases, double tau_over_t0);

    void validate() const;
    /// Segment durations of one phase including any edge skew.
    std::array<double, 4> phase_segments_ns(int phase) const;
    /// Displacement of the period-start edge of one phase.
    double phase_start_shift_ns(int phase) const;
    double tau_for_gate(int gate) const;
    double gain_for_gate(int gate) const;
    double offset_for_gate(int gate) const;
};

struct EdgeSkew {
    int phase = 0;  ///< 0-based phase index.
    int edge = 0;   ///< Edge k opens segment k + 1; edge 0 is the period start.
    double offset_ns = 0.0;
};

struct GateFactor {
    int gate = 1;  ///< 1-based gate number.
    double value = 0.0;
};

/// Waveform perturbations for the switch-matrix path. All-zero is the identity.
struct VariationSpec {
    std::vector<EdgeSkew> edge_skews;
    /// Relative post-filter amplitude error: gain = 1 + value.
    std::vector<GateFactor> gate_gain_errors;
    /// Additive error on each DC source, indexed by DcChannel.
    std::array<double, 3> channel_level_errors_mv = {0.0, 0.0, 0.0};
    /// Relative filter-constant spread: tau = tau0 * (1 + value).
    std::vector<GateFactor> tau_spread;

    bool is_zero() const;
};

/// A uniformly sampled series. values[k] is the sample at t_start_ns + k * dt_ns.
struct UniformSeries {
    double t_start_ns = 0.0;
    double dt_ns = 1.0;
    std::vector<double> values;

    double time(size_t k) const {
        return t_start_ns + static_cast<double>(k) * dt_ns;
    }
};

/// Builds a UniformSeries from explicit sample times. Throws std::invalid_argument
/// when the grid is not uniform to 1e-9 relative.
UniformSeries uniform_series(std::span<const double> times_ns, std::span<const double> values);

struct TimeGrid {
    double t_start_ns = 0.0;
    double dt_ns = 0.05;
    size_t n_samples = 0;

    double time(size_t k) const {
        return t_start_ns + static_cast<double>(k) * dt_ns;
    }
    double t_end_ns() const {
        return time(n_samples - 1);
    }
    /// n_periods whole periods sampled at points_per_period, both ends included.
    static TimeGrid over_periods(double period_ns, int n_periods, int points_per_period);
};

/// Per-gate voltage series on a shared uniform grid. Immutable once built.
class SampledDrive {
   public:
    SampledDrive(TimeGrid grid, std::vector<std::vector<double>> gate_series);

    const TimeGrid &grid() const {
        return grid_;
    }
    int n_gates() const {
        return static_cast<int>(series_.size());
    }
    std::vector<double> times() const;
    /// Series of a 1-based gate.
    std::span<const double> series(int gate) const;
    /// Linearly interpolated voltages of every gate at t; out[k] is gate k + 1.
    /// Throws std::out_of_range outside the grid.
    void voltages_at(double t_ns, std::span<double> out) const;
    double max_abs_voltage() const;

   private:
    TimeGrid grid_;
    std::vector<std::vector<double>> series_;
};

using DriveSpec = std::variant<AnalogDriveSpec, DigitalDriveSpec>;

double drive_period_ns(const DriveSpec &drive);
int drive_phase_count(const DriveSpec &drive);

/// Base rectangular wave of one phase (phase 0 unless given), periodic in t0.
double rect_wave(const DigitalDriveSpec &spec, double t_ns, int phase = 0);
/// Rectangular wave seen by 1-based gate i: V(t + (N - (i - 1) mod N) / N * t0).
double phase_shifted_rect(const DigitalDriveSpec &spec, int gate, double t_ns);
double sin_wave(const AnalogDriveSpec &spec, int gate, double t_ns);

/// Causal first-order response starting from y(t_start) = initial, advancing with the
/// exact update for a piecewise-constant input: y <- v + (y - v) exp(-dt / tau).
UniformSeries lpf_response(const UniformSeries &input, double tau_ns, double initial);
/// Periodic steady-state response to one period of piecewise-constant input. Sample k
/// of the input holds over [t_k, t_k + dt). tau = 0 returns the input unchanged.
UniformSeries lpf_filter(const UniformSeries &one_period, double tau_ns);

/// Folds a VariationSpec into a switch-matrix spec. Throws std::invalid_argument if a
/// skew makes any segment non-positive or a multiplier non-positive.
DigitalDriveSpec apply_variations(const DigitalDriveSpec &spec, const VariationSpec &var);

/// Samples every gate on grid. Analog drives ignore var. For switch-matrix drives the
/// grid step must divide t0.
SampledDrive synthesize(
    const DriveSpec &drive, const std::optional<VariationSpec> &var, int n_gates, const TimeGrid &grid);

}  // namespace shuttle

#endif
