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

#ifndef SHUTTLE_ELECTROSTATICS_H
#define SHUTTLE_ELECTROSTATICS_H

#include <span>
#include <stdexcept>
#include <vector>

#include "shuttle/drive.h"

namespace shuttle {

/// Planar array of identical rectangular gates along x, a height h above the silicon.
/// Gate i (1-based) spans x in [x_c(i) - W_x/2, x_c(i) + W_x/2] with x_c(i) = (i - 1) (W_x + l).
struct GateStack {
    double wx_nm = 30.0;
    double wy_nm = 30.0;
    double gap_nm = 1.0;
    double height_nm = 10.0;
    int n_gates = 24;
    double c_gate_af = 0.1;
    /// Optional per-gate capacitance (element k is gate k + 1).
    std::vector<double> c_gate_override_af;
    double mass_x_me = 0.19;
    double mass_y_me = 0.19;

    double pitch_nm() const {
        return wx_nm + gap_nm;
    }
    double gate_center_nm(int gate) const {
        return (gate - 1) * pitch_nm();
    }
    double capacitance_af(int gate) const;
    void validate() const;
};

struct DotState {
    double t_ns = 0;
    double x_nm = 0;
    double y_nm = 0;
    double omega_x_per_ns = 0;
    double omega_y_per_ns = 0;
    double a_x_nm = 0;
    double a_y_nm = 0;
};

struct Trajectory {
    std::vector<DotState> samples;
    /// Shuttle velocity in nm/ns (numerically equal to m/s).
    std::vector<double> v_s;

    std::vector<double> times() const;
    double mean_a_x_nm() const;
};

/// The tracked minimum left its search window or vanished.
struct DotLostError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Non-positive curvature at the tracked point, i.e. a saddle or a merge of minima.
struct MergeEventError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Closed-form integral of 1 / sqrt((x - X)^2 + (y - Y)^2 + h^2) over the gate rectangle
/// X in [x_left, x_right], Y in [-wy/2, wy/2].
double rect_integral(double x, double y, double x_left, double x_right, double wy, double h);

struct RectIntegralDerivs {
    double value = 0;
    double d_dx = 0;
    double d2_dx2 = 0;
    double d2_dy2 = 0;
};
RectIntegralDerivs rect_integral_derivs(double x, double y, double x_left, double x_right, double wy, double h);

/// The potential energy landscape at one instant. Gate charges are frozen at
/// construction so repeated evaluations only pay for the geometry.
class PotentialSlice {
   public:
    PotentialSlice(const GateStack &stack, std::span<const double> gate_voltages_mv);
    PotentialSlice(const GateStack &stack, const SampledDrive &drive, double t_ns);

    /// Potential energy of an electron in eV.
    double energy(double x_nm, double y_nm) const;
    /// Value, d/dx, d2/dx2 and d2/dy2 of the energy along y = y_nm.
    RectIntegralDerivs derivs(double x_nm, double y_nm = 0.0) const;

   private:
    const GateStack *stack_;
    /// Energy per unit geometric integral for each gate, eV / nm.
    std::vector<double> weights_;
};

double potential(double x_nm, double y_nm, double t_ns, const GateStack &stack, const SampledDrive &drive);

/// Position of the dot at t, searched within x_prev +- pitch along y = 0. When several
/// local minima fall inside the window the one closest to x_prev wins.
double track_minimum(const PotentialSlice &slice, double x_prev_nm, double pitch_nm);
double track_minimum(double t_ns, double x_prev_nm, const GateStack &stack, const SampledDrive &drive);

enum class CurvatureMethod { Analytic, FiniteDifference };

/// Harmonic frequencies and sizes at a tracked minimum.
DotState curvature(
    double x_qd_nm, double t_ns, const GateStack &stack, const SampledDrive &drive,
    CurvatureMethod method = CurvatureMethod::Analytic);
DotState curvature(const PotentialSlice &slice, double x_qd_nm, const GateStack &stack, CurvatureMethod method);

/// Global minimum of the energy along y = 0 within [x_lo, x_hi] at time t.
double global_minimum(const PotentialSlice &slice, double x_lo_nm, double x_hi_nm);

struct TraceOptions {
    /// Gates kept free at each end of the array.
    int guard_gates = 12;
    /// Gates per conveyor period.
    int n_phases = 3;
};

/// Follows the dot over [t_begin, t_end] at n_samples uniform instants. The start point
/// is the deepest minimum over the first conveyor period on the side of the array the
/// dot moves away from.
Trajectory trace(
    const GateStack &stack, const SampledDrive &drive, double t_begin_ns, double t_end_ns, size_t n_samples,
    const TraceOptions &options = {});

/// Gates needed to carry a dot over n_periods with guard gates at both ends.
int gates_for_periods(int n_phases, int n_periods, int guard_gates = 12);

}  // namespace shuttle

#endif
