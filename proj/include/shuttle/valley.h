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

#ifndef SHUTTLE_VALLEY_H
#define SHUTTLE_VALLEY_H

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "shuttle/electrostatics.h"

namespace shuttle {

using cdouble = std::complex<double>;

/// Flat interface tilted by theta along the shuttling direction.
struct TiltedInterfaceModel {
    double ev0_uev = 200.0;
    double theta_rad = constants::deg_to_rad(0.3);
    double arg_delta0_rad = 0.0;

    void validate() const;
};

/// Valley splitting and coupling phase sampled on a uniform time grid.
struct ValleySignals {
    std::vector<double> times_ns;
    std::vector<double> ev_ev;
    std::vector<double> phi_v_rad;
    std::vector<double> phidot_rad_per_ns;

    size_t size() const {
        return times_ns.size();
    }
    double max_ev() const;
    double max_abs_phidot() const;
};

struct ValleyState {
    cdouble alpha_g{1.0, 0.0};
    cdouble alpha_e{0.0, 0.0};

    double norm_sq() const {
        return std::norm(alpha_g) + std::norm(alpha_e);
    }
};

struct ValleyTrace {
    std::vector<double> times_ns;
    std::vector<ValleyState> states;
    /// 1 - F at each signal sample, computed as |alpha_e|^2.
    std::vector<double> leakage;
    /// Largest 1 - F seen at any integrator step, not only at signal samples.
    double max_leakage = 0.0;
    double max_norm_drift = 0.0;
    double dt_ns = 0.0;
};

/// The integrator lost more norm than allowed.
struct NormDriftError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kNormDriftBudget = 1e-9;

ValleySignals tilted_signals(const Trajectory &traj, const TiltedInterfaceModel &model);

/// Signals held constant over [0, span_ns] with n_samples points.
ValleySignals constant_signals(double ev_ev, double phidot_rad_per_ns, double span_ns, size_t n_samples);

/// Step that keeps at least 50 steps per valley precession, 2000 per drive period and a
/// total RK4 norm loss below a tenth of the budget.
double default_valley_step(const ValleySignals &signals, double period_ns);

/// Classical RK4 on i d/dt (a_g, a_e) = 1/2 [[-E_v, -phidot], [-phidot, E_v]] (a_g, a_e)
/// with E_v in rad/ns. The step is shrunk so it divides the signal spacing; signals are
/// linearly interpolated inside a spacing. Throws NormDriftError past kNormDriftBudget.
ValleyTrace evolve(const ValleySignals &signals, double dt_ns, const ValleyState &initial = {});

/// Peak leakage of the constant-coupling two-level problem.
double rabi_infidelity(double v_s_nm_per_ns, double a_x_nm, double theta_rad, double ev0_uev);

/// The same signals traversed backwards in time.
ValleySignals reversed(const ValleySignals &signals);

}  // namespace shuttle

#endif
