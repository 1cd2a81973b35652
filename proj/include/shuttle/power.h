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

#ifndef SHUTTLE_POWER_H
#define SHUTTLE_POWER_H

#include <cstdint>
#include <span>
#include <vector>

namespace shuttle {

/// Inputs of the CV^2 f heat budget. Capacitances in fF, V0 in mV, f in MHz.
struct PowerParams {
    int64_t n_qubit = 1000000;
    int n_phases = 3;
    int n_dc = 3;
    int n_gate = 40;
    double c_sc_ff = 10.0;
    double c_gate_ff = 1.0;
    double c_sl_ff = 1.0;
    double v0_mv = 10.0;
    double f_mhz = 100.0;
    /// One control line serves every channel; removes n_qubit from the shared terms.
    bool shared_control = false;
    /// Channels per collectively driven group.
    int64_t n_unit = 1;

    void validate() const;
    /// Multiplier of the per-line terms: 1 when shared, n_qubit / n_unit otherwise.
    double line_count() const;
};

/// Parasitic capacitance of the switch and filter stage, mW.
double p_sc(const PowerParams &p);
/// Gate electrodes, mW. Never shared.
double p_gate(const PowerParams &p);
/// Signal lines from the DC sources, mW.
double p_sl(const PowerParams &p);

struct PowerRow {
    int64_t n_qubit = 0;
    double v0_mv = 0;
    bool shared = false;
    double p_sc_mw = 0;
    double p_gate_mw = 0;
    double p_sl_mw = 0;
    double total_mw = 0;
};

/// One row per (n_qubit, V0, shared) in that nesting order, outermost first.
std::vector<PowerRow> p_total_curve(
    const PowerParams &base, std::span<const int64_t> n_qubits, std::span<const double> v0s_mv,
    std::span<const bool> shared_settings);

}  // namespace shuttle

#endif
