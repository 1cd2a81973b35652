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

#include "shuttle/power.h"

#include <stdexcept>

using namespace shuttle;

namespace {

// C [fF] * V [mV]^2 * f [MHz] in mW.
double cv2f_mw(double c_ff, double v_mv, double f_mhz) {
    double c = c_ff * 1e-15;
    double v = v_mv * 1e-3;
    double f = f_mhz * 1e6;
    return c * v * v * f * 1e3;
}

}  // namespace

void PowerParams::validate() const {
    if (n_qubit < 1 || n_phases < 1 || n_dc < 1 || n_gate < 1 || n_unit < 1) {
        throw std::invalid_argument("power: all counts must be >= 1");
    }
    if (!(c_sc_ff > 0 && c_gate_ff > 0 && c_sl_ff > 0 && v0_mv > 0 && f_mhz > 0)) {
        throw std::invalid_argument("power: capacitances, v0_mv and f_mhz must be > 0");
    }
}

double PowerParams::line_count() const {
    return shared_control ? 1.0 : static_cast<double>(n_qubit) / static_cast<double>(n_unit);
}

double shuttle::p_sc(const PowerParams &p) {
    p.validate();
    return p.line_count() * p.n_phases * cv2f_mw(p.c_sc_ff, p.v0_mv, p.f_mhz);
}

double shuttle::p_gate(const PowerParams &p) {
    p.validate();
    return static_cast<double>(p.n_qubit) * p.n_gate * cv2f_mw(p.c_gate_ff, p.v0_mv, p.f_mhz);
}

double shuttle::p_sl(const PowerParams &p) {
    p.validate();
    return p.line_count() * p.n_phases * p.n_dc * cv2f_mw(p.c_sl_ff, p.v0_mv, p.f_mhz);
}

std::vector<PowerRow> shuttle::p_total_curve(
    const PowerParams &base, std::span<const int64_t> n_qubits, std::span<const double> v0s_mv,
    std::span<const bool> shared_settings) {
    if (n_qubits.empty() || v0s_mv.empty() || shared_settings.empty()) {
        throw std::invalid_argument("p_total_curve: empty range");
    }
    std::vector<PowerRow> rows;
    for (int64_t nq : n_qubits) {
        for (double v0 : v0s_mv) {
            for (bool shared : shared_settings) {
                PowerParams p = base;
                p.n_qubit = nq;
                p.v0_mv = v0;
                p.shared_control = shared;
                PowerRow r;
                r.n_qubit = nq;
                r.v0_mv = v0;
                r.shared = shared;
                r.p_sc_mw = p_sc(p);
                r.p_gate_mw = p_gate(p);
                r.p_sl_mw = p_sl(p);
                r.total_mw = r.p_sc_mw + r.p_gate_mw + r.p_sl_mw;
                rows.push_back(r);
            }
        }
    }
    return rows;
}
