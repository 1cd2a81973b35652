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

#include "shuttle/electrostatics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

using namespace shuttle;

namespace {

// log(w + sqrt(w^2 + s2)) without cancellation for negative w, where s2 = u^2 + h^2.
inline double log_w_plus_r(double w, double r, double s2) {
    return w >= 0 ? std::log(w + r) : std::log(s2 / (r - w));
}

// 1 / (w + r) without cancellation.
inline double inv_w_plus_r(double w, double r, double s2) {
    return w >= 0 ? 1.0 / (w + r) : (r - w) / s2;
}

// Antiderivative G with d2G/du dw = 1 / sqrt(u^2 + w^2 + h^2).
inline double antiderivative(double u, double w, double h) {
    double r = std::sqrt(u * u + w * w + h * h);
    double term_u = u == 0 ? 0.0 : u * log_w_plus_r(w, r, u * u + h * h);
    double term_w = w == 0 ? 0.0 : w * log_w_plus_r(u, r, w * w + h * h);
    return term_u + term_w - h * std::atan(u * w / (h * r));
}

constexpr double kGolden = 0.6180339887498949;

// Golden-section search for a minimum of f on [a, b].
template <typename F>
double golden_section(F &&f, double a, double b, double tol) {
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Golden section followed by Newton steps on the analytic first derivative.
double refine_minimum(const PotentialSlice &slice, double lo, double hi) {
    double x = golden_section([&](double z) { return slice.energy(z, 0.0); }, lo, hi, 1e-3);
    for (int it = 0; it < 8; it++) {
        auto d = slice.derivs(x);
        if (!(d.d2_dx2 > 0)) {
            throw MergeEventError("non-positive curvature near x = " + std::to_string(x) + " nm");
        }
        double step = d.d_dx / d.d2_dx2;
        double next = std::clamp(x - step, lo, hi);
        bool done = std::abs(next - x) < 1e-9;
        x = next;
        if (done) {
            break;
        }
    }
    return x;
}

}  // namespace

double GateStack::capacitance_af(int gate) const {
    size_t k = static_cast<size_t>(gate - 1);
    return k < c_gate_override_af.size() ? c_gate_override_af[k] : c_gate_af;
}

void GateStack::validate() const {
    if (!(wx_nm > 0 && wy_nm > 0 && gap_nm > 0 && height_nm > 0)) {
        throw std::invalid_argument("gate stack: wx_nm, wy_nm, gap_nm and height_nm must be > 0");
    }
    if (n_gates < 3) {
        throw std::invalid_argument("gate stack: n_gates must be >= 3");
    }
    if (!(c_gate_af > 0) || !(mass_x_me > 0) || !(mass_y_me > 0)) {
        throw std::invalid_argument("gate stack: capacitance and masses must be > 0");
    }
    for (double c : c_gate_override_af) {
        if (!(c > 0)) {
            throw std::invalid_argument("gate stack: per-gate capacitances must be > 0");
        }
    }
}

std::vector<double> Trajectory::times() const {
    std::vector<double> t(samples.size());
    std::transform(samples.begin(), samples.end(), t.begin(), [](const DotState &s) { return s.t_ns; });
    return t;
}

double Trajectory::mean_a_x_nm() const {
    if (samples.empty()) {
        return 0.0;
    }
    double sum = std::accumulate(
        samples.begin(), samples.end(), 0.0, [](double acc, const DotState &s) { return acc + s.a_x_nm; });
    return sum / static_cast<double>(samples.size());
}

double shuttle::rect_integral(double x, double y, double x_left, double x_right, double wy, double h) {
    double u_lo = x - x_right;
    double u_hi = x - x_left;
    double w_lo = y - 0.5 * wy;
    double w_hi = y + 0.5 * wy;
    return antiderivative(u_hi, w_hi, h) - antiderivative(u_lo, w_hi, h) - antiderivative(u_hi, w_lo, h) +
           antiderivative(u_lo, w_lo, h);
}

RectIntegralDerivs shuttle::rect_integral_derivs(
    double x, double y, double x_left, double x_right, double wy, double h) {
    const double us[2] = {x - x_right, x - x_left};
    const double ws[2] = {y - 0.5 * wy, y + 0.5 * wy};
    RectIntegralDerivs out;
    double h2 = h * h;
    for (int i = 0; i < 2; i++) {
        for (int j = 0; j < 2; j++) {
            double sign = (i == j) ? 1.0 : -1.0;
            double u = us[i];
            double w = ws[j];
            double su = u * u + h2;
            double sw = w * w + h2;
            double r = std::sqrt(u * u + w * w + h2);
            double log_wr = log_w_plus_r(w, r, su);
            double log_ur = log_w_plus_r(u, r, sw);
            double value = (u == 0 ? 0.0 : u * log_wr) + (w == 0 ? 0.0 : w * log_ur) - h * std::atan(u * w / (h * r));
            out.value += sign * value;
            out.d_dx += sign * log_wr;
            out.d2_dx2 += sign * u * inv_w_plus_r(w, r, su) / r;
            out.d2_dy2 += sign * w * inv_w_plus_r(u, r, sw) / r;
        }
    }
    return out;
}

PotentialSlice::PotentialSlice(const GateStack &stack, std::span<const double> gate_voltages_mv)
    : stack_(&stack), weights_(gate_voltages_mv.size()) {
    if (static_cast<int>(gate_voltages_mv.size()) != stack.n_gates) {
        throw std::invalid_argument("PotentialSlice: voltage count does not match the gate count");
    }
    // rho_i = C_i V_i / (e S) in e / nm^2; aF * mV = 1e-21 C.
    double area = stack.wx_nm * stack.wy_nm;
    double prefactor = -constants::coulomb_ev_nm / constants::eps_si_relative;
    for (size_t k = 0; k < weights_.size(); k++) {
        double charge_e = stack.capacitance_af(static_cast<int>(k) + 1) * gate_voltages_mv[k] * 1e-21 /
                          constants::elementary_charge_c;
        weights_[k] = prefactor * charge_e / area;
    }
}

namespace {

std::vector<double> voltages_at(const GateStack &stack, const SampledDrive &drive, double t_ns) {
    if (drive.n_gates() != stack.n_gates) {
        throw std::invalid_argument(
            "drive has " + std::to_string(drive.n_gates()) + " gates but the stack has " +
            std::to_string(stack.n_gates));
    }
    std::vector<double> v(static_cast<size_t>(drive.n_gates()));
    drive.voltages_at(t_ns, v);
    return v;
}

}  // namespace

PotentialSlice::PotentialSlice(const GateStack &stack, const SampledDrive &drive, double t_ns)
    : PotentialSlice(stack, voltages_at(stack, drive, t_ns)) {
}

double PotentialSlice::energy(double x_nm, double y_nm) const {
    const auto &s = *stack_;
    double half = 0.5 * s.wx_nm;
    double pitch = s.pitch_nm();
    double sum = 0;
    for (size_t k = 0; k < weights_.size(); k++) {
        if (weights_[k] == 0.0) {
            continue;
        }
        double c = static_cast<double>(k) * pitch;
        sum += weights_[k] * rect_integral(x_nm, y_nm, c - half, c + half, s.wy_nm, s.height_nm);
    }
    return sum;
}

RectIntegralDerivs PotentialSlice::derivs(double x_nm, double y_nm) const {
    const auto &s = *stack_;
    double half = 0.5 * s.wx_nm;
    double pitch = s.pitch_nm();
    RectIntegralDerivs out;
    for (size_t k = 0; k < weights_.size(); k++) {
        if (weights_[k] == 0.0) {
            continue;
        }
        double c = static_cast<double>(k) * pitch;
        auto d = rect_integral_derivs(x_nm, y_nm, c - half, c + half, s.wy_nm, s.height_nm);
        out.value += weights_[k] * d.value;
        out.d_dx += weights_[k] * d.d_dx;
        out.d2_dx2 += weights_[k] * d.d2_dx2;
        out.d2_dy2 += weights_[k] * d.d2_dy2;
    }
    return out;
}

double shuttle::potential(double x_nm, double y_nm, double t_ns, const GateStack &stack, const SampledDrive &drive) {
    return PotentialSlice(stack, drive, t_ns).energy(x_nm, y_nm);
}

double shuttle::track_minimum(const PotentialSlice &slice, double x_prev_nm, double pitch_nm) {
    constexpr int kCells = 32;
    double lo = x_prev_nm - pitch_nm;
    double step = 2 * pitch_nm / kCells;
    double e[kCells + 1];
    for (int k = 0; k <= kCells; k++) {
        e[k] = slice.energy(lo + k * step, 0.0);
    }
    int best = -1;
    for (int k = 1; k < kCells; k++) {
        if (e[k] < e[k - 1] && e[k] <= e[k + 1]) {
            if (best < 0 || std::abs(k - kCells / 2) < std::abs(best - kCells / 2)) {
                best = k;
            }
        }
    }
    if (best < 0) {
        throw DotLostError("no interior minimum within one pitch of x = " + std::to_string(x_prev_nm) + " nm");
    }
    double x = refine_minimum(slice, lo + (best - 1) * step, lo + (best + 1) * step);
    if (!(std::abs(x - x_prev_nm) < pitch_nm)) {
        throw DotLostError("minimum moved a full pitch from x = " + std::to_string(x_prev_nm) + " nm");
    }
    return x;
}

double shuttle::track_minimum(double t_ns, double x_prev_nm, const GateStack &stack, const SampledDrive &drive) {
    return track_minimum(PotentialSlice(stack, drive, t_ns), x_prev_nm, stack.pitch_nm());
}

double shuttle::global_minimum(const PotentialSlice &slice, double x_lo_nm, double x_hi_nm) {
    if (!(x_hi_nm > x_lo_nm)) {
        throw std::invalid_argument("global_minimum: empty interval");
    }
    int n = std::max(8, static_cast<int>(std::ceil((x_hi_nm - x_lo_nm) / 0.5)));
    double step = (x_hi_nm - x_lo_nm) / n;
    int best = 0;
    double best_e = slice.energy(x_lo_nm, 0.0);
    for (int k = 1; k <= n; k++) {
        double e = slice.energy(x_lo_nm + k * step, 0.0);
        if (e < best_e) {
            best_e = e;
            best = k;
        }
    }
    if (best == 0 || best == n) {
        throw DotLostError("deepest point of the scan lies on its boundary");
    }
    return refine_minimum(slice, x_lo_nm + (best - 1) * step, x_lo_nm + (best + 1) * step);
}

DotState shuttle::curvature(
    const PotentialSlice &slice, double x_qd_nm, const GateStack &stack, CurvatureMethod method) {
    double uxx;
    double uyy;
    if (method == CurvatureMethod::Analytic) {
        auto d = slice.derivs(x_qd_nm, 0.0);
        uxx = d.d2_dx2;
        uyy = d.d2_dy2;
    } else {
        constexpr double h = 0.1;
        auto five_point = [&](auto &&f) {
            return (-f(2 * h) + 16 * f(h) - 30 * f(0.0) + 16 * f(-h) - f(-2 * h)) / (12 * h * h);
        };
        uxx = five_point([&](double s) { return slice.energy(x_qd_nm + s, 0.0); });
        uyy = five_point([&](double s) { return slice.energy(x_qd_nm, s); });
    }
    if (!(uxx > 0) || !(uyy > 0)) {
        throw MergeEventError("non-positive curvature at x = " + std::to_string(x_qd_nm) + " nm");
    }
    double mx = stack.mass_x_me * constants::electron_mass;
    double my = stack.mass_y_me * constants::electron_mass;
    DotState s;
    s.x_nm = x_qd_nm;
    s.y_nm = 0.0;
    s.omega_x_per_ns = std::sqrt(uxx / mx);
    s.omega_y_per_ns = std::sqrt(uyy / my);
    s.a_x_nm = std::sqrt(constants::hbar_ev_ns / (mx * s.omega_x_per_ns));
    s.a_y_nm = std::sqrt(constants::hbar_ev_ns / (my * s.omega_y_per_ns));
    return s;
}

DotState shuttle::curvature(
    double x_qd_nm, double t_ns, const GateStack &stack, const SampledDrive &drive, CurvatureMethod method) {
    DotState s = curvature(PotentialSlice(stack, drive, t_ns), x_qd_nm, stack, method);
    s.t_ns = t_ns;
    return s;
}

int shuttle::gates_for_periods(int n_phases, int n_periods, int guard_gates) {
    return n_phases * (n_periods + 1) + 2 * guard_gates;
}

Trajectory shuttle::trace(
    const GateStack &stack, const SampledDrive &drive, double t_begin_ns, double t_end_ns, size_t n_samples,
    const TraceOptions &options) {
    stack.validate();
    if (n_samples < 3 || !(t_end_ns > t_begin_ns)) {
        throw std::invalid_argument("trace: need t_end > t_begin and at least 3 samples");
    }
    const double pitch = stack.pitch_nm();
    const double dt = (t_end_ns - t_begin_ns) / static_cast<double>(n_samples - 1);
    const int n_phases = options.n_phases;
    const int guard = options.guard_gates;
    if (stack.n_gates < 2 * guard + n_phases) {
        throw std::invalid_argument("trace: too few gates for the guard regions");
    }

    // Probe the travel direction from the middle of the array.
    double mid = 0.5 * stack.gate_center_nm(stack.n_gates);
    double span = 0.5 * n_phases * pitch;
    double x_probe = global_minimum(PotentialSlice(stack, drive, t_begin_ns), mid - span, mid + span);
    double x_moved = x_probe;
    for (size_t k = 1; k <= std::min<size_t>(10, n_samples - 1); k++) {
        x_moved = track_minimum(PotentialSlice(stack, drive, t_begin_ns + k * dt), x_moved, pitch);
    }
    bool forward = x_moved >= x_probe;

    int first_gate = forward ? guard + 1 : stack.n_gates - guard - n_phases + 1;
    double lo = stack.gate_center_nm(first_gate) - 0.5 * pitch;
    double hi = stack.gate_center_nm(first_gate + n_phases - 1) + 0.5 * pitch;

    Trajectory traj;
    traj.samples.reserve(n_samples);
    double x = 0;
    for (size_t k = 0; k < n_samples; k++) {
        double t = k + 1 == n_samples ? t_end_ns : t_begin_ns + static_cast<double>(k) * dt;
        PotentialSlice slice(stack, drive, t);
        x = k == 0 ? global_minimum(slice, lo, hi) : track_minimum(slice, x, pitch);
        DotState s = curvature(slice, x, stack, CurvatureMethod::Analytic);
        s.t_ns = t;
        traj.samples.push_back(s);
    }

    auto &xs = traj.samples;
    size_t n = xs.size();
    traj.v_s.resize(n);
    for (size_t k = 1; k + 1 < n; k++) {
        traj.v_s[k] = (xs[k + 1].x_nm - xs[k - 1].x_nm) / (2 * dt);
    }
    traj.v_s[0] = (-3 * xs[0].x_nm + 4 * xs[1].x_nm - xs[2].x_nm) / (2 * dt);
    traj.v_s[n - 1] = (3 * xs[n - 1].x_nm - 4 * xs[n - 2].x_nm + xs[n - 3].x_nm) / (2 * dt);
    return traj;
}
