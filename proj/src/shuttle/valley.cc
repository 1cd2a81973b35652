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

#include "shuttle/valley.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

using namespace shuttle;

void TiltedInterfaceModel::validate() const {
    if (!(ev0_uev > 0)) {
        throw std::invalid_argument("tilted model: ev0_uev must be > 0");
    }
    if (!(theta_rad >= 0)) {
        throw std::invalid_argument("tilted model: theta must be >= 0");
    }
    if (!std::isfinite(arg_delta0_rad)) {
        throw std::invalid_argument("tilted model: arg_delta0 must be finite");
    }
}

double ValleySignals::max_ev() const {
    double m = 0;
    for (double e : ev_ev) {
        m = std::max(m, e);
    }
    return m;
}

double ValleySignals::max_abs_phidot() const {
    double m = 0;
    for (double p : phidot_rad_per_ns) {
        m = std::max(m, std::abs(p));
    }
    return m;
}

ValleySignals shuttle::tilted_signals(const Trajectory &traj, const TiltedInterfaceModel &model) {
    model.validate();
    size_t n = traj.samples.size();
    if (n == 0 || traj.v_s.size() != n) {
        throw std::invalid_argument("tilted_signals: empty or inconsistent trajectory");
    }
    const double k0 = constants::valley_k0_per_nm;
    const double kt = k0 * model.theta_rad;
    const double ev0 = model.ev0_uev * constants::ev_per_uev;
    ValleySignals s;
    s.times_ns.resize(n);
    s.ev_ev.resize(n);
    s.phi_v_rad.resize(n);
    s.phidot_rad_per_ns.resize(n);
    for (size_t k = 0; k < n; k++) {
        const auto &d = traj.samples[k];
        s.times_ns[k] = d.t_ns;
        s.ev_ev[k] = ev0 * std::exp(-kt * kt * d.a_x_nm * d.a_x_nm);
        s.phidot_rad_per_ns[k] = 2 * kt * traj.v_s[k];
    }
    s.phi_v_rad[0] = model.arg_delta0_rad;
    for (size_t k = 1; k < n; k++) {
        double h = s.times_ns[k] - s.times_ns[k - 1];
        s.phi_v_rad[k] = s.phi_v_rad[k - 1] + 0.5 * h * (s.phidot_rad_per_ns[k] + s.phidot_rad_per_ns[k - 1]);
    }
    return s;
}

ValleySignals shuttle::constant_signals(double ev_ev, double phidot_rad_per_ns, double span_ns, size_t n_samples) {
    if (n_samples < 2 || !(span_ns > 0)) {
        throw std::invalid_argument("constant_signals: need span > 0 and at least 2 samples");
    }
    ValleySignals s;
    double h = span_ns / static_cast<double>(n_samples - 1);
    for (size_t k = 0; k < n_samples; k++) {
        double t = static_cast<double>(k) * h;
        s.times_ns.push_back(t);
        s.ev_ev.push_back(ev_ev);
        s.phi_v_rad.push_back(phidot_rad_per_ns * t);
        s.phidot_rad_per_ns.push_back(phidot_rad_per_ns);
    }
    return s;
}

ValleySignals shuttle::reversed(const ValleySignals &signals) {
    ValleySignals r = signals;
    std::reverse(r.ev_ev.begin(), r.ev_ev.end());
    std::reverse(r.phi_v_rad.begin(), r.phi_v_rad.end());
    std::reverse(r.phidot_rad_per_ns.begin(), r.phidot_rad_per_ns.end());
    return r;
}

double shuttle::default_valley_step(const ValleySignals &signals, double period_ns) {
    if (signals.size() < 2 || !(period_ns > 0)) {
        throw std::invalid_argument("default_valley_step: need two samples and a positive period");
    }
    const double hbar = constants::hbar_ev_ns;
    double dt = period_ns / 2000.0;
    double ev_max = signals.max_ev();
    if (ev_max > 0) {
        dt = std::min(dt, 0.02 * 2 * constants::pi * hbar / ev_max);
    }
    double lambda = 0;
    for (size_t k = 0; k < signals.size(); k++) {
        double w = signals.ev_ev[k] / hbar;
        double p = signals.phidot_rad_per_ns[k];
        lambda = std::max(lambda, 0.5 * std::sqrt(w * w + p * p));
    }
    double span = signals.times_ns.back() - signals.times_ns.front();
    if (lambda > 0 && span > 0) {
        // RK4 loses (lambda dt)^6 / 72 of norm per step on a skew-Hermitian generator.
        double budget = 0.1 * kNormDriftBudget;
        dt = std::min(dt, std::pow(72.0 * budget / (span * std::pow(lambda, 6)), 0.2));
    }
    return dt;
}

namespace {

struct Rhs {
    double w;
    double p;

    // d/dt (g, e) = -i H (g, e), H = 1/2 [[-w, -p], [-p, w]].
    void apply(cdouble g, cdouble e, cdouble &dg, cdouble &de) const {
        const cdouble mi{0.0, -0.5};
        dg = mi * (-w * g - p * e);
        de = mi * (-p * g + w * e);
    }
};

}  // namespace

ValleyTrace shuttle::evolve(const ValleySignals &signals, double dt_ns, const ValleyState &initial) {
    size_t n = signals.size();
    if (n < 2 || signals.ev_ev.size() != n || signals.phidot_rad_per_ns.size() != n) {
        throw std::invalid_argument("evolve: signals need at least two consistent samples");
    }
    if (!(dt_ns > 0)) {
        throw std::invalid_argument("evolve: dt must be > 0");
    }
    const double t0 = signals.times_ns.front();
    const double h = (signals.times_ns.back() - t0) / static_cast<double>(n - 1);
    if (!(h > 0)) {
        throw std::invalid_argument("evolve: time grid must be increasing");
    }
    for (size_t k = 0; k < n; k++) {
        if (std::abs(signals.times_ns[k] - (t0 + static_cast<double>(k) * h)) > 1e-9 * std::max(h, std::abs(t0))) {
            throw std::invalid_argument("evolve: signal grid is not uniform");
        }
    }
    const long sub = std::max(1L, static_cast<long>(std::ceil(h / dt_ns - 1e-9)));
    const double step = h / static_cast<double>(sub);
    const double inv_hbar = 1.0 / constants::hbar_ev_ns;
    const double norm0 = initial.norm_sq();

    ValleyTrace out;
    out.dt_ns = step;
    out.times_ns = signals.times_ns;
    out.states.reserve(n);
    out.leakage.reserve(n);

    cdouble g = initial.alpha_g;
    cdouble e = initial.alpha_e;
    out.states.push_back(initial);
    out.leakage.push_back(std::norm(e));
    out.max_leakage = std::norm(e);

    for (size_t k = 0; k + 1 < n; k++) {
        const double w0 = signals.ev_ev[k] * inv_hbar;
        const double w1 = signals.ev_ev[k + 1] * inv_hbar;
        const double p0 = signals.phidot_rad_per_ns[k];
        const double p1 = signals.phidot_rad_per_ns[k + 1];
        auto at = [&](double f) { return Rhs{w0 + f * (w1 - w0), p0 + f * (p1 - p0)}; };
        for (long s = 0; s < sub; s++) {
            double f0 = static_cast<double>(s) / static_cast<double>(sub);
            double f1 = static_cast<double>(s + 1) / static_cast<double>(sub);
            Rhs r0 = at(f0);
            Rhs rm = at(0.5 * (f0 + f1));
            Rhs r1 = at(f1);
            cdouble k1g, k1e, k2g, k2e, k3g, k3e, k4g, k4e;
            r0.apply(g, e, k1g, k1e);
            rm.apply(g + 0.5 * step * k1g, e + 0.5 * step * k1e, k2g, k2e);
            rm.apply(g + 0.5 * step * k2g, e + 0.5 * step * k2e, k3g, k3e);
            r1.apply(g + step * k3g, e + step * k3e, k4g, k4e);
            g += step / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
            e += step / 6.0 * (k1e + 2.0 * k2e + 2.0 * k3e + k4e);
            out.max_leakage = std::max(out.max_leakage, std::norm(e));
            double drift = std::abs(std::norm(g) + std::norm(e) - norm0);
            if (drift > out.max_norm_drift) {
                out.max_norm_drift = drift;
                if (drift > kNormDriftBudget) {
                    char msg[128];
                    std::snprintf(msg, sizeof(msg), "valley norm drifted by %.3g with step %.3g ns; reduce dt", drift,
                                  step);
                    throw NormDriftError(msg);
                }
            }
        }
        out.states.push_back(ValleyState{g, e});
        out.leakage.push_back(std::norm(e));
    }
    return out;
}

double shuttle::rabi_infidelity(double v_s_nm_per_ns, double a_x_nm, double theta_rad, double ev0_uev) {
    const double kt = constants::valley_k0_per_nm * theta_rad;
    double g = 2 * kt * v_s_nm_per_ns;
    double w = ev0_uev * constants::ev_per_uev / constants::hbar_ev_ns;
    double num = g * g;
    if (num == 0) {
        return 0.0;
    }
    return num / (num + w * w * std::exp(-2 * kt * kt * a_x_nm * a_x_nm));
}
