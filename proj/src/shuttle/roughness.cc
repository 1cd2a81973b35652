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

#include "shuttle/roughness.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "shuttle/parallel.h"

using namespace shuttle;

void RoughnessModel::validate() const {
    if (!(0 < x_well && x_well < x_barrier && x_barrier < 1)) {
        throw std::invalid_argument("roughness model: need 0 < x_well < x_barrier < 1");
    }
    if (!(tau_int_nm > 0 && well_width_ml > 0 && dz_nm > 0 && dx_nm > 0 && m_z_me > 0 && delta_ec_mev > 0)) {
        throw std::invalid_argument("roughness model: length scales, mass and band offset must be > 0");
    }
    if (!(theta_rad >= 0) || !std::isfinite(e_z_mv_per_nm)) {
        throw std::invalid_argument("roughness model: theta must be >= 0 and e_z finite");
    }
}

double RoughnessModel::z_top_nm(double x_nm) const {
    return -theta_rad * x_nm;
}

double RoughnessModel::z_bottom_nm(double x_nm) const {
    return well_width_ml * constants::monolayer_nm - theta_rad * x_nm;
}

double RoughnessModel::mean_fraction(double x_nm, double z_nm) const {
    double step = x_barrier - x_well;
    return x_well + step / (1 + std::exp((z_nm - z_top_nm(x_nm)) / tau_int_nm)) +
           step / (1 + std::exp((z_bottom_nm(x_nm) - z_nm) / tau_int_nm));
}

double RoughnessModel::band_energy(double x_frac, double z_nm) const {
    return delta_ec_mev * constants::ev_per_mev * (x_frac - x_barrier) / (x_barrier - x_well) +
           e_z_mv_per_nm * constants::ev_per_mev * z_nm;
}

BoundStates shuttle::solve_schrodinger_1d(
    std::span<const double> potential_ev, double dz_nm, double mass_me, int n_states) {
    size_t n = potential_ev.size();
    if (n < 3 || !(dz_nm > 0) || !(mass_me > 0) || n_states < 1 || static_cast<size_t>(n_states) > n) {
        throw std::invalid_argument("solve_schrodinger_1d: bad grid, mass or state count");
    }
    double hop = constants::hbar_ev_ns * constants::hbar_ev_ns /
                 (2 * mass_me * constants::electron_mass * dz_nm * dz_nm);
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n - 1), -hop);
    for (size_t k = 0; k < n; k++) {
        diag[static_cast<Eigen::Index>(k)] = potential_ev[k] + 2 * hop;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("solve_schrodinger_1d: eigensolver did not converge");
    }
    BoundStates out;
    for (int s = 0; s < n_states; s++) {
        out.energies_ev.push_back(solver.eigenvalues()[s]);
        Eigen::VectorXd v = solver.eigenvectors().col(s);
        Eigen::Index peak;
        v.cwiseAbs().maxCoeff(&peak);
        double scale = 1.0 / std::sqrt(v.squaredNorm() * dz_nm);
        if (v[peak] < 0) {
            scale = -scale;
        }
        std::vector<double> psi(n);
        for (size_t k = 0; k < n; k++) {
            psi[k] = v[static_cast<Eigen::Index>(k)] * scale;
        }
        out.psi.push_back(std::move(psi));
    }
    return out;
}

double PsiZ::density_at(double z_nm) const {
    double u = (z_nm - z_start_nm) / dz_nm;
    long n = static_cast<long>(amplitude.size());
    if (!(u > -1.0 && u < static_cast<double>(n))) {
        return 0.0;
    }
    long i = static_cast<long>(std::floor(u));
    double f = u - static_cast<double>(i);
    auto amp = [&](long k) { return (k < 0 || k >= n) ? 0.0 : amplitude[static_cast<size_t>(k)]; };
    if (f == 0.0) {
        double a = amp(i);
        return a * a;
    }
    // Four-point Lagrange through i - 1 .. i + 2.
    double pm = amp(i - 1), p0 = amp(i), p1 = amp(i + 1), p2 = amp(i + 2);
    double a = -f * (f - 1) * (f - 2) / 6 * pm + (f + 1) * (f - 1) * (f - 2) / 2 * p0 -
               (f + 1) * f * (f - 2) / 2 * p1 + (f + 1) * f * (f - 1) / 6 * p2;
    return a * a;
}

PsiZ shuttle::solve_psi_z(const RoughnessModel &model) {
    model.validate();
    const double dz = model.dz_nm;
    long lo = -16;
    long hi = static_cast<long>(std::ceil(model.z_bottom_nm(0) / dz)) + 16;
    constexpr long kGrow = 8;
    constexpr long kMaxSide = 800;
    while (true) {
        size_t n = static_cast<size_t>(hi - lo + 1);
        std::vector<double> v(n);
        for (size_t k = 0; k < n; k++) {
            double z = static_cast<double>(lo + static_cast<long>(k)) * dz;
            v[k] = model.band_energy(model.mean_fraction(0.0, z), z);
        }
        BoundStates bs = solve_schrodinger_1d(v, dz, model.m_z_me, 2);
        const auto &psi = bs.psi[0];
        double peak = 0;
        size_t peak_at = 0;
        for (size_t k = 0; k < n; k++) {
            if (psi[k] * psi[k] > peak) {
                peak = psi[k] * psi[k];
                peak_at = k;
            }
        }
        double z_peak = static_cast<double>(lo + static_cast<long>(peak_at)) * dz;
        if (z_peak < model.z_top_nm(0) - 5 * model.tau_int_nm || z_peak > model.z_bottom_nm(0)) {
            throw std::runtime_error("solve_psi_z: ground state is not localized in the well");
        }
        bool grow_lo = psi.front() * psi.front() >= 1e-8 * peak;
        bool grow_hi = psi.back() * psi.back() >= 1e-8 * peak;
        if (!grow_lo && !grow_hi) {
            PsiZ out;
            out.z_start_nm = static_cast<double>(lo) * dz;
            out.dz_nm = dz;
            out.amplitude = psi;
            out.density.resize(n);
            for (size_t k = 0; k < n; k++) {
                out.density[k] = psi[k] * psi[k];
            }
            out.energy_ev = bs.energies_ev[0];
            out.excited_energy_ev = bs.energies_ev[1];
            return out;
        }
        if (grow_lo) {
            lo -= kGrow;
        }
        if (grow_hi) {
            hi += kGrow;
        }
        if (-lo > kMaxSide || hi > kMaxSide + static_cast<long>(model.well_width_ml)) {
            throw std::runtime_error("solve_psi_z: ground state does not decay within the grid limit");
        }
    }
}

int shuttle::effective_count(double a_ref_nm) {
    if (!(a_ref_nm > 0)) {
        throw std::invalid_argument("effective_count: reference size must be > 0");
    }
    double a0 = constants::si_lattice_nm;
    return static_cast<int>(std::lround(4 * constants::pi * a_ref_nm * a_ref_nm / (a0 * a0)));
}

namespace {

DisorderField lattice(const RoughnessModel &model, double x_lo, double x_hi, double z_lo, double z_hi) {
    model.validate();
    if (!(x_hi >= x_lo) || !(z_hi >= z_lo)) {
        throw std::invalid_argument("disorder field: empty extent");
    }
    DisorderField f;
    f.dx_nm = model.dx_nm;
    f.dz_nm = model.dz_nm;
    f.j_start = static_cast<long>(std::floor(x_lo / f.dx_nm));
    f.l_start = static_cast<long>(std::floor(z_lo / f.dz_nm));
    f.nx = static_cast<size_t>(static_cast<long>(std::ceil(x_hi / f.dx_nm)) - f.j_start + 1);
    f.nz = static_cast<size_t>(static_cast<long>(std::ceil(z_hi / f.dz_nm)) - f.l_start + 1);
    f.fraction.resize(f.nx * f.nz);
    for (size_t ix = 0; ix < f.nx; ix++) {
        for (size_t iz = 0; iz < f.nz; iz++) {
            f.fraction[ix * f.nz + iz] = model.mean_fraction(f.x(ix), f.z(iz));
        }
    }
    return f;
}

}  // namespace

DisorderField shuttle::mean_field(
    const RoughnessModel &model, double x_lo_nm, double x_hi_nm, double z_lo_nm, double z_hi_nm) {
    return lattice(model, x_lo_nm, x_hi_nm, z_lo_nm, z_hi_nm);
}

DisorderField shuttle::sample_disorder(
    const RoughnessModel &model, double a_ref_nm, double x_lo_nm, double x_hi_nm, double z_lo_nm, double z_hi_nm) {
    DisorderField f = lattice(model, x_lo_nm, x_hi_nm, z_lo_nm, z_hi_nm);
    f.n_eff = effective_count(a_ref_nm);
    std::mt19937_64 rng(model.seed);
    const double inv = 1.0 / f.n_eff;
    for (double &x : f.fraction) {
        std::binomial_distribution<int> draw(f.n_eff, x);
        x = draw(rng) * inv;
    }
    return f;
}

cdouble shuttle::roughness_delta(
    double x_qd_nm, double a_x_nm, const DisorderField &field, const PsiZ &psi, const RoughnessModel &model) {
    if (!(a_x_nm > 0)) {
        throw std::invalid_argument("roughness_delta: a_x must be > 0");
    }
    const double dx = field.dx_nm;
    long j_lo = static_cast<long>(std::ceil((x_qd_nm - 5 * a_x_nm) / dx));
    long j_hi = static_cast<long>(std::floor((x_qd_nm + 5 * a_x_nm) / dx));
    if (j_lo < field.j_start || j_hi >= field.j_start + static_cast<long>(field.nx)) {
        throw std::out_of_range("roughness_delta: dot window leaves the sampled field");
    }
    const double shift = model.psi_follows_interface ? model.theta_rad * x_qd_nm : 0.0;
    if (field.z(0) > psi.z_start_nm - psi.dz_nm - shift || field.z(field.nz - 1) < psi.z_end_nm() + psi.dz_nm - shift) {
        throw std::out_of_range("roughness_delta: psi_z support leaves the sampled field");
    }

    std::vector<double> rho(field.nz);
    size_t iz_lo = field.nz;
    size_t iz_hi = 0;
    for (size_t iz = 0; iz < field.nz; iz++) {
        rho[iz] = psi.density_at(field.z(iz) + shift);
        if (rho[iz] > 0) {
            iz_lo = std::min(iz_lo, iz);
            iz_hi = iz;
        }
    }
    if (iz_lo > iz_hi) {
        return {0.0, 0.0};
    }

    std::vector<double> acc(field.nz, 0.0);
    double weight_sum = 0;
    const double norm = dx / (std::sqrt(constants::pi) * a_x_nm);
    for (long j = j_lo; j <= j_hi; j++) {
        double u = (static_cast<double>(j) * dx - x_qd_nm) / a_x_nm;
        double w = norm * std::exp(-u * u);
        weight_sum += w;
        const double *col = &field.fraction[static_cast<size_t>(j - field.j_start) * field.nz];
        for (size_t iz = iz_lo; iz <= iz_hi; iz++) {
            acc[iz] += w * col[iz];
        }
    }

    const double k0 = constants::valley_k0_per_nm;
    const double ec = model.delta_ec_mev * constants::ev_per_mev / (model.x_barrier - model.x_well);
    const double ez = model.e_z_mv_per_nm * constants::ev_per_mev;
    cdouble delta{0.0, 0.0};
    for (size_t iz = iz_lo; iz <= iz_hi; iz++) {
        double z = field.z(iz);
        double v = ec * (acc[iz] - model.x_barrier * weight_sum) + ez * z * weight_sum;
        delta += field.dz_nm * rho[iz] * v * std::polar(1.0, -2 * k0 * z);
    }
    return delta;
}

FieldExtent shuttle::field_extent(const Trajectory &traj, const PsiZ &psi, const RoughnessModel &model) {
    if (traj.samples.empty()) {
        throw std::invalid_argument("field_extent: empty trajectory");
    }
    FieldExtent e{1e300, -1e300, 0, 0};
    double s_min = 1e300;
    double s_max = -1e300;
    for (const auto &d : traj.samples) {
        e.x_lo_nm = std::min(e.x_lo_nm, d.x_nm - 5 * d.a_x_nm);
        e.x_hi_nm = std::max(e.x_hi_nm, d.x_nm + 5 * d.a_x_nm);
        double s = model.psi_follows_interface ? model.theta_rad * d.x_nm : 0.0;
        s_min = std::min(s_min, s);
        s_max = std::max(s_max, s);
    }
    e.x_lo_nm -= 2 * model.dx_nm;
    e.x_hi_nm += 2 * model.dx_nm;
    e.z_lo_nm = psi.z_start_nm - psi.dz_nm - s_max - model.dz_nm;
    e.z_hi_nm = psi.z_end_nm() + psi.dz_nm - s_min + model.dz_nm;
    return e;
}

ValleySignals shuttle::roughness_signals(
    const Trajectory &traj, const RoughnessModel &model, const DisorderField &field, const PsiZ &psi) {
    size_t n = traj.samples.size();
    if (n < 3) {
        throw std::invalid_argument("roughness_signals: need at least 3 trajectory samples");
    }
    ValleySignals s;
    s.times_ns.resize(n);
    s.ev_ev.resize(n);
    s.phi_v_rad.resize(n);
    s.phidot_rad_per_ns.resize(n);
    for (size_t k = 0; k < n; k++) {
        const auto &d = traj.samples[k];
        cdouble delta = roughness_delta(d.x_nm, d.a_x_nm, field, psi, model);
        s.times_ns[k] = d.t_ns;
        s.ev_ev[k] = 2 * std::abs(delta);
        double arg = std::arg(delta);
        if (k == 0) {
            s.phi_v_rad[k] = arg;
        } else {
            double jump = std::remainder(arg - s.phi_v_rad[k - 1], 2 * constants::pi);
            s.phi_v_rad[k] = s.phi_v_rad[k - 1] + jump;
        }
    }
    const auto &t = s.times_ns;
    const auto &p = s.phi_v_rad;
    for (size_t k = 1; k + 1 < n; k++) {
        s.phidot_rad_per_ns[k] = (p[k + 1] - p[k - 1]) / (t[k + 1] - t[k - 1]);
    }
    s.phidot_rad_per_ns[0] = (-3 * p[0] + 4 * p[1] - p[2]) / (t[2] - t[0]);
    s.phidot_rad_per_ns[n - 1] = (3 * p[n - 1] - 4 * p[n - 2] + p[n - 3]) / (t[n - 1] - t[n - 3]);
    return s;
}

uint64_t shuttle::realization_seed(uint64_t master_seed, size_t k) {
    uint64_t z = master_seed + (static_cast<uint64_t>(k) + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void shuttle::fill_statistics(EnsembleSummary &summary) {
    std::vector<double> v = summary.max_leakage;
    if (v.empty()) {
        throw std::invalid_argument("fill_statistics: no realizations");
    }
    std::sort(v.begin(), v.end());
    auto quantile = [&](double q) {
        double pos = q * static_cast<double>(v.size() - 1);
        size_t i = static_cast<size_t>(std::floor(pos));
        double f = pos - static_cast<double>(i);
        return i + 1 < v.size() ? v[i] + f * (v[i + 1] - v[i]) : v[i];
    };
    summary.min = v.front();
    summary.q1 = quantile(0.25);
    summary.median = quantile(0.5);
    summary.q3 = quantile(0.75);
    summary.max = v.back();
}

ValleyTrace shuttle::run_realization(
    const Trajectory &traj, const RoughnessModel &model, const PsiZ &psi, uint64_t seed, double period_ns,
    std::optional<double> dt_ns, ValleySignals *signals_out) {
    RoughnessModel m = model;
    m.seed = seed;
    FieldExtent e = field_extent(traj, psi, m);
    DisorderField field = sample_disorder(m, traj.mean_a_x_nm(), e.x_lo_nm, e.x_hi_nm, e.z_lo_nm, e.z_hi_nm);
    ValleySignals s = roughness_signals(traj, m, field, psi);
    double dt = dt_ns ? *dt_ns : default_valley_step(s, period_ns);
    ValleyTrace trace = evolve(s, dt);
    if (signals_out) {
        *signals_out = std::move(s);
    }
    return trace;
}

EnsembleSummary shuttle::run_ensemble(
    const Trajectory &traj, const RoughnessModel &model, const EnsembleOptions &options) {
    if (options.n_realizations < 1) {
        throw std::invalid_argument("run_ensemble: need at least one realization");
    }
    PsiZ psi = solve_psi_z(model);
    size_t n = options.n_realizations;
    EnsembleSummary out;
    out.n_eff = effective_count(traj.mean_a_x_nm());
    out.seeds.resize(n);
    out.max_leakage.resize(n);
    if (options.keep_traces) {
        out.signals.resize(n);
        out.traces.resize(n);
    }
    for (size_t k = 0; k < n; k++) {
        out.seeds[k] = realization_seed(options.master_seed, k);
    }

    parallel_for(n, options.workers, [&](size_t k) {
        ValleySignals sig;
        ValleyTrace tr = run_realization(
            traj, model, psi, out.seeds[k], options.period_ns, options.dt_ns, options.keep_traces ? &sig : nullptr);
        out.max_leakage[k] = tr.max_leakage;
        if (options.keep_traces) {
            out.signals[k] = std::move(sig);
            out.traces[k] = std::move(tr);
        }
    });
    fill_statistics(out);
    return out;
}
