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

#ifndef SHUTTLE_ROUGHNESS_H
#define SHUTTLE_ROUGHNESS_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shuttle/valley.h"

namespace shuttle {

/// Alloy-disorder quantum well on an atomic (x, z) lattice. z grows into the substrate;
/// the top interface passes through z = 0 at x = 0 and both interfaces follow
/// z(x) = z(0) - theta x.
struct RoughnessModel {
    double x_well = 0.0972;
    double x_barrier = 0.3;
    double delta_ec_mev = 139.0;
    double e_z_mv_per_nm = 13.0;
    double tau_int_nm = constants::si_lattice_nm / 16.0;
    double well_width_ml = 80.0;
    double theta_rad = constants::deg_to_rad(0.3);
    double dz_nm = constants::si_lattice_nm / 4.0;
    double dx_nm = constants::si_lattice_nm / 2.0;
    double m_z_me = 0.98;
    /// Shift psi_z with the local interface height under the dot.
    bool psi_follows_interface = true;
    uint64_t seed = 0;

    void validate() const;
    double z_top_nm(double x_nm) const;
    double z_bottom_nm(double x_nm) const;
    /// Mean Ge fraction: smeared step into the barrier on both sides of the well.
    double mean_fraction(double x_nm, double z_nm) const;
    /// Conduction-band energy in eV for alloy fraction x_frac at depth z.
    double band_energy(double x_frac, double z_nm) const;
};

struct BoundStates {
    std::vector<double> energies_ev;
    /// Real amplitudes normalized so that sum psi^2 dz = 1.
    std::vector<std::vector<double>> psi;
};

/// Lowest n_states of -hbar^2 / (2 m) d2/dz2 + V on a uniform grid with zero
/// boundary values one step beyond each end.
BoundStates solve_schrodinger_1d(std::span<const double> potential_ev, double dz_nm, double mass_me, int n_states);

struct PsiZ {
    double z_start_nm = 0;
    double dz_nm = 0;
    std::vector<double> amplitude;
    std::vector<double> density;
    double energy_ev = 0;
    double excited_energy_ev = 0;

    double z(size_t l) const {
        return z_start_nm + static_cast<double>(l) * dz_nm;
    }
    double z_end_nm() const {
        return z(amplitude.size() - 1);
    }
    /// |psi|^2 at an arbitrary depth from a cubic interpolation of the amplitude.
    double density_at(double z_nm) const;
};

/// Ground state of the mean well at x = 0, grown until the density at both grid ends is
/// below 1e-8 of its peak. Throws std::runtime_error if it never localizes.
PsiZ solve_psi_z(const RoughnessModel &model);

/// round(4 pi a^2 / a0^2).
int effective_count(double a_ref_nm);

/// Ge fraction on lattice sites x_j = j dx, z_l = l dz. Stored x-major.
struct DisorderField {
    long j_start = 0;
    long l_start = 0;
    size_t nx = 0;
    size_t nz = 0;
    double dx_nm = 0;
    double dz_nm = 0;
    int n_eff = 0;
    std::vector<double> fraction;

    double x(size_t ix) const {
        return static_cast<double>(j_start + static_cast<long>(ix)) * dx_nm;
    }
    double z(size_t iz) const {
        return static_cast<double>(l_start + static_cast<long>(iz)) * dz_nm;
    }
    double at(size_t ix, size_t iz) const {
        return fraction[ix * nz + iz];
    }
};

/// Mean profile on the lattice covering [x_lo, x_hi] x [z_lo, z_hi].
DisorderField mean_field(const RoughnessModel &model, double x_lo_nm, double x_hi_nm, double z_lo_nm, double z_hi_nm);

/// Binom(N_eff, mean) / N_eff at every site, drawn in x-major order from model.seed.
DisorderField sample_disorder(
    const RoughnessModel &model, double a_ref_nm, double x_lo_nm, double x_hi_nm, double z_lo_nm, double z_hi_nm);

/// Valley coupling in eV for a Gaussian dot of size a_x centered at x_qd. The x sum is cut
/// at 5 a_x. Throws std::out_of_range if that window or psi_z leaves the field.
cdouble roughness_delta(
    double x_qd_nm, double a_x_nm, const DisorderField &field, const PsiZ &psi, const RoughnessModel &model);

/// Lattice extent a roughness run over traj needs.
struct FieldExtent {
    double x_lo_nm, x_hi_nm, z_lo_nm, z_hi_nm;
};
FieldExtent field_extent(const Trajectory &traj, const PsiZ &psi, const RoughnessModel &model);

ValleySignals roughness_signals(
    const Trajectory &traj, const RoughnessModel &model, const DisorderField &field, const PsiZ &psi);

/// 64-bit seed of realization k derived from a master seed.
uint64_t realization_seed(uint64_t master_seed, size_t k);

struct EnsembleOptions {
    size_t n_realizations = 100;
    uint64_t master_seed = 0;
    int workers = 1;
    double period_ns = 30.0;
    /// Explicit ODE step; the default step is used when empty.
    std::optional<double> dt_ns;
    bool keep_traces = false;
};

struct EnsembleSummary {
    std::vector<uint64_t> seeds;
    std::vector<double> max_leakage;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    int n_eff = 0;
    std::vector<ValleySignals> signals;
    std::vector<ValleyTrace> traces;
};

/// min, quartiles and max with linear interpolation between order statistics.
void fill_statistics(EnsembleSummary &summary);

/// One realization with the given seed.
ValleyTrace run_realization(
    const Trajectory &traj, const RoughnessModel &model, const PsiZ &psi, uint64_t seed, double period_ns,
    std::optional<double> dt_ns, ValleySignals *signals_out = nullptr);

EnsembleSummary run_ensemble(const Trajectory &traj, const RoughnessModel &model, const EnsembleOptions &options);

}  // namespace shuttle

#endif
