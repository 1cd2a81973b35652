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

#ifndef SHUTTLE_CONSTANTS_H
#define SHUTTLE_CONSTANTS_H

#include <numbers>

/// Internal unit system: lengths in nm, times in ns, energies in eV, charges in e.
/// Angular frequencies are rad/ns, so an energy E maps to E / hbar_ev_ns.
namespace shuttle::constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double hbar_ev_ns = 6.582119569e-7;
/// Free-electron mass in eV ns^2 / nm^2.
inline constexpr double electron_mass = 5.685630e-12;
/// e^2 / (4 pi eps0) in eV nm.
inline constexpr double coulomb_ev_nm = 1.439964;
inline constexpr double eps_si_relative = 11.68;
inline constexpr double elementary_charge_c = 1.602176634e-19;
/// Silicon lattice constant.
inline constexpr double si_lattice_nm = 0.53;
/// Valley wavevector, 0.85 * 2 pi / a0.
inline constexpr double valley_k0_per_nm = 0.85 * 2.0 * pi / si_lattice_nm;
/// One atomic monolayer along [001].
inline constexpr double monolayer_nm = si_lattice_nm / 4.0;

inline constexpr double ev_per_uev = 1e-6;
inline constexpr double ev_per_mev = 1e-3;

inline constexpr double deg_to_rad(double deg) {
    return deg * pi / 180.0;
}

}  // namespace shuttle::constants

#endif
