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


#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "shuttle/valley.h"

using namespace shuttle;

namespace {

ValleySignals signals_at(const DriveSpec &d, int ppp) {
    GateStack s;
    s.n_gates = gates_for_periods(3, 3);
    auto g = TimeGrid::over_periods(30.0, 3, ppp);
    auto drive = synthesize(d, std::nullopt, s.n_gates, g);
    auto t = trace(s, drive, g.t_start_ns, g.t_end_ns(), g.n_samples);
    return tilted_signals(t, TiltedInterfaceModel{});
}

// Change in final leakage when the trace resolution doubles, with one ODE step for both runs.
double refinement_change(const DriveSpec &d) {
    auto coarse = signals_at(d, 600);
    auto fine = signals_at(d, 1200);
    double dt = std::min(default_valley_step(coarse, 30.0), default_valley_step(fine, 30.0));
    return std::abs(evolve(coarse, dt).leakage.back() - evolve(fine, dt).leakage.back());
}

}  // namespace

TEST_CASE("analog trace resolution is converged") {
    CHECK(refinement_change(AnalogDriveSpec{}) < 1e-8);
}

TEST_CASE("digital trace resolution is converged") {
    CHECK(refinement_change(DigitalDriveSpec::standard(200, 30, 3, 0.1)) < 1e-8);
}
