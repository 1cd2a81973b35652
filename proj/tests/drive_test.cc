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


#include "shuttle/drive.h"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

using namespace shuttle;

namespace {

DigitalDriveSpec baseline(double tau_over_t0 = 0.1) {
    return DigitalDriveSpec::standard(200.0, 30.0, 3, tau_over_t0);
}

TimeGrid grid(int periods = 2, int ppp = 600) {
    return TimeGrid::over_periods(30.0, periods, ppp);
}

// Continuous-time steady state of dy/dt = (v - y)/tau for a piecewise-constant periodic v.
double rc_steady_state(const DigitalDriveSpec &s, double t) {
    std::array<double, 4> seg = s.segments_ns;
    std::array<double, 4> lev;
    for (int k = 0; k < 4; k++) {
        lev[k] = s.dc_levels_mv[s.segment_channels[k]];
    }
    double y = 0, a = 1;
    for (int k = 0; k < 4; k++) {
        double d = std::exp(-seg[k] / s.tau_ns);
        y = lev[k] + (y - lev[k]) * d;
        a *= d;
    }
    double y0 = y / (1 - a);
    double u = std::fmod(t, s.t0_ns);
    double start = 0;
    y = y0;
    for (int k = 0; k < 4; k++) {
        if (u <= start + seg[k] || k == 3) {
            return lev[k] + (y - lev[k]) * std::exp(-(u - start) / s.tau_ns);
        }
        y = lev[k] + (y - lev[k]) * std::exp(-seg[k] / s.tau_ns);
        start += seg[k];
    }
    return y;
}

}  // namespace

TEST_CASE("rect_wave levels") {
    auto s = baseline();
    CHECK(rect_wave(s, 0.0) == 100.0);
    CHECK(rect_wave(s, 0.3 * 30.0) == -200.0);
    CHECK(rect_wave(s, 0.7 * 30.0) == 100.0);
    CHECK(rect_wave(s, 0.9 * 30.0) == 200.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int k = 0; k < 200; k++) {
        double t = u(rng);
        CHECK(rect_wave(s, t + 30.0) == doctest::Approx(rect_wave(s, t)));
    }
}

TEST_CASE("phase_shifted_rect index arithmetic") {
    auto s = baseline();
    for (double t = 0.013; t < 60; t += 0.37) {
        CHECK(phase_shifted_rect(s, 1, t) == rect_wave(s, t));
        CHECK(phase_shifted_rect(s, 4, t) == phase_shifted_rect(s, 1, t));
    }
    CHECK(phase_shifted_rect(s, 2, 0.0) == 100.0);
}

TEST_CASE("sin_wave") {
    AnalogDriveSpec a;
    CHECK(sin_wave(a, 1, 0.0) == doctest::Approx(a.v0_mv).epsilon(1e-15));
    for (double t = 0.1; t < 60; t += 0.77) {
        CHECK(sin_wave(a, 1, t) == sin_wave(a, 4, t));
    }
    a.phase_mod_enabled = false;
    double quarter = 1000.0 / a.f_mhz / 4.0;
    CHECK(std::abs(sin_wave(a, 1, quarter)) <= 1e-12 * a.v0_mv);
}

TEST_CASE("lpf step response and identity") {
    UniformSeries step{0.0, 0.03, std::vector<double>(301, 1.0)};
    auto y = lpf_response(step, 3.0, 0.0);
    CHECK(y.values[100] == doctest::Approx(1 - std::exp(-1.0)).epsilon(1e-12));
    auto same = lpf_response(step, 0.0, 0.0);
    CHECK(same.values == step.values);
    UniformSeries ramp{0.0, 0.1, {1, -2, 3, 5}};
    CHECK(lpf_filter(ramp, 0.0).values == ramp.values);
}

TEST_CASE("uniform_series rejects a non-uniform grid") {
    std::vector<double> t = {0.0, 0.1, 0.25};
    std::vector<double> v = {1, 2, 3};
    CHECK_THROWS_AS(uniform_series(t, v), std::invalid_argument);
}

TEST_CASE("filtered steady state matches the piecewise RC solution") {
    for (double ratio : {0.01, 0.1, 0.5}) {
        auto s = baseline(ratio);
        auto g = grid(2);
        auto d = synthesize(s, std::nullopt, 3, g);
        auto v = d.series(1);
        double worst = 0;
        for (size_t k = 0; k < g.n_samples; k++) {
            double ref = rc_steady_state(s, g.time(k));
            worst = std::max(worst, std::abs(v[k] - ref) / 200.0);
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("filtered waveform is dominated by the fundamental") {
    auto g = grid(1, 600);
    auto d = synthesize(baseline(0.1), std::nullopt, 3, g);
    auto v = d.series(1);
    const size_t m = 600;
    double total = 0, fundamental = 0;
    for (size_t h = 1; h < m; h++) {
        std::complex<double> c = 0;
        for (size_t k = 0; k < m; k++) {
            c += v[k] * std::polar(1.0, -2 * constants::pi * double(h * k) / double(m));
        }
        double p = std::norm(c);
        total += p;
        if (h == 1 || h == m - 1) {
            fundamental += p;
        }
    }
    CHECK(fundamental / total > 0.9);
}

TEST_CASE("apply_variations targets") {
    auto s = baseline();
    auto g = grid(1);
    auto base = synthesize(s, std::nullopt, 6, g);

    SUBCASE("zero variation changes nothing") {
        auto z = synthesize(s, VariationSpec{}, 6, g);
        for (int i = 1; i <= 6; i++) {
            auto a = base.series(i);
            auto b = z.series(i);
            CHECK(std::equal(a.begin(), a.end(), b.begin()));
        }
    }
    SUBCASE("level error shifts one plateau before filtering") {
        VariationSpec v;
        v.channel_level_errors_mv = {0.0, 0.0, 10.0};
        auto p = apply_variations(s, v);
        CHECK(rect_wave(p, 9.0) == -190.0);
        CHECK(rect_wave(p, 1.0) == 100.0);
        CHECK(rect_wave(p, 27.0) == 200.0);
    }
    SUBCASE("edge skew stays local to its edge") {
        VariationSpec v;
        v.edge_skews = {{1, 1, 0.3}};
        auto sk = synthesize(s, v, 6, g);
        // Phase 1 edge 1 sits at 6 ns in its own frame, shifted by 2/3 t0 for the gate.
        double t_edge = std::fmod(6.0 - 20.0 + 30.0, 30.0);
        double peak = 0;
        for (int i : {2, 5}) {
            auto a = base.series(i);
            auto b = sk.series(i);
            for (size_t k = 0; k < a.size(); k++) {
                peak = std::max(peak, std::abs(a[k] - b[k]));
            }
        }
        CHECK(peak > 1.0);
        for (int i = 1; i <= 6; i++) {
            auto a = base.series(i);
            auto b = sk.series(i);
            for (size_t k = 0; k < a.size(); k++) {
                double diff = std::abs(a[k] - b[k]);
                if (i % 3 != 2) {
                    CHECK(diff == 0.0);
                    continue;
                }
                if (diff > 0.01 * peak) {
                    double since = std::fmod(g.time(k) - t_edge + 30.0, 30.0);
                    CHECK(since <= 0.3 + 5 * s.tau_ns + 1e-9);
                }
            }
        }
    }
    SUBCASE("gain touches only its gate") {
        VariationSpec v;
        v.gate_gain_errors = {{4, 0.05}};
        auto gd = synthesize(s, v, 6, g);
        for (int i = 1; i <= 6; i++) {
            auto a = base.series(i);
            auto b = gd.series(i);
            for (size_t k = 0; k < a.size(); k += 37) {
                CHECK(b[k] == doctest::Approx(i == 4 ? 1.05 * a[k] : a[k]).epsilon(1e-14));
            }
        }
    }
    SUBCASE("tau spread touches only its gate") {
        VariationSpec v;
        v.tau_spread = {{3, 0.2}};
        auto td = synthesize(s, v, 6, g);
        for (int i = 1; i <= 6; i++) {
            auto a = base.series(i);
            auto b = td.series(i);
            bool same = std::equal(a.begin(), a.end(), b.begin());
            CHECK(same == (i != 3));
        }
    }
    SUBCASE("a skew that closes a segment is rejected") {
        VariationSpec v;
        v.edge_skews = {{0, 1, 13.0}};
        CHECK_THROWS_AS(apply_variations(s, v), std::invalid_argument);
    }
}

TEST_CASE("synthesize composition") {
    auto g = grid(1);
    SUBCASE("analog ignores variations") {
        AnalogDriveSpec a;
        VariationSpec v;
        v.channel_level_errors_mv = {5, 5, 5};
        auto x = synthesize(a, std::nullopt, 4, g);
        auto y = synthesize(a, v, 4, g);
        for (int i = 1; i <= 4; i++) {
            auto p = x.series(i);
            auto q = y.series(i);
            CHECK(std::equal(p.begin(), p.end(), q.begin()));
        }
    }
    SUBCASE("digital equals filtered phase-shifted rectangle") {
        auto s = baseline();
        auto d = synthesize(s, std::nullopt, 5, g);
        for (int i = 1; i <= 5; i++) {
            UniformSeries in{0.0, g.dt_ns, std::vector<double>(600)};
            for (size_t k = 0; k < 600; k++) {
                in.values[k] = phase_shifted_rect(s, i, g.time(k) + 0.5 * g.dt_ns);
            }
            auto out = lpf_filter(in, s.tau_ns);
            auto got = d.series(i);
            for (size_t k = 0; k < 600; k++) {
                CHECK(got[k] == out.values[k]);
            }
        }
    }
}

TEST_CASE("drive invariants") {
    auto s = baseline();
    auto g = grid(3);
    auto d = synthesize(s, std::nullopt, 9, g);
    for (int i = 1; i <= 9; i++) {
        auto v = d.series(i);
        for (size_t k = 0; k + 600 < v.size(); k++) {
            CHECK(std::abs(v[k + 600] - v[k]) <= 1e-9 * 200.0);
        }
        for (double x : v) {
            CHECK(x <= 200.0);
            CHECK(x >= -200.0);
        }
        if (i + 3 <= 9) {
            auto w = d.series(i + 3);
            CHECK(std::equal(v.begin(), v.end(), w.begin()));
        }
    }

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    UniformSeries x{0.0, 0.05, std::vector<double>(600)};
    UniformSeries y = x;
    UniformSeries mix = x;
    for (size_t k = 0; k < 600; k++) {
        x.values[k] = 100 * u(rng);
        y.values[k] = 100 * u(rng);
        mix.values[k] = 2.5 * x.values[k] - 0.75 * y.values[k];
    }
    auto fx = lpf_filter(x, 3.0);
    auto fy = lpf_filter(y, 3.0);
    auto fm = lpf_filter(mix, 3.0);
    for (size_t k = 0; k < 600; k++) {
        double ref = 2.5 * fx.values[k] - 0.75 * fy.values[k];
        CHECK(std::abs(fm.values[k] - ref) <= 1e-10 * 250.0);
    }

    auto s2 = s;
    s2.tau_ns *= 1 + 1e-6;
    auto d2 = synthesize(s2, std::nullopt, 3, g);
    double worst = 0;
    for (int i = 1; i <= 3; i++) {
        auto a = d.series(i);
        auto b = d2.series(i);
        for (size_t k = 0; k < a.size(); k++) {
            worst = std::max(worst, std::abs(a[k] - b[k]));
        }
    }
    CHECK(worst > 0);
    CHECK(worst <= 10 * 1e-6 * 200.0);
}

TEST_CASE("grid must divide the switching period") {
    TimeGrid g{0.0, 0.07, 100};
    CHECK_THROWS_AS(synthesize(baseline(), std::nullopt, 3, g), std::invalid_argument);
}
