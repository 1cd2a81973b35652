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

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "doctest.h"

using namespace shuttle;

namespace {

double quadrature(double x, double y, double xl, double xr, double wy, double h) {
    using boost::math::quadrature::gauss_kronrod;
    auto inner = [&](double X) {
        auto f = [&](double Y) { return 1.0 / std::sqrt((x - X) * (x - X) + (y - Y) * (y - Y) + h * h); };
        return gauss_kronrod<double, 61>::integrate(f, -wy / 2, wy / 2, 15, 1e-13);
    };
    return gauss_kronrod<double, 61>::integrate(inner, xl, xr, 15, 1e-13);
}

GateStack stack(int n_gates = 24) {
    GateStack s;
    s.n_gates = n_gates;
    return s;
}

std::vector<double> three_phase(int n_gates, int offset) {
    std::vector<double> v(n_gates);
    for (int i = 0; i < n_gates; i++) {
        v[i] = 200.0 * std::cos(2 * constants::pi * (i - offset) / 3.0);
    }
    return v;
}

Trajectory baseline_trace(const DriveSpec &d, int periods = 3) {
    GateStack s = stack(gates_for_periods(3, periods));
    auto g = TimeGrid::over_periods(30.0, periods, 600);
    auto drive = synthesize(d, std::nullopt, s.n_gates, g);
    return trace(s, drive, g.t_start_ns, g.t_end_ns(), g.n_samples);
}

}  // namespace

TEST_CASE("rect_integral against adaptive quadrature") {
    const double xl = -15, xr = 15, wy = 30, h = 10;
    for (int i = 0; i < 5; i++) {
        for (int j = 0; j < 5; j++) {
            double x = -40 + 20 * i;
            double y = -25 + 12.5 * j;
            double ref = quadrature(x, y, xl, xr, wy, h);
            double got = rect_integral(x, y, xl, xr, wy, h);
            CHECK(std::abs(got - ref) / ref <= 1e-6);
        }
    }
}

TEST_CASE("rect_integral symmetry and far field") {
    for (double x : {-20.0, 3.0, 17.0}) {
        for (double y : {0.5, 7.0, 40.0}) {
            CHECK(rect_integral(x, y, -15, 15, 30, 10) == doctest::Approx(rect_integral(x, -y, -15, 15, 30, 10)));
        }
    }
    double d = 50 * 30.0;
    double far = rect_integral(d, 0, -15, 15, 30, 10);
    CHECK(std::abs(far - 30.0 * 30.0 / d) <= 0.01 * 30.0 * 30.0 / d);
}

TEST_CASE("analytic derivatives agree with differences of the closed form") {
    const double e = 1e-3;
    for (double x : {-22.0, -4.0, 9.0, 31.0}) {
        auto dv = rect_integral_derivs(x, 0.0, -15, 15, 30, 10);
        auto f = [&](double xx, double yy) { return rect_integral(xx, yy, -15, 15, 30, 10); };
        CHECK(dv.value == doctest::Approx(f(x, 0)).epsilon(1e-14));
        CHECK(dv.d_dx == doctest::Approx((f(x + e, 0) - f(x - e, 0)) / (2 * e)).epsilon(1e-6));
        CHECK(dv.d2_dx2 == doctest::Approx((f(x + e, 0) - 2 * f(x, 0) + f(x - e, 0)) / (e * e)).epsilon(1e-4));
        CHECK(dv.d2_dy2 == doctest::Approx((f(x, e) - 2 * f(x, 0) + f(x, -e)) / (e * e)).epsilon(1e-4));
    }
}

TEST_CASE("potential is linear in the gate voltages") {
    GateStack s = stack(12);
    std::vector<double> zero(12, 0.0);
    PotentialSlice z(s, zero);
    CHECK(z.energy(40.0, 3.0) == 0.0);

    std::vector<double> a = three_phase(12, 0);
    std::vector<double> b(12);
    std::vector<double> sum(12), twice(12);
    for (int i = 0; i < 12; i++) {
        b[i] = 37.0 * std::sin(1.3 * i);
        sum[i] = a[i] + b[i];
        twice[i] = 2 * a[i];
    }
    PotentialSlice pa(s, a), pb(s, b), ps(s, sum), p2(s, twice);
    for (double x = -20; x < 360; x += 17.3) {
        for (double y : {0.0, 6.0}) {
            double ua = pa.energy(x, y);
            CHECK(std::abs(p2.energy(x, y) - 2 * ua) <= 1e-12 * std::abs(2 * ua));
            double ref = ua + pb.energy(x, y);
            CHECK(std::abs(ps.energy(x, y) - ref) <= 1e-12 * (std::abs(ua) + std::abs(pb.energy(x, y))));
            CHECK(pa.energy(x, y) == doctest::Approx(pa.energy(x, -y)).epsilon(1e-14));
        }
    }
}

TEST_CASE("single positive gate pulls the minimum to its center") {
    GateStack s = stack(9);
    std::vector<double> v(9, 0.0);
    v[4] = 200.0;
    PotentialSlice p(s, v);
    double best_x = 0, best = 1e300;
    for (double x = 0; x <= s.gate_center_nm(9); x += 0.01) {
        double u = p.energy(x, 0);
        if (u < best) {
            best = u;
            best_x = x;
        }
    }
    CHECK(std::abs(best_x - s.gate_center_nm(5)) <= 0.01);
    CHECK(best < 0);
    CHECK(track_minimum(p, s.gate_center_nm(5) + 8.0, s.pitch_nm()) ==
          doctest::Approx(s.gate_center_nm(5)).epsilon(1e-6));
}

TEST_CASE("symmetric three-phase instant centers the dot") {
    GateStack s = stack(24);
    auto v = three_phase(24, 10);
    PotentialSlice p(s, v);
    double center = s.gate_center_nm(11);
    double x = track_minimum(p, center + 9.0, s.pitch_nm());
    CHECK(std::abs(x - center) <= 1e-2);
}

TEST_CASE("flat potential loses the dot") {
    GateStack s = stack(12);
    std::vector<double> v(12, 0.0);
    PotentialSlice p(s, v);
    CHECK_THROWS_AS(track_minimum(p, 150.0, s.pitch_nm()), DotLostError);
    std::vector<double> w(12, 0.0);
    w[5] = -200.0;
    PotentialSlice q(s, w);
    CHECK_THROWS_AS(curvature(q, s.gate_center_nm(6), s, CurvatureMethod::Analytic), MergeEventError);
}

TEST_CASE("curvature routes agree") {
    GateStack s = stack(24);
    for (int off : {9, 10}) {
        auto v = three_phase(24, off);
        PotentialSlice p(s, v);
        double x = track_minimum(p, s.gate_center_nm(off + 1) + 5.0, s.pitch_nm());
        DotState a = curvature(p, x, s, CurvatureMethod::Analytic);
        DotState f = curvature(p, x, s, CurvatureMethod::FiniteDifference);
        CHECK(std::abs(f.omega_x_per_ns - a.omega_x_per_ns) <= 1e-6 * a.omega_x_per_ns);
        CHECK(std::abs(f.omega_y_per_ns - a.omega_y_per_ns) <= 1e-6 * a.omega_y_per_ns);
        double m = s.mass_x_me * constants::electron_mass;
        CHECK(std::abs(a.a_x_nm * a.a_x_nm * m * a.omega_x_per_ns / constants::hbar_ev_ns - 1) <= 1e-12);
    }
}

TEST_CASE("larger V0 gives a smaller dot") {
    GateStack s = stack(24);
    auto v200 = three_phase(24, 10);
    auto v300 = v200;
    for (double &x : v300) {
        x *= 1.5;
    }
    PotentialSlice p2(s, v200), p3(s, v300);
    double c = s.gate_center_nm(11);
    DotState a = curvature(p2, track_minimum(p2, c, s.pitch_nm()), s, CurvatureMethod::Analytic);
    DotState b = curvature(p3, track_minimum(p3, c, s.pitch_nm()), s, CurvatureMethod::Analytic);
    CHECK(b.a_x_nm < a.a_x_nm);
}

TEST_CASE("shifting phases by one gate shifts the potential by one pitch") {
    // End effects fall off slowly, so the array is long and only its middle is compared.
    GateStack s = stack(120);
    PotentialSlice p(s, three_phase(120, 0));
    PotentialSlice q(s, three_phase(120, 1));
    double lo = 1e300, hi = -1e300, worst = 0;
    for (double x = s.gate_center_nm(58); x <= s.gate_center_nm(64); x += 0.5) {
        double u = p.energy(x, 0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        worst = std::max(worst, std::abs(q.energy(x + s.pitch_nm(), 0) - u));
    }
    CHECK(worst < 1e-3 * (hi - lo));
}

TEST_CASE("digital conveyor kinematics") {
    Trajectory t = baseline_trace(DigitalDriveSpec::standard(200, 30, 3, 0.1));
    const auto &s = t.samples;
    const double pitch = 31.0;
    double mean_v = (s.back().x_nm - s.front().x_nm) / (s.back().t_ns - s.front().t_ns);
    CHECK(std::abs(mean_v - 3 * pitch / 30.0) <= 0.01 * 3 * pitch / 30.0);
    double vmax = 0;
    for (double v : t.v_s) {
        vmax = std::max(vmax, std::abs(v));
    }
    for (size_t k = 0; k < s.size(); k++) {
        CHECK(s[k].y_nm == 0.0);
        CHECK(std::isfinite(s[k].a_x_nm));
        CHECK(s[k].a_x_nm > 0);
        if (k + 1 < s.size()) {
            CHECK(std::abs(s[k + 1].x_nm - s[k].x_nm) < 2 * vmax * (s[k + 1].t_ns - s[k].t_ns));
        }
        if (k + 200 < s.size()) {
            CHECK(std::abs(s[k + 200].x_nm - s[k].x_nm - pitch) <= 0.01 * pitch);
            CHECK(std::abs(s[k + 200].a_x_nm - s[k].a_x_nm) <= 0.01 * s[k].a_x_nm);
        }
    }
}

TEST_CASE("phase modulation evens out the analog velocity") {
    auto spread = [](const Trajectory &t) {
        double m = 0, q = 0;
        for (double v : t.v_s) {
            m += v;
        }
        m /= t.v_s.size();
        for (double v : t.v_s) {
            q += (v - m) * (v - m);
        }
        return std::sqrt(q / t.v_s.size()) / std::abs(m);
    };
    AnalogDriveSpec on;
    AnalogDriveSpec off;
    off.phase_mod_enabled = false;
    Trajectory a = baseline_trace(on, 1);
    Trajectory b = baseline_trace(off, 1);
    CHECK(spread(a) < spread(b));
    double mean_v = (a.samples.back().x_nm - a.samples.front().x_nm) / 30.0;
    CHECK(std::abs(std::abs(mean_v) - 3 * 31.0 / 30.0) <= 0.01 * 3 * 31.0 / 30.0);
}
