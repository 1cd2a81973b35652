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

#include "shuttle/config.h"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

using namespace shuttle;
using nlohmann::json;

std::string_view shuttle::to_string(Method m) {
    return m == Method::Analog ? "analog" : "digital";
}

std::string_view shuttle::to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::V0:
            return "v0_mv";
        case SweepAxis::Frequency:
            return "f_mhz";
        case SweepAxis::TauOverT0:
            return "tau_over_t0";
    }
    return "";
}

namespace {

std::string join(const std::string &path, const std::string &key) {
    return path.empty() ? key : path + "." + key;
}

// Typed access to one JSON object. Every key must be consumed before finish().
class Section {
   public:
    Section(const json &j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        }
    }

    bool has(const std::string &key) const {
        return j_.contains(key) && !j_.at(key).is_null();
    }

    template <typename T>
    T get(const std::string &key, const T &fallback) {
        used_.insert(key);
        return has(key) ? convert<T>(key) : fallback;
    }

    template <typename T>
    std::optional<T> maybe(const std::string &key) {
        used_.insert(key);
        if (!has(key)) {
            return std::nullopt;
        }
        return convert<T>(key);
    }

    template <typename T>
    T require(const std::string &key) {
        used_.insert(key);
        if (!has(key)) {
            throw ConfigError(join(path_, key), "required field missing");
        }
        return convert<T>(key);
    }

    /// Sub-object; absent keys yield an empty object.
    Section child(const std::string &key) {
        used_.insert(key);
        static const json empty = json::object();
        return Section(has(key) ? j_.at(key) : empty, join(path_, key));
    }

    const json &raw(const std::string &key) {
        used_.insert(key);
        return j_.at(key);
    }

    std::string path(const std::string &key) const {
        return join(path_, key);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!used_.count(it.key())) {
                throw ConfigError(join(path_, it.key()), "unknown key");
            }
        }
    }

   private:
    template <typename T>
    T convert(const std::string &key) const {
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception &e) {
            throw ConfigError(join(path_, key), std::string("wrong type (") + e.what() + ")");
        }
    }

    const json &j_;
    std::string path_;
    std::set<std::string> used_;
};

Method parse_method(const std::string &s, const std::string &path) {
    if (s == "analog") {
        return Method::Analog;
    }
    if (s == "digital") {
        return Method::Digital;
    }
    throw ConfigError(path, "expected \"analog\" or \"digital\", got \"" + s + "\"");
}

int parse_channel(const std::string &s, const std::string &path) {
    if (s == "high") {
        return kChannelHigh;
    }
    if (s == "mid") {
        return kChannelMid;
    }
    if (s == "low") {
        return kChannelLow;
    }
    throw ConfigError(path, "expected \"high\", \"mid\" or \"low\", got \"" + s + "\"");
}

std::string channel_name(int c) {
    return c == kChannelHigh ? "high" : c == kChannelMid ? "mid" : "low";
}

template <typename F>
void wrap(const std::string &path, F &&f) {
    try {
        f();
    } catch (const ConfigError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw ConfigError(path, e.what());
    }
}

void parse_stack(Section s, ExperimentConfig &c) {
    GateStack &g = c.stack;
    g.wx_nm = s.get("wx_nm", g.wx_nm);
    g.wy_nm = s.get("wy_nm", g.wy_nm);
    g.gap_nm = s.get("gap_nm", g.gap_nm);
    g.height_nm = s.get("height_nm", g.height_nm);
    if (auto n = s.maybe<int>("n_gates")) {
        g.n_gates = *n;
        c.n_gates_explicit = true;
    }
    c.guard_gates = s.get("guard_gates", c.guard_gates);
    g.c_gate_af = s.get("c_gate_af", g.c_gate_af);
    g.c_gate_override_af = s.get("c_gate_override_af", g.c_gate_override_af);
    g.mass_x_me = s.get("mass_x_me", g.mass_x_me);
    g.mass_y_me = s.get("mass_y_me", g.mass_y_me);
    s.finish();
    if (c.guard_gates < 1) {
        throw ConfigError(s.path("guard_gates"), "must be >= 1");
    }
}

void parse_analog(Section &s, ExperimentConfig &c) {
    AnalogDriveSpec a;
    a.v0_mv = s.get("v0_mv", a.v0_mv);
    a.f_mhz = s.get("f_mhz", a.f_mhz);
    a.n_phases = s.get("n_phases", a.n_phases);
    a.phase_mod_amp_rad = s.get("phase_mod_amp_rad", a.phase_mod_amp_rad);
    a.phase_mod_enabled = s.get("phase_mod_enabled", a.phase_mod_enabled);
    s.finish();
    wrap("drive", [&] { a.validate(); });
    c.drive = a;
}

void parse_digital(Section &s, ExperimentConfig &c) {
    double v0 = s.get("v0_mv", 200.0);
    double t0 = s.get("t0_ns", 30.0);
    int n = s.get("n_phases", 3);
    auto tau_ns = s.maybe<double>("tau_ns");
    auto ratio = s.maybe<double>("tau_over_t0");
    if (tau_ns && ratio) {
        throw ConfigError(s.path("tau_ns"), "give either tau_ns or tau_over_t0, not both");
    }
    if (!tau_ns && !ratio) {
        ratio = 0.1;
    }
    if (ratio && !(*ratio >= 0)) {
        throw ConfigError(s.path("tau_over_t0"), "must be >= 0");
    }
    DigitalDriveSpec d;
    wrap("drive", [&] { d = DigitalDriveSpec::standard(v0, t0, n, ratio.value_or(0.0)); });
    if (tau_ns) {
        d.tau_ns = *tau_ns;
    }
    c.tau_over_t0 = ratio;
    if (auto seg = s.maybe<std::vector<double>>("segments_ns")) {
        if (seg->size() != 4) {
            throw ConfigError(s.path("segments_ns"), "expected 4 durations");
        }
        std::copy(seg->begin(), seg->end(), d.segments_ns.begin());
        double sum = d.segments_ns[0] + d.segments_ns[1] + d.segments_ns[2] + d.segments_ns[3];
        if (std::abs(sum - t0) > 1e-9 * t0) {
            std::ostringstream msg;
            msg << "segment durations must sum to t0_ns (" << sum << " != " << t0 << ")";
            throw ConfigError(s.path("segments_ns"), msg.str());
        }
    }
    if (auto lv = s.maybe<std::vector<double>>("dc_levels_mv")) {
        if (lv->size() != 3) {
            throw ConfigError(s.path("dc_levels_mv"), "expected 3 levels (high, mid, low)");
        }
        std::copy(lv->begin(), lv->end(), d.dc_levels_mv.begin());
    }
    if (auto ch = s.maybe<std::vector<std::string>>("segment_channels")) {
        if (ch->size() != 4) {
            throw ConfigError(s.path("segment_channels"), "expected 4 channel names");
        }
        for (size_t k = 0; k < 4; k++) {
            d.segment_channels[k] = parse_channel((*ch)[k], s.path("segment_channels"));
        }
    }
    d.per_gate_offsets_mv = s.get("per_gate_offsets_mv", d.per_gate_offsets_mv);
    s.finish();
    wrap("drive", [&] { d.validate(); });
    c.drive = d;
}

void parse_valley(Section s, ExperimentConfig &c) {
    std::string kind = s.get<std::string>("kind", "tilted");
    double theta_deg = s.get("theta_deg", 0.3);
    if (!(theta_deg >= 0)) {
        throw ConfigError(s.path("theta_deg"), "must be >= 0");
    }
    double theta = constants::deg_to_rad(theta_deg);
    c.tilted.theta_rad = theta;
    c.roughness.theta_rad = theta;
    if (kind == "tilted") {
        c.valley_kind = ValleyModelKind::Tilted;
        c.tilted.ev0_uev = s.get("ev0_uev", c.tilted.ev0_uev);
        c.tilted.arg_delta0_rad = s.get("arg_delta0_rad", c.tilted.arg_delta0_rad);
        s.finish();
        wrap(s.path("ev0_uev"), [&] { c.tilted.validate(); });
    } else if (kind == "roughness") {
        c.valley_kind = ValleyModelKind::Roughness;
        RoughnessModel &r = c.roughness;
        r.x_well = s.get("x_well", r.x_well);
        r.x_barrier = s.get("x_barrier", r.x_barrier);
        r.delta_ec_mev = s.get("delta_ec_mev", r.delta_ec_mev);
        r.e_z_mv_per_nm = s.get("e_z_mv_per_nm", r.e_z_mv_per_nm);
        r.tau_int_nm = s.get("tau_int_ml", r.tau_int_nm / constants::monolayer_nm) * constants::monolayer_nm;
        r.well_width_ml = s.get("well_width_ml", r.well_width_ml);
        r.m_z_me = s.get("m_z_me", r.m_z_me);
        r.psi_follows_interface = s.get("psi_follows_interface", r.psi_follows_interface);
        s.finish();
        wrap("valley_model", [&] { r.validate(); });
    } else {
        throw ConfigError(s.path("kind"), "expected \"tilted\" or \"roughness\", got \"" + kind + "\"");
    }
}

VariationSpec parse_variation(Section s) {
    VariationSpec v;
    if (s.has("edge_skews")) {
        const json &arr = s.raw("edge_skews");
        if (!arr.is_array()) {
            throw ConfigError(s.path("edge_skews"), "expected an array");
        }
        for (size_t k = 0; k < arr.size(); k++) {
            Section e(arr[k], s.path("edge_skews") + "[" + std::to_string(k) + "]");
            EdgeSkew sk;
            sk.phase = e.require<int>("phase");
            sk.edge = e.require<int>("edge");
            sk.offset_ns = e.require<double>("offset_ns");
            e.finish();
            v.edge_skews.push_back(sk);
        }
    } else {
        s.maybe<json>("edge_skews");
    }
    for (const char *key : {"gate_gain_errors", "tau_spread"}) {
        auto &dst = std::string(key) == "tau_spread" ? v.tau_spread : v.gate_gain_errors;
        if (!s.has(key)) {
            s.maybe<json>(key);
            continue;
        }
        const json &arr = s.raw(key);
        if (!arr.is_array()) {
            throw ConfigError(s.path(key), "expected an array");
        }
        for (size_t k = 0; k < arr.size(); k++) {
            Section e(arr[k], s.path(key) + "[" + std::to_string(k) + "]");
            GateFactor g;
            g.gate = e.require<int>("gate");
            g.value = e.require<double>("value");
            e.finish();
            dst.push_back(g);
        }
    }
    if (auto lv = s.maybe<std::vector<double>>("channel_level_errors_mv")) {
        if (lv->size() != 3) {
            throw ConfigError(s.path("channel_level_errors_mv"), "expected 3 values (high, mid, low)");
        }
        std::copy(lv->begin(), lv->end(), v.channel_level_errors_mv.begin());
    }
    s.finish();
    return v;
}

json variation_json(const VariationSpec &v) {
    json j = json::object();
    j["edge_skews"] = json::array();
    for (const auto &s : v.edge_skews) {
        j["edge_skews"].push_back({{"phase", s.phase}, {"edge", s.edge}, {"offset_ns", s.offset_ns}});
    }
    j["gate_gain_errors"] = json::array();
    for (const auto &g : v.gate_gain_errors) {
        j["gate_gain_errors"].push_back({{"gate", g.gate}, {"value", g.value}});
    }
    j["tau_spread"] = json::array();
    for (const auto &g : v.tau_spread) {
        j["tau_spread"].push_back({{"gate", g.gate}, {"value", g.value}});
    }
    j["channel_level_errors_mv"] = v.channel_level_errors_mv;
    return j;
}

SweepAxis parse_axis(const std::string &s, const std::string &path) {
    if (s == "v0_mv") {
        return SweepAxis::V0;
    }
    if (s == "f_mhz") {
        return SweepAxis::Frequency;
    }
    if (s == "tau_over_t0") {
        return SweepAxis::TauOverT0;
    }
    throw ConfigError(path, "expected \"v0_mv\", \"f_mhz\" or \"tau_over_t0\", got \"" + s + "\"");
}

}  // namespace

ExperimentConfig shuttle::parse_config(const json &j) {
    ExperimentConfig c;
    Section root(j, "");
    c.method = parse_method(root.require<std::string>("method"), "method");

    parse_stack(root.child("stack"), c);

    {
        Section d = root.child("drive");
        if (auto kind = d.maybe<std::string>("kind")) {
            if (parse_method(*kind, d.path("kind")) != c.method) {
                throw ConfigError(d.path("kind"), "drive kind does not match method");
            }
        }
        if (c.method == Method::Analog) {
            c.tau_over_t0 = 0.1;
            parse_analog(d, c);
        } else {
            parse_digital(d, c);
        }
    }

    parse_valley(root.child("valley_model"), c);

    if (root.has("variation")) {
        c.variation = parse_variation(root.child("variation"));
    } else {
        root.maybe<json>("variation");
    }

    {
        Section s = root.child("simulation");
        c.periods = s.get("periods", c.periods);
        c.points_per_period = s.get("points_per_period", c.points_per_period);
        c.valley_dt_ns = s.maybe<double>("valley_dt_ns");
        s.finish();
        if (c.periods < 1) {
            throw ConfigError("simulation.periods", "must be >= 1");
        }
        if (c.points_per_period < 4) {
            throw ConfigError("simulation.points_per_period", "must be >= 4");
        }
        if (c.valley_dt_ns && !(*c.valley_dt_ns > 0)) {
            throw ConfigError("simulation.valley_dt_ns", "must be > 0");
        }
    }
    {
        Section s = root.child("seeds");
        c.master_seed = s.get<uint64_t>("master", c.master_seed);
        c.realizations = s.get<size_t>("realizations", c.realizations);
        s.finish();
        if (c.realizations < 1) {
            throw ConfigError("seeds.realizations", "must be >= 1");
        }
    }
    {
        Section s = root.child("execution");
        c.workers = s.get("workers", c.workers);
        s.finish();
        if (c.workers < 1) {
            throw ConfigError("execution.workers", "must be >= 1");
        }
    }
    {
        Section s = root.child("output");
        c.write_svg = s.get("svg", c.write_svg);
        c.write_traces = s.get("traces", c.write_traces);
        s.finish();
    }
    if (root.has("sweep")) {
        Section s = root.child("sweep");
        SweepConfig sw;
        sw.axis = parse_axis(s.require<std::string>("axis"), s.path("axis"));
        sw.values = s.require<std::vector<double>>("values");
        if (sw.values.empty()) {
            throw ConfigError(s.path("values"), "must not be empty");
        }
        bool up = true;
        bool down = true;
        for (size_t k = 1; k < sw.values.size(); k++) {
            up = up && sw.values[k] > sw.values[k - 1];
            down = down && sw.values[k] < sw.values[k - 1];
        }
        if (!up && !down) {
            throw ConfigError(s.path("values"), "must be strictly monotone");
        }
        if (auto ms = s.maybe<std::vector<std::string>>("methods")) {
            if (ms->empty()) {
                throw ConfigError(s.path("methods"), "must not be empty");
            }
            sw.methods.clear();
            for (const auto &m : *ms) {
                sw.methods.push_back(parse_method(m, s.path("methods")));
            }
        }
        s.finish();
        c.sweep = sw;
    } else {
        root.maybe<json>("sweep");
    }
    {
        Section s = root.child("variations");
        c.variations.flag_ratio = s.get("flag_ratio", c.variations.flag_ratio);
        c.variations.extreme_gain_error = s.get("extreme_gain_error", c.variations.extreme_gain_error);
        if (s.has("entries")) {
            const json &arr = s.raw("entries");
            if (!arr.is_array()) {
                throw ConfigError(s.path("entries"), "expected an array");
            }
            for (size_t k = 0; k < arr.size(); k++) {
                std::string p = s.path("entries") + "[" + std::to_string(k) + "]";
                Section e(arr[k], p);
                NamedVariation nv;
                nv.name = e.require<std::string>("name");
                if (!e.has("variation")) {
                    throw ConfigError(p + ".variation", "required field missing");
                }
                nv.variation = parse_variation(e.child("variation"));
                e.finish();
                c.variations.entries.push_back(std::move(nv));
            }
        } else {
            s.maybe<json>("entries");
        }
        s.finish();
        if (!(c.variations.flag_ratio > 1)) {
            throw ConfigError("variations.flag_ratio", "must be > 1");
        }
        if (!(c.variations.extreme_gain_error > -1)) {
            throw ConfigError("variations.extreme_gain_error", "must be > -1");
        }
    }
    {
        Section s = root.child("power");
        PowerConfig &p = c.power;
        p.n_qubits = s.get("n_qubit", p.n_qubits);
        p.v0s_mv = s.get("v0_mv", p.v0s_mv);
        p.shared = s.get("shared", p.shared);
        p.params.n_phases = s.get("n_phases", p.params.n_phases);
        p.params.n_dc = s.get("n_dc", p.params.n_dc);
        p.params.n_gate = s.get("n_gate", p.params.n_gate);
        p.params.c_sc_ff = s.get("c_sc_ff", p.params.c_sc_ff);
        p.params.c_gate_ff = s.get("c_gate_ff", p.params.c_gate_ff);
        p.params.c_sl_ff = s.get("c_sl_ff", p.params.c_sl_ff);
        p.params.f_mhz = s.get("f_mhz", p.params.f_mhz);
        p.params.n_unit = s.get("n_unit", p.params.n_unit);
        s.finish();
        if (p.n_qubits.empty() || p.v0s_mv.empty() || p.shared.empty()) {
            throw ConfigError("power", "n_qubit, v0_mv and shared must be non-empty");
        }
        for (int64_t n : p.n_qubits) {
            if (n < 1) {
                throw ConfigError("power.n_qubit", "every count must be >= 1");
            }
        }
        wrap("power", [&] {
            PowerParams probe = p.params;
            for (double v : p.v0s_mv) {
                probe.v0_mv = v;
                probe.validate();
            }
        });
    }
    root.finish();
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    wrap("stack", [&] { resolved_stack().validate(); });
    int n = n_phases();
    GateStack s = resolved_stack();
    if (s.n_gates < n * (periods + 1) + 2 * guard_gates) {
        throw ConfigError(
            "stack.n_gates", "too few gates to carry the dot over " + std::to_string(periods) + " periods (need " +
                                 std::to_string(n * (periods + 1) + 2 * guard_gates) + ")");
    }
    if (!s.c_gate_override_af.empty() && static_cast<int>(s.c_gate_override_af.size()) != s.n_gates) {
        throw ConfigError("stack.c_gate_override_af", "needs one entry per gate");
    }
    if (const auto *d = std::get_if<DigitalDriveSpec>(&drive)) {
        if (static_cast<int>(d->per_gate_offsets_mv.size()) > s.n_gates) {
            throw ConfigError("drive.per_gate_offsets_mv", "more offsets than gates");
        }
        if (variation) {
            wrap("variation", [&] { apply_variations(*d, *variation); });
        }
    }
    for (const auto &e : variations.entries) {
        if (const auto *d = std::get_if<DigitalDriveSpec>(&drive)) {
            wrap("variations.entries." + e.name, [&] { apply_variations(*d, e.variation); });
        }
    }
}

double ExperimentConfig::period_ns() const {
    return drive_period_ns(drive);
}

int ExperimentConfig::n_phases() const {
    return drive_phase_count(drive);
}

GateStack ExperimentConfig::resolved_stack() const {
    GateStack s = stack;
    if (!n_gates_explicit) {
        s.n_gates = gates_for_periods(n_phases(), periods, guard_gates);
    }
    return s;
}

ExperimentConfig ExperimentConfig::with_method(Method m) const {
    ExperimentConfig c = *this;
    if (m == method) {
        return c;
    }
    c.method = m;
    if (m == Method::Analog) {
        const auto &d = std::get<DigitalDriveSpec>(drive);
        AnalogDriveSpec a;
        a.v0_mv = d.v0_mv;
        a.f_mhz = 1000.0 / d.t0_ns;
        a.n_phases = d.n_phases;
        c.drive = a;
    } else {
        const auto &a = std::get<AnalogDriveSpec>(drive);
        double ratio = tau_over_t0.value_or(0.1);
        c.drive = DigitalDriveSpec::standard(a.v0_mv, a.period_ns(), a.n_phases, ratio);
        c.tau_over_t0 = ratio;
    }
    return c;
}

ExperimentConfig shuttle::load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        return parse_config(json::object());
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error &e) {
        throw std::runtime_error("cannot parse " + path.string() + ": " + e.what());
    }
    return parse_config(j);
}

json shuttle::to_json(const ExperimentConfig &c) {
    json j;
    j["method"] = to_string(c.method);
    const GateStack &g = c.stack;
    j["stack"] = {{"wx_nm", g.wx_nm},         {"wy_nm", g.wy_nm},           {"gap_nm", g.gap_nm},
                  {"height_nm", g.height_nm}, {"guard_gates", c.guard_gates}, {"c_gate_af", g.c_gate_af},
                  {"mass_x_me", g.mass_x_me}, {"mass_y_me", g.mass_y_me}};
    if (c.n_gates_explicit) {
        j["stack"]["n_gates"] = g.n_gates;
    }
    if (!g.c_gate_override_af.empty()) {
        j["stack"]["c_gate_override_af"] = g.c_gate_override_af;
    }
    if (const auto *a = std::get_if<AnalogDriveSpec>(&c.drive)) {
        j["drive"] = {{"kind", "analog"},
                      {"v0_mv", a->v0_mv},
                      {"f_mhz", a->f_mhz},
                      {"n_phases", a->n_phases},
                      {"phase_mod_amp_rad", a->phase_mod_amp_rad},
                      {"phase_mod_enabled", a->phase_mod_enabled}};
    } else {
        const auto &d = std::get<DigitalDriveSpec>(c.drive);
        json chans = json::array();
        for (int ch : d.segment_channels) {
            chans.push_back(channel_name(ch));
        }
        j["drive"] = {{"kind", "digital"},
                      {"v0_mv", d.v0_mv},
                      {"t0_ns", d.t0_ns},
                      {"n_phases", d.n_phases},
                      {"segments_ns", d.segments_ns},
                      {"dc_levels_mv", d.dc_levels_mv},
                      {"segment_channels", chans},
                      {"per_gate_offsets_mv", d.per_gate_offsets_mv}};
        if (c.tau_over_t0) {
            j["drive"]["tau_over_t0"] = *c.tau_over_t0;
        } else {
            j["drive"]["tau_ns"] = d.tau_ns;
        }
    }
    if (c.valley_kind == ValleyModelKind::Tilted) {
        j["valley_model"] = {{"kind", "tilted"},
                             {"ev0_uev", c.tilted.ev0_uev},
                             {"theta_deg", c.tilted.theta_rad * 180.0 / constants::pi},
                             {"arg_delta0_rad", c.tilted.arg_delta0_rad}};
    } else {
        const RoughnessModel &r = c.roughness;
        j["valley_model"] = {{"kind", "roughness"},
                             {"theta_deg", r.theta_rad * 180.0 / constants::pi},
                             {"x_well", r.x_well},
                             {"x_barrier", r.x_barrier},
                             {"delta_ec_mev", r.delta_ec_mev},
                             {"e_z_mv_per_nm", r.e_z_mv_per_nm},
                             {"tau_int_ml", r.tau_int_nm / constants::monolayer_nm},
                             {"well_width_ml", r.well_width_ml},
                             {"m_z_me", r.m_z_me},
                             {"psi_follows_interface", r.psi_follows_interface}};
    }
    if (c.variation) {
        j["variation"] = variation_json(*c.variation);
    }
    j["simulation"] = {{"periods", c.periods}, {"points_per_period", c.points_per_period}};
    if (c.valley_dt_ns) {
        j["simulation"]["valley_dt_ns"] = *c.valley_dt_ns;
    }
    j["seeds"] = {{"master", c.master_seed}, {"realizations", c.realizations}};
    j["execution"] = {{"workers", c.workers}};
    j["output"] = {{"svg", c.write_svg}, {"traces", c.write_traces}};
    if (c.sweep) {
        json ms = json::array();
        for (Method m : c.sweep->methods) {
            ms.push_back(to_string(m));
        }
        j["sweep"] = {{"axis", to_string(c.sweep->axis)}, {"values", c.sweep->values}, {"methods", ms}};
    }
    j["variations"] = {
        {"flag_ratio", c.variations.flag_ratio}, {"extreme_gain_error", c.variations.extreme_gain_error}};
    if (!c.variations.entries.empty()) {
        json arr = json::array();
        for (const auto &e : c.variations.entries) {
            arr.push_back({{"name", e.name}, {"variation", variation_json(e.variation)}});
        }
        j["variations"]["entries"] = arr;
    }
    const PowerParams &p = c.power.params;
    j["power"] = {{"n_qubit", c.power.n_qubits}, {"v0_mv", c.power.v0s_mv},   {"shared", c.power.shared},
                  {"n_phases", p.n_phases},      {"n_dc", p.n_dc},             {"n_gate", p.n_gate},
                  {"c_sc_ff", p.c_sc_ff},        {"c_gate_ff", p.c_gate_ff},   {"c_sl_ff", p.c_sl_ff},
                  {"f_mhz", p.f_mhz},            {"n_unit", p.n_unit}};
    return j;
}
