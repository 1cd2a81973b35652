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

#include "shuttle/csv.h"

#include <cstdio>
#include <stdexcept>

using namespace shuttle;

std::string shuttle::format_number(double x) {
    if (x == 0) {
        return "0";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

double shuttle::as_written(double x) {
    return std::stod(format_number(x));
}

CsvBuilder::CsvBuilder(std::vector<std::string> header) : width_(header.size()) {
    for (size_t k = 0; k < header.size(); k++) {
        if (k) {
            out_ += ',';
        }
        out_ += header[k];
    }
    out_ += '\n';
}

CsvBuilder &CsvBuilder::cell(std::string_view s) {
    if (filled_ == width_) {
        throw std::logic_error("CsvBuilder: row is already full");
    }
    if (filled_) {
        out_ += ',';
    }
    out_ += s;
    filled_++;
    return *this;
}

CsvBuilder &CsvBuilder::cell(double x) {
    return cell(format_number(x));
}

CsvBuilder &CsvBuilder::cell(long long x) {
    return cell(std::to_string(x));
}

void CsvBuilder::end_row() {
    if (filled_ != width_) {
        throw std::logic_error("CsvBuilder: row has " + std::to_string(filled_) + " cells, expected " +
                               std::to_string(width_));
    }
    out_ += '\n';
    filled_ = 0;
}

std::string shuttle::trajectory_csv(const Trajectory &traj) {
    CsvBuilder b({"t_ns", "x_qd_nm", "v_s_m_per_s", "a_x_nm", "a_y_nm", "omega_x_per_ns", "omega_y_per_ns"});
    for (size_t k = 0; k < traj.samples.size(); k++) {
        const auto &s = traj.samples[k];
        b.cell(s.t_ns).cell(s.x_nm).cell(traj.v_s[k]).cell(s.a_x_nm).cell(s.a_y_nm).cell(s.omega_x_per_ns).cell(
            s.omega_y_per_ns);
        b.end_row();
    }
    return b.str();
}

std::string shuttle::valley_csv(const ValleySignals &signals, const ValleyTrace &trace) {
    if (trace.leakage.size() != signals.size()) {
        throw std::invalid_argument("valley_csv: trace and signals differ in length");
    }
    CsvBuilder b({"t_ns", "ev_ueV", "phi_v_rad", "phidot_rad_per_ns", "leakage"});
    for (size_t k = 0; k < signals.size(); k++) {
        b.cell(signals.times_ns[k])
            .cell(signals.ev_ev[k] / constants::ev_per_uev)
            .cell(signals.phi_v_rad[k])
            .cell(signals.phidot_rad_per_ns[k])
            .cell(trace.leakage[k]);
        b.end_row();
    }
    return b.str();
}

std::string shuttle::drive_csv(const SampledDrive &drive) {
    CsvBuilder b({"t_ns", "gate_index", "voltage_mV"});
    const auto &grid = drive.grid();
    for (int g = 1; g <= drive.n_gates(); g++) {
        auto s = drive.series(g);
        for (size_t k = 0; k < grid.n_samples; k++) {
            b.cell(grid.time(k)).cell(static_cast<long long>(g)).cell(s[k]);
            b.end_row();
        }
    }
    return b.str();
}

std::string shuttle::power_csv(std::span<const PowerRow> rows) {
    CsvBuilder b({"n_qubit", "v0_mV", "shared", "p_sc_mW", "p_gate_mW", "p_sl_mW", "total_mW"});
    for (const auto &r : rows) {
        b.cell(static_cast<long long>(r.n_qubit))
            .cell(r.v0_mv)
            .cell(r.shared ? "true" : "false")
            .cell(r.p_sc_mw)
            .cell(r.p_gate_mw)
            .cell(r.p_sl_mw)
            .cell(r.total_mw);
        b.end_row();
    }
    return b.str();
}

std::string shuttle::ensemble_csv(const EnsembleSummary &summary) {
    CsvBuilder b({"seed", "max_leakage"});
    for (size_t k = 0; k < summary.seeds.size(); k++) {
        b.cell(std::to_string(summary.seeds[k])).cell(summary.max_leakage[k]);
        b.end_row();
    }
    return b.str();
}

std::string shuttle::ensemble_summary_csv(const EnsembleSummary &summary) {
    CsvBuilder b({"statistic", "value"});
    b.cell("n_realizations").cell(static_cast<long long>(summary.seeds.size()));
    b.end_row();
    b.cell("n_eff").cell(static_cast<long long>(summary.n_eff));
    b.end_row();
    const std::pair<const char *, double> stats[] = {{"min", summary.min},
                                                     {"q1", summary.q1},
                                                     {"median", summary.median},
                                                     {"q3", summary.q3},
                                                     {"max", summary.max}};
    for (const auto &[name, value] : stats) {
        b.cell(name).cell(value);
        b.end_row();
    }
    return b.str();
}

size_t CsvTable::column_index(std::string_view name) const {
    for (size_t k = 0; k < header.size(); k++) {
        if (header[k] == name) {
            return k;
        }
    }
    throw std::out_of_range("no CSV column named " + std::string(name));
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const {
    size_t c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &r : rows) {
        out.push_back(std::stod(r.at(c)));
    }
    return out;
}

CsvTable shuttle::parse_csv(std::string_view text) {
    CsvTable t;
    auto split = [](std::string_view line) {
        std::vector<std::string> cells;
        size_t start = 0;
        while (true) {
            size_t comma = line.find(',', start);
            cells.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
            if (comma == std::string_view::npos) {
                return cells;
            }
            start = comma + 1;
        }
    };
    size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }
        if (first) {
            t.header = split(line);
            first = false;
        } else {
            t.rows.push_back(split(line));
            if (t.rows.back().size() != t.header.size()) {
                throw std::runtime_error("CSV row " + std::to_string(t.rows.size()) + " has the wrong width");
            }
        }
    }
    return t;
}
