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

#ifndef SHUTTLE_CSV_H
#define SHUTTLE_CSV_H

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shuttle/power.h"
#include "shuttle/roughness.h"

namespace shuttle {

/// 12 significant digits, shortest of fixed or exponent form.
std::string format_number(double x);
/// The double a reader of format_number(x) recovers.
double as_written(double x);

class CsvBuilder {
   public:
    explicit CsvBuilder(std::vector<std::string> header);

    CsvBuilder &cell(double x);
    CsvBuilder &cell(std::string_view s);
    CsvBuilder &cell(long long x);
    void end_row();
    const std::string &str() const {
        return out_;
    }

   private:
    size_t width_;
    size_t filled_ = 0;
    std::string out_;
};

std::string trajectory_csv(const Trajectory &traj);
std::string valley_csv(const ValleySignals &signals, const ValleyTrace &trace);
/// Long format, gate-major.
std::string drive_csv(const SampledDrive &drive);
std::string power_csv(std::span<const PowerRow> rows);
std::string ensemble_csv(const EnsembleSummary &summary);
std::string ensemble_summary_csv(const EnsembleSummary &summary);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Throws std::out_of_range for an unknown column.
    size_t column_index(std::string_view name) const;
    std::vector<double> numeric_column(std::string_view name) const;
};

/// Comma separated, no quoting, header row first.
CsvTable parse_csv(std::string_view text);

}  // namespace shuttle

#endif
