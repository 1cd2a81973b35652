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


#ifndef SHUTTLE_SVG_H
#define SHUTTLE_SVG_H

#include <string>
#include <vector>

namespace shuttle {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    /// Non-positive values are dropped on a log axis.
    bool log_y = false;
    std::vector<PlotSeries> series;
};

/// Standalone SVG document with one polyline per series.
std::string line_plot_svg(const PlotSpec &plot);

}  // namespace shuttle

#endif
