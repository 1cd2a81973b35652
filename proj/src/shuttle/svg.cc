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


#include "shuttle/svg.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shuttle/csv.h"

using namespace shuttle;

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 80;
constexpr double kRight = 20;
constexpr double kTop = 40;
constexpr double kBottom = 50;
const char *const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '&':
                out += "&amp;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

}  // namespace

std::string shuttle::line_plot_svg(const PlotSpec &plot) {
    auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
    for (const auto &s : plot.series) {
        for (size_t k = 0; k < std::min(s.x.size(), s.y.size()); k++) {
            if (plot.log_y && !(s.y[k] > 0)) {
                continue;
            }
            x_lo = std::min(x_lo, s.x[k]);
            x_hi = std::max(x_hi, s.x[k]);
            y_lo = std::min(y_lo, ty(s.y[k]));
            y_hi = std::max(y_hi, ty(s.y[k]));
        }
    }
    if (!std::isfinite(x_lo)) {
        x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    }
    if (x_hi == x_lo) {
        x_hi = x_lo + 1;
    }
    if (y_hi == y_lo) {
        y_hi = y_lo + 1;
    }
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return kTop + (1 - (y - y_lo) / (y_hi - y_lo)) * ph; };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
                      "font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    out += "<text x=\"320\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(plot.title) + "</text>\n";
    out += "<rect x=\"80\" y=\"40\" width=\"" + format_number(pw) + "\" height=\"" + format_number(ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    out += "<text x=\"" + format_number(kLeft + pw / 2) + "\" y=\"" + format_number(kHeight - 12) +
           "\" text-anchor=\"middle\">" + escape(plot.x_label) + "</text>\n";
    out += "<text x=\"16\" y=\"" + format_number(kTop + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           format_number(kTop + ph / 2) + ")\">" + escape(plot.y_label) + "</text>\n";
    for (int k = 0; k <= 4; k++) {
        double fx = x_lo + (x_hi - x_lo) * k / 4.0;
        double fy = y_lo + (y_hi - y_lo) * k / 4.0;
        std::string ylab = plot.log_y ? "1e" + format_number(std::round(fy * 100) / 100) : format_number(fy);
        out += "<text x=\"" + format_number(px(fx)) + "\" y=\"" + format_number(kTop + ph + 16) +
               "\" text-anchor=\"middle\">" + format_number(fx) + "</text>\n";
        out += "<text x=\"" + format_number(kLeft - 4) + "\" y=\"" + format_number(py(fy) + 4) +
               "\" text-anchor=\"end\">" + ylab + "</text>\n";
    }
    size_t color = 0;
    for (const auto &s : plot.series) {
        const char *c = kColors[color++ % std::size(kColors)];
        out += "<polyline fill=\"none\" stroke=\"" + std::string(c) + "\" stroke-width=\"1.5\" points=\"";
        for (size_t k = 0; k < std::min(s.x.size(), s.y.size()); k++) {
            if (plot.log_y && !(s.y[k] > 0)) {
                continue;
            }
            out += format_number(px(s.x[k])) + "," + format_number(py(ty(s.y[k]))) + " ";
        }
        out += "\"/>\n";
        double ly = kTop + 14 + 16 * static_cast<double>(color - 1);
        out += "<text x=\"" + format_number(kWidth - kRight - 6) + "\" y=\"" + format_number(ly) +
               "\" text-anchor=\"end\" fill=\"" + c + "\">" + escape(s.label) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}
