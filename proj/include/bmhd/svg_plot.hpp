#pragma once

#include <string>
#include <vector>

namespace bmhd {

struct PlotCurve {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal static SVG line chart: axes, ticks, legend, one polyline per curve.
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<PlotCurve>& curves, bool log_y = false);

}  // namespace bmhd
