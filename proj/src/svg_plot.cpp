#include "bmhd/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bmhd/io_util.hpp"

namespace bmhd {

namespace {

constexpr int kWidth = 860, kHeight = 520;
constexpr int kLeft = 70, kRight = 180, kTop = 40, kBottom = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                         "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2"};

std::string fmt(double x) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss.precision(4);
    ss << x;
    return ss.str();
}

}  // namespace

void write_svg_chart(const std::string& path, const std::string& title,
                     const std::vector<PlotCurve>& curves, bool log_y) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            double y = c.y[i];
            if (log_y) {
                if (!(y > 0.0)) continue;
                y = std::log10(y);
            }
            xmin = std::min(xmin, c.x[i]);
            xmax = std::max(xmax, c.x[i]);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!std::isfinite(xmin) || !std::isfinite(ymin)) {
        xmin = 0.0; xmax = 1.0; ymin = 0.0; ymax = 1.0;
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;

    const double px = (kWidth - kLeft - kRight) / (xmax - xmin);
    const double py = (kHeight - kTop - kBottom) / (ymax - ymin);
    auto sx = [&](double x) { return kLeft + (x - xmin) * px; };
    auto sy = [&](double y) { return kHeight - kBottom - (y - ymin) * py; };

    std::ostringstream svg;
    svg.imbue(std::locale::classic());
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth << "' height='" << kHeight
        << "' viewBox='0 0 " << kWidth << ' ' << kHeight << "'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<text x='" << kLeft << "' y='24' font-size='16' font-family='sans-serif'>" << title
        << (log_y ? " (log y)" : "") << "</text>\n";
    svg << "<line x1='" << kLeft << "' y1='" << kHeight - kBottom << "' x2='" << kWidth - kRight
        << "' y2='" << kHeight - kBottom << "' stroke='black'/>\n";
    svg << "<line x1='" << kLeft << "' y1='" << kTop << "' x2='" << kLeft << "' y2='"
        << kHeight - kBottom << "' stroke='black'/>\n";

    for (int tick = 0; tick <= 5; ++tick) {
        const double xv = xmin + tick * (xmax - xmin) / 5.0;
        const double yv = ymin + tick * (ymax - ymin) / 5.0;
        svg << "<text x='" << sx(xv) - 12 << "' y='" << kHeight - kBottom + 18
            << "' font-size='11' font-family='sans-serif'>" << fmt(xv) << "</text>\n";
        svg << "<text x='6' y='" << sy(yv) + 4 << "' font-size='11' font-family='sans-serif'>"
            << fmt(log_y ? std::pow(10.0, yv) : yv) << "</text>\n";
        svg << "<line x1='" << kLeft << "' y1='" << sy(yv) << "' x2='" << kWidth - kRight << "' y2='"
            << sy(yv) << "' stroke='#dddddd'/>\n";
    }

    int ci = 0;
    for (const auto& c : curves) {
        const char* color = kColors[ci % 10];
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            double y = c.y[i];
            if (log_y) {
                if (!(y > 0.0)) continue;
                y = std::log10(y);
            }
            svg << fmt(sx(c.x[i])) << ',' << fmt(sy(y)) << ' ';
        }
        svg << "'/>\n";
        svg << "<text x='" << kWidth - kRight + 10 << "' y='" << kTop + 16 * ci + 10
            << "' font-size='12' font-family='sans-serif' fill='" << color << "'>" << c.label
            << "</text>\n";
        ++ci;
    }
    svg << "</svg>\n";
    atomic_write_text(path, svg.str());
}

}  // namespace bmhd
