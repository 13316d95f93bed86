#pragma once

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "morl/csv.hpp"

namespace morl {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

namespace detail {

struct AxisScale {
    double lo, hi;
    double to_pixel(double v, double pix_lo, double pix_hi) const {
        if (hi == lo) return (pix_lo + pix_hi) / 2.0;
        return pix_lo + (v - lo) / (hi - lo) * (pix_hi - pix_lo);
    }
};

/// Round bounds outward to a "nice" tick step so axes are stable functions
/// of the data alone.
inline AxisScale nice_axis(double lo, double hi) {
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double raw_step = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw_step) {
            step = mag * m;
            break;
        }
    }
    return {std::floor(lo / step) * step, std::ceil(hi / step) * step};
}

inline std::vector<double> axis_ticks(const AxisScale& axis, int target = 7) {
    std::vector<double> ticks;
    const double span = axis.hi - axis.lo;
    const double step = span / (target - 1);
    for (int i = 0; i < target; ++i) ticks.push_back(axis.lo + step * i);
    return ticks;
}

} // namespace detail

/**
 * Self-contained SVG chart: scatter markers and/or polylines, axis labels,
 * tick labels and a legend. Output bytes are a pure function of the inputs.
 */
inline void write_svg_chart(const std::string& path, const std::vector<PlotSeries>& series,
                            const std::string& x_label, const std::string& y_label,
                            bool draw_lines) {
    if (series.empty()) throw std::invalid_argument("svg: no series to plot");
    bool any_point = false;
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!any_point) {
                xlo = xhi = x;
                ylo = yhi = y;
                any_point = true;
            }
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    if (!any_point) throw std::invalid_argument("svg: all series are empty");

    const detail::AxisScale xs = detail::nice_axis(xlo, xhi);
    const detail::AxisScale ys = detail::nice_axis(ylo, yhi);
    const double width = 640, height = 480;
    const double left = 70, right = 610, top = 30, bottom = 430;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("svg: cannot write " + path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    out << "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    for (double t : detail::axis_ticks(xs)) {
        const double px = xs.to_pixel(t, left, right);
        out << "<line x1=\"" << format_double(px) << "\" y1=\"" << top << "\" x2=\""
            << format_double(px) << "\" y2=\"" << bottom << "\"/>\n";
    }
    for (double t : detail::axis_ticks(ys)) {
        const double py = ys.to_pixel(t, bottom, top);
        out << "<line x1=\"" << left << "\" y1=\"" << format_double(py) << "\" x2=\"" << right
            << "\" y2=\"" << format_double(py) << "\"/>\n";
    }
    out << "</g>\n";

    out << "<g stroke=\"black\" stroke-width=\"1.5\" fill=\"none\">\n";
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
        << "\"/>\n";
    out << "</g>\n";

    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    for (double t : detail::axis_ticks(xs)) {
        const double px = xs.to_pixel(t, left, right);
        out << "<text x=\"" << format_double(px) << "\" y=\"" << bottom + 18
            << "\" text-anchor=\"middle\">" << format_double(t) << "</text>\n";
    }
    for (double t : detail::axis_ticks(ys)) {
        const double py = ys.to_pixel(t, bottom, top);
        out << "<text x=\"" << left - 8 << "\" y=\"" << format_double(py + 4)
            << "\" text-anchor=\"end\">" << format_double(t) << "</text>\n";
    }
    out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 40
        << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << (top + bottom) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << (top + bottom) / 2 << ")\">" << y_label << "</text>\n";
    out << "</g>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = palette[si % 8];
        if (draw_lines && series[si].points.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < series[si].points.size(); ++i) {
                const auto& [x, y] = series[si].points[i];
                out << (i ? " " : "") << format_double(xs.to_pixel(x, left, right)) << ","
                    << format_double(ys.to_pixel(y, bottom, top));
            }
            out << "\"/>\n";
        }
        out << "<g fill=\"" << color << "\">\n";
        for (const auto& [x, y] : series[si].points) {
            out << "<circle cx=\"" << format_double(xs.to_pixel(x, left, right)) << "\" cy=\""
                << format_double(ys.to_pixel(y, bottom, top)) << "\" r=\"3\"/>\n";
        }
        out << "</g>\n";
    }

    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const double ly = top + 10 + 18 * static_cast<double>(si);
        out << "<rect x=\"" << right - 150 << "\" y=\"" << format_double(ly - 9)
            << "\" width=\"10\" height=\"10\" fill=\"" << palette[si % 8] << "\"/>\n";
        out << "<text x=\"" << right - 135 << "\" y=\"" << format_double(ly) << "\">"
            << series[si].label << "</text>\n";
    }
    out << "</g>\n</svg>\n";
}

} // namespace morl
