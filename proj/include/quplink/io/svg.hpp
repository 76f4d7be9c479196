#pragma once

// Self-contained SVG line charts: a log-y variant for BER curves and a linear
// variant for degradation summaries. No external plotting dependency, so the
// CLI can always produce figures.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "quplink/errors.hpp"
#include "quplink/io/csv.hpp"

namespace quplink {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y)
};

namespace detail {

inline constexpr const char* kPalette[] = {"#1f6fb2", "#d1495b", "#2e8540",
                                           "#8b5fbf", "#c77d1e", "#3d3d3d"};
inline constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

inline std::string fmt(double v) { return format_double("%.2f", v); }

// Largest 1/2/5 ladder value not above the raw spacing.
inline double nice_tick_step(double range, int max_ticks) {
    const double raw = range / std::max(1, max_ticks);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (const double m : {5.0, 2.0, 1.0}) {
        if (mag * m <= raw * (1.0 + 1e-12)) {
            return mag * m;
        }
    }
    return mag;
}

inline std::string tick_label(double v) {
    if (v != 0.0 && (std::abs(v) < 1e-3 || std::abs(v) >= 1e4)) {
        return format_double("%.0e", v);
    }
    return format_double("%g", v);
}

inline void draw_marker(std::ostringstream& out, double x, double y, std::size_t series_index,
                        const char* color) {
    const double r = 3.5;
    switch (series_index % 5) {
        case 0:
            out << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(r)
                << "\" fill=\"" << color << "\"/>\n";
            break;
        case 1:
            out << "<rect x=\"" << fmt(x - r) << "\" y=\"" << fmt(y - r) << "\" width=\""
                << fmt(2 * r) << "\" height=\"" << fmt(2 * r) << "\" fill=\"" << color << "\"/>\n";
            break;
        case 2:
            out << "<path d=\"M" << fmt(x) << " " << fmt(y - r) << " L" << fmt(x + r) << " "
                << fmt(y + r) << " L" << fmt(x - r) << " " << fmt(y + r) << " Z\" fill=\"" << color
                << "\"/>\n";
            break;
        case 3:
            out << "<path d=\"M" << fmt(x) << " " << fmt(y - r) << " L" << fmt(x + r) << " "
                << fmt(y) << " L" << fmt(x) << " " << fmt(y + r) << " L" << fmt(x - r) << " "
                << fmt(y) << " Z\" fill=\"" << color << "\"/>\n";
            break;
        default:
            out << "<path d=\"M" << fmt(x - r) << " " << fmt(y - r) << " L" << fmt(x + r) << " "
                << fmt(y + r) << " M" << fmt(x - r) << " " << fmt(y + r) << " L" << fmt(x + r)
                << " " << fmt(y - r) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
            break;
    }
}

}  // namespace detail

inline std::string render_line_chart_svg(const std::string& title, const std::string& x_label,
                                         const std::string& y_label,
                                         const std::vector<PlotSeries>& series, bool log_y) {
    if (series.empty()) {
        throw ConfigError("plot: no series to draw");
    }

    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    bool any = false;
    for (const PlotSeries& s : series) {
        for (const auto& [x, y] : s.points) {
            if (log_y && !(y > 0.0)) {
                continue;  // zero-error points cannot appear on a log axis
            }
            if (!any) {
                x_min = x_max = x;
                y_min = y_max = y;
                any = true;
            } else {
                x_min = std::min(x_min, x);
                x_max = std::max(x_max, x);
                y_min = std::min(y_min, y);
                y_max = std::max(y_max, y);
            }
        }
    }
    if (!any) {
        throw ConfigError("plot: no drawable points (all values are zero?)");
    }
    if (x_max == x_min) {
        x_min -= 1.0;
        x_max += 1.0;
    }

    const double width = 880, height = 560;
    const double left = 84, right = 24, top = 48, bottom = 64;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double y_lo, y_hi;  // axis range, in log10 units when log_y
    if (log_y) {
        y_lo = std::floor(std::log10(y_min));
        y_hi = std::ceil(std::log10(y_max));
        if (y_hi <= y_lo) {
            y_hi = y_lo + 1.0;
        }
    } else {
        y_lo = std::min(0.0, y_min);
        y_hi = y_max;
        if (y_hi <= y_lo) {
            y_hi = y_lo + 1.0;
        }
        const double pad = 0.05 * (y_hi - y_lo);
        y_hi += pad;
    }

    const auto x_px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    const auto y_px = [&](double y) {
        const double t = log_y ? (std::log10(y) - y_lo) / (y_hi - y_lo)
                               : (y - y_lo) / (y_hi - y_lo);
        return top + (1.0 - t) * plot_h;
    };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    out << "<text x=\"" << detail::fmt(width / 2) << "\" y=\"28\" font-size=\"17\" "
        << "text-anchor=\"middle\" font-family=\"sans-serif\">" << title << "</text>\n";

    // Gridlines and tick labels.
    out << "<g font-size=\"12\" font-family=\"sans-serif\" fill=\"#333\">\n";
    if (log_y) {
        for (double e = y_lo; e <= y_hi + 1e-9; e += 1.0) {
            const double py = y_px(std::pow(10.0, e));
            out << "<line x1=\"" << detail::fmt(left) << "\" y1=\"" << detail::fmt(py) << "\" x2=\""
                << detail::fmt(left + plot_w) << "\" y2=\"" << detail::fmt(py)
                << "\" stroke=\"#ddd\"/>\n";
            out << "<text x=\"" << detail::fmt(left - 8) << "\" y=\"" << detail::fmt(py + 4)
                << "\" text-anchor=\"end\">" << detail::format_double("1e%.0f", e) << "</text>\n";
        }
    } else {
        const double step = detail::nice_tick_step(y_hi - y_lo, 8);
        for (double v = std::ceil(y_lo / step) * step; v <= y_hi + 1e-9; v += step) {
            const double py = y_px(v);
            out << "<line x1=\"" << detail::fmt(left) << "\" y1=\"" << detail::fmt(py) << "\" x2=\""
                << detail::fmt(left + plot_w) << "\" y2=\"" << detail::fmt(py)
                << "\" stroke=\"#ddd\"/>\n";
            out << "<text x=\"" << detail::fmt(left - 8) << "\" y=\"" << detail::fmt(py + 4)
                << "\" text-anchor=\"end\">" << detail::tick_label(v) << "</text>\n";
        }
    }
    const double x_step = detail::nice_tick_step(x_max - x_min, 10);
    for (double v = std::ceil(x_min / x_step) * x_step; v <= x_max + 1e-9; v += x_step) {
        const double px = x_px(v);
        out << "<line x1=\"" << detail::fmt(px) << "\" y1=\"" << detail::fmt(top) << "\" x2=\""
            << detail::fmt(px) << "\" y2=\"" << detail::fmt(top + plot_h)
            << "\" stroke=\"#eee\"/>\n";
        out << "<text x=\"" << detail::fmt(px) << "\" y=\"" << detail::fmt(top + plot_h + 18)
            << "\" text-anchor=\"middle\">" << detail::tick_label(v) << "</text>\n";
    }
    out << "</g>\n";

    // Axes.
    out << "<rect x=\"" << detail::fmt(left) << "\" y=\"" << detail::fmt(top) << "\" width=\""
        << detail::fmt(plot_w) << "\" height=\"" << detail::fmt(plot_h)
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << detail::fmt(left + plot_w / 2) << "\" y=\""
        << detail::fmt(height - 18) << "\" font-size=\"14\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\">" << x_label << "</text>\n";
    out << "<text x=\"20\" y=\"" << detail::fmt(top + plot_h / 2)
        << "\" font-size=\"14\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "transform=\"rotate(-90 20 " << detail::fmt(top + plot_h / 2) << ")\">" << y_label
        << "</text>\n";

    // Series.
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = detail::kPalette[s % detail::kPaletteSize];
        std::vector<std::pair<double, double>> drawable;
        for (const auto& [x, y] : series[s].points) {
            if (!log_y || y > 0.0) {
                drawable.push_back({x_px(x), y_px(log_y ? y : y)});
            }
        }
        if (drawable.size() >= 2) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\" "
                << "points=\"";
            for (const auto& [px, py] : drawable) {
                out << detail::fmt(px) << "," << detail::fmt(py) << " ";
            }
            out << "\"/>\n";
        }
        for (const auto& [px, py] : drawable) {
            detail::draw_marker(out, px, py, s, color);
        }
    }

    // Legend.
    const double legend_x = left + plot_w - 190;
    double legend_y = top + 14;
    out << "<g font-size=\"12\" font-family=\"sans-serif\">\n";
    out << "<rect x=\"" << detail::fmt(legend_x - 10) << "\" y=\"" << detail::fmt(top + 2)
        << "\" width=\"196\" height=\"" << detail::fmt(series.size() * 19.0 + 10)
        << "\" fill=\"white\" stroke=\"#999\"/>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = detail::kPalette[s % detail::kPaletteSize];
        out << "<line x1=\"" << detail::fmt(legend_x) << "\" y1=\"" << detail::fmt(legend_y)
            << "\" x2=\"" << detail::fmt(legend_x + 26) << "\" y2=\"" << detail::fmt(legend_y)
            << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
        detail::draw_marker(out, legend_x + 13, legend_y, s, color);
        out << "<text x=\"" << detail::fmt(legend_x + 34) << "\" y=\""
            << detail::fmt(legend_y + 4) << "\">" << series[s].label << "</text>\n";
        legend_y += 19;
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

inline std::string render_ber_chart_svg(const std::string& title,
                                        const std::vector<PlotSeries>& series) {
    return render_line_chart_svg(title, "Eb/N0 (dB)", "bit error rate", series, true);
}

inline std::string render_degradation_chart_svg(const std::string& title,
                                                const std::string& x_label,
                                                const std::vector<PlotSeries>& series) {
    return render_line_chart_svg(title, x_label, "degradation (dB)", series, false);
}

}  // namespace quplink
