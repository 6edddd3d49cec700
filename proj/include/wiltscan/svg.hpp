#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "wiltscan/csv.hpp"
#include "wiltscan/error.hpp"

namespace wiltscan {

// Minimal deterministic line-chart writer. No timestamps or random ids, so a
// rerun with the same data produces an identical file.

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgChart {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<SvgSeries> series;
    int width = 640;
    int height = 400;
};

inline void write_svg_chart(const SvgChart& chart, const std::string& path) {
    if (chart.series.empty()) throw DataError("write_svg_chart: no series");
    for (const auto& s : chart.series) {
        if (s.x.size() != s.y.size() || s.x.empty())
            throw DataError("write_svg_chart: series '" + s.label + "' has bad point count");
    }
    double xmin = chart.series[0].x[0], xmax = xmin;
    double ymin = chart.series[0].y[0], ymax = ymin;
    for (const auto& s : chart.series) {
        for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
        for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
    }
    if (xmax == xmin) { xmin -= 0.5; xmax += 0.5; }
    if (ymax == ymin) { ymin -= 0.5; ymax += 0.5; }

    const double ml = 60, mr = 20, mt = 40, mb = 50;
    const double pw = chart.width - ml - mr, ph = chart.height - mt - mb;
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write chart: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width
        << "\" height=\"" << chart.height << "\" viewBox=\"0 0 " << chart.width << ' '
        << chart.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << chart.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << chart.title << "</text>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    // axis extents as tick labels
    auto fmt = [](double v) { return csv::format_double(v); };
    out << "<text x=\"" << ml << "\" y=\"" << mt + ph + 18
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(xmin) << "</text>\n";
    out << "<text x=\"" << ml + pw << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(xmax)
        << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + ph
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(ymin)
        << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(ymax)
        << "</text>\n";
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << chart.height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << chart.x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << mt + ph / 2 << ")\">" << chart.y_label << "</text>\n";

    for (std::size_t si = 0; si < chart.series.size(); ++si) {
        const auto& s = chart.series[si];
        const char* color = palette[si % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) out << ' ';
            out << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]));
        }
        out << "\"/>\n";
        out << "<text x=\"" << ml + pw - 4 << "\" y=\"" << mt + 14 + 14 * static_cast<double>(si)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
            << color << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("failed writing chart: " + path);
}

} // namespace wiltscan
