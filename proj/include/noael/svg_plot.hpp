#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "noael/dataset.hpp"

namespace noael {

namespace detail {

inline std::string svg_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

// type-7 quantile (linear interpolation of order statistics)
inline double quantile7(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    double h = (static_cast<double>(v.size()) - 1.0) * p;
    std::size_t lo = static_cast<std::size_t>(std::floor(h));
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - lo) * (v[hi] - v[lo]);
}

struct PlotFrame {
    double width = 640, height = 480;
    double left = 64, right = 20, top = 36, bottom = 48;

    double x0() const { return left; }
    double x1() const { return width - right; }
    double y0() const { return height - bottom; }  // data minimum (SVG y grows down)
    double y1() const { return top; }

    double map_y(double v, double vmin, double vmax) const {
        if (vmax <= vmin) return 0.5 * (y0() + y1());
        return y0() - (v - vmin) / (vmax - vmin) * (y0() - y1());
    }
};

inline void svg_header(std::ostringstream& out, const PlotFrame& f, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width
        << "\" height=\"" << f.height << "\" viewBox=\"0 0 " << f.width << ' '
        << f.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << f.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";
}

inline void svg_axes(std::ostringstream& out, const PlotFrame& f, double vmin, double vmax,
                     const std::string& ylabel) {
    out << "<line x1=\"" << svg_num(f.x0()) << "\" y1=\"" << svg_num(f.y0())
        << "\" x2=\"" << svg_num(f.x1()) << "\" y2=\"" << svg_num(f.y0())
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << svg_num(f.x0()) << "\" y1=\"" << svg_num(f.y0())
        << "\" x2=\"" << svg_num(f.x0()) << "\" y2=\"" << svg_num(f.y1())
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double v = vmin + (vmax - vmin) * i / 4.0;
        double y = f.map_y(v, vmin, vmax);
        out << "<line x1=\"" << svg_num(f.x0() - 4) << "\" y1=\"" << svg_num(y)
            << "\" x2=\"" << svg_num(f.x0()) << "\" y2=\"" << svg_num(y)
            << "\" stroke=\"black\"/>\n";
        char lab[32];
        std::snprintf(lab, sizeof lab, "%.3g", v);
        out << "<text x=\"" << svg_num(f.x0() - 8) << "\" y=\"" << svg_num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << lab << "</text>\n";
    }
    out << "<text x=\"14\" y=\"" << svg_num((f.y0() + f.y1()) / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 14 " << svg_num((f.y0() + f.y1()) / 2) << ")\">"
        << ylabel << "</text>\n";
}

}  // namespace detail

/// Tukey-style boxplots per dose group (box at the quartiles, whiskers to the
/// most extreme point within 1.5 IQR, outliers as circles).
inline std::string svg_boxplot(const std::vector<GroupSummary>& summaries,
                               const std::vector<std::vector<double>>& values,
                               const std::string& title, const std::string& ylabel) {
    detail::PlotFrame f;
    std::ostringstream out;
    detail::svg_header(out, f, title);

    double vmin = values[0][0], vmax = values[0][0];
    for (const auto& g : values)
        for (double x : g) {
            vmin = std::min(vmin, x);
            vmax = std::max(vmax, x);
        }
    double pad = (vmax - vmin) * 0.05 + 1e-9;
    vmin -= pad;
    vmax += pad;
    detail::svg_axes(out, f, vmin, vmax, ylabel);

    const std::size_t g = values.size();
    const double slot = (f.x1() - f.x0()) / static_cast<double>(g);
    const double box_w = slot * 0.5;
    for (std::size_t i = 0; i < g; ++i) {
        const auto& v = values[i];
        double cx = f.x0() + slot * (static_cast<double>(i) + 0.5);
        double q1 = detail::quantile7(v, 0.25);
        double q2 = detail::quantile7(v, 0.50);
        double q3 = detail::quantile7(v, 0.75);
        double iqr = q3 - q1;
        double lo_fence = q1 - 1.5 * iqr, hi_fence = q3 + 1.5 * iqr;
        double wlo = q1, whi = q3;
        std::vector<double> outliers;
        for (double x : v) {
            if (x < lo_fence || x > hi_fence) outliers.push_back(x);
            else {
                wlo = std::min(wlo, x);
                whi = std::max(whi, x);
            }
        }
        auto Y = [&](double v2) { return f.map_y(v2, vmin, vmax); };
        out << "<g class=\"box\">\n";
        out << "<line x1=\"" << detail::svg_num(cx) << "\" y1=\"" << detail::svg_num(Y(wlo))
            << "\" x2=\"" << detail::svg_num(cx) << "\" y2=\"" << detail::svg_num(Y(q1))
            << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << detail::svg_num(cx) << "\" y1=\"" << detail::svg_num(Y(q3))
            << "\" x2=\"" << detail::svg_num(cx) << "\" y2=\"" << detail::svg_num(Y(whi))
            << "\" stroke=\"black\"/>\n";
        out << "<rect x=\"" << detail::svg_num(cx - box_w / 2) << "\" y=\""
            << detail::svg_num(Y(q3)) << "\" width=\"" << detail::svg_num(box_w)
            << "\" height=\"" << detail::svg_num(Y(q1) - Y(q3))
            << "\" fill=\"#cfe2f3\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << detail::svg_num(cx - box_w / 2) << "\" y1=\""
            << detail::svg_num(Y(q2)) << "\" x2=\"" << detail::svg_num(cx + box_w / 2)
            << "\" y2=\"" << detail::svg_num(Y(q2)) << "\" stroke=\"black\" "
               "stroke-width=\"2\"/>\n";
        for (double x : outliers)
            out << "<circle cx=\"" << detail::svg_num(cx) << "\" cy=\""
                << detail::svg_num(Y(x)) << "\" r=\"2.5\" fill=\"none\" "
                   "stroke=\"black\"/>\n";
        out << "<text x=\"" << detail::svg_num(cx) << "\" y=\""
            << detail::svg_num(f.y0() + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << summaries[i].label << "</text>\n";
        out << "</g>\n";
    }
    out << "<text x=\"" << detail::svg_num((f.x0() + f.x1()) / 2) << "\" y=\""
        << detail::svg_num(f.height - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           "dose group</text>\n";
    out << "</svg>\n";
    return out.str();
}

/// Mosaic-style crude tumor proportion plot: column width proportional to
/// group size, shaded segment height equal to the tumor fraction.
inline std::string svg_mosaic(const std::vector<GroupSummary>& summaries,
                              const std::string& title) {
    detail::PlotFrame f;
    std::ostringstream out;
    detail::svg_header(out, f, title);
    detail::svg_axes(out, f, 0.0, 1.0, "tumor proportion");

    double total = 0.0;
    for (const auto& s : summaries) total += s.n;
    const double gap = 6.0;
    double x = f.x0() + gap / 2;
    for (const auto& s : summaries) {
        double w = (f.x1() - f.x0() - gap * static_cast<double>(summaries.size())) *
                   (static_cast<double>(s.n) / total);
        double p = s.tumor_proportion;
        double y_split = f.map_y(p, 0.0, 1.0);
        out << "<g class=\"mosaic\">\n";
        out << "<rect x=\"" << detail::svg_num(x) << "\" y=\"" << detail::svg_num(f.y1())
            << "\" width=\"" << detail::svg_num(w) << "\" height=\""
            << detail::svg_num(y_split - f.y1())
            << "\" fill=\"#f4f4f4\" stroke=\"black\"/>\n";
        out << "<rect x=\"" << detail::svg_num(x) << "\" y=\"" << detail::svg_num(y_split)
            << "\" width=\"" << detail::svg_num(w) << "\" height=\""
            << detail::svg_num(f.y0() - y_split)
            << "\" fill=\"#e06666\" stroke=\"black\"/>\n";
        out << "<text x=\"" << detail::svg_num(x + w / 2) << "\" y=\""
            << detail::svg_num(f.y0() + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << s.label << "</text>\n";
        out << "</g>\n";
        x += w + gap;
    }
    out << "<text x=\"" << detail::svg_num((f.x0() + f.x1()) / 2) << "\" y=\""
        << detail::svg_num(f.height - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           "dose group</text>\n";
    out << "</svg>\n";
    return out.str();
}

/// Dispatches on endpoint: boxplots for continuous/score data, the mosaic for
/// incidence data. Output bytes are deterministic for a fixed dataset.
inline std::string svg_plot(const DoseResponseDataset& ds, const std::string& title) {
    auto summaries = summarize(ds);
    if (const auto* c = std::get_if<ContinuousDataset>(&ds))
        return svg_boxplot(summaries, c->observations, title, "response");
    if (const auto* s = std::get_if<ScoreDataset>(&ds)) {
        std::vector<std::vector<double>> vals;
        for (const auto& v : s->observations) vals.emplace_back(v.begin(), v.end());
        return svg_boxplot(summaries, vals, title, "severity score");
    }
    return svg_mosaic(summaries, title);
}

}  // namespace noael
