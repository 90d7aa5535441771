#pragma once

// Static SVG line charts of success rate against k, ε, p or q.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rwl1/bench.hpp"
#include "rwl1/errors.hpp"

namespace rwl1 {

enum class PlotAxis { K, Eps, P, Q };

inline PlotAxis parse_plot_axis(const std::string& name) {
    if (name == "k") return PlotAxis::K;
    if (name == "eps") return PlotAxis::Eps;
    if (name == "p") return PlotAxis::P;
    if (name == "q") return PlotAxis::Q;
    throw InputError("unknown x axis '" + name + "' (expected k, eps, p, q)");
}

namespace detail {

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline double eps_of(const CellRecord& c) {
    const auto colon = c.eps_rule.find(':');
    if (colon == std::string::npos) throw ParseError("eps_rule '" + c.eps_rule + "' carries no value");
    return std::stod(c.eps_rule.substr(colon + 1));
}

inline double x_of(const CellRecord& c, PlotAxis axis) {
    switch (axis) {
    case PlotAxis::K: return static_cast<double>(c.k);
    case PlotAxis::Eps: return eps_of(c);
    case PlotAxis::P:
        if (c.p.empty()) throw ParseError("row for scheme '" + c.scheme + "' has no p");
        return std::stod(c.p);
    case PlotAxis::Q:
        if (c.q.empty()) throw ParseError("row for scheme '" + c.scheme + "' has no q");
        return std::stod(c.q);
    }
    return 0.0;
}

} // namespace detail

inline std::string render_svg(const std::vector<CellRecord>& rows, PlotAxis axis,
                              const std::string& title = "") {
    if (rows.empty()) throw InputError("render_svg: no data");

    // Identifying fields, minus the one on the x axis.
    struct Field {
        const char* name;
        std::string (*get)(const CellRecord&);
        bool on_x;
    };
    const std::vector<Field> fields = {
        {"dist", [](const CellRecord& c) { return c.distribution; }, false},
        {"scheme", [](const CellRecord& c) { return c.scheme; }, false},
        {"p", [](const CellRecord& c) { return c.p; }, axis == PlotAxis::P},
        {"q", [](const CellRecord& c) { return c.q; }, axis == PlotAxis::Q},
        {"eps", [](const CellRecord& c) { return c.eps_rule; }, axis == PlotAxis::Eps},
        {"k", [](const CellRecord& c) { return std::to_string(c.k); }, axis == PlotAxis::K},
    };
    std::vector<bool> varies(fields.size(), false);
    for (std::size_t f = 0; f < fields.size(); ++f) {
        std::set<std::string> seen;
        for (const auto& r : rows) seen.insert(fields[f].get(r));
        varies[f] = !fields[f].on_x && seen.size() > 1;
    }
    auto label_of = [&](const CellRecord& r) {
        std::string label;
        for (std::size_t f = 0; f < fields.size(); ++f) {
            if (!varies[f]) continue;
            if (!label.empty()) label += ' ';
            label += std::string(fields[f].name) == "scheme" ? r.scheme
                                                             : std::string(fields[f].name) + "=" + fields[f].get(r);
        }
        return label.empty() ? r.scheme : label;
    };

    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    for (const auto& r : rows) {
        const std::string label = label_of(r);
        if (!series.count(label)) order.push_back(label);
        series[label].emplace_back(detail::x_of(r, axis), r.success_rate);
    }

    const bool log_x = axis == PlotAxis::Eps;
    auto tx = [log_x](double x) { return log_x ? std::log10(x) : x; };
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    std::set<double> xs;
    for (auto& [label, pts] : series) {
        std::sort(pts.begin(), pts.end());
        for (const auto& [x, y] : pts) {
            if (log_x && !(x > 0.0)) throw ParseError("non-positive epsilon on a log axis");
            xmin = std::min(xmin, tx(x));
            xmax = std::max(xmax, tx(x));
            xs.insert(x);
        }
    }
    if (xmax == xmin) {
        xmin -= 1.0;
        xmax += 1.0;
    }

    constexpr double width = 720, height = 440;
    constexpr double left = 70, right = 170, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double x) { return left + (tx(x) - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return top + (1.0 - y) * plot_h; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    const char* axis_name = axis == PlotAxis::K     ? "sparsity k"
                            : axis == PlotAxis::Eps ? "epsilon (log scale)"
                            : axis == PlotAxis::P   ? "p"
                                                    : "q";

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty()) {
        svg << "<text x=\"" << detail::fmt2(left + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
            << detail::xml_escape(title) << "</text>\n";
    }
    svg << "<g class=\"axes\" stroke=\"black\">\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\"/>\n";
    svg << "</g>\n";

    svg << "<g class=\"yticks\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double y = i / 5.0;
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << detail::fmt2(py(y)) << "\" x2=\"" << left
            << "\" y2=\"" << detail::fmt2(py(y)) << "\" stroke=\"black\"/>";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << detail::fmt2(py(y) + 4)
            << "\" text-anchor=\"end\">" << detail::fmt2(y) << "</text>\n";
    }
    svg << "</g>\n";

    svg << "<g class=\"xticks\">\n";
    const std::vector<double> xv(xs.begin(), xs.end());
    const std::size_t stride = std::max<std::size_t>(1, (xv.size() + 12) / 13);
    for (std::size_t i = 0; i < xv.size(); i += stride) {
        const double x = xv[i];
        char label[32];
        std::snprintf(label, sizeof(label), "%g", x);
        svg << "<line x1=\"" << detail::fmt2(px(x)) << "\" y1=\"" << top + plot_h << "\" x2=\""
            << detail::fmt2(px(x)) << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>";
        svg << "<text x=\"" << detail::fmt2(px(x)) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\">" << label << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text x=\"" << detail::fmt2(left + plot_w / 2) << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\">" << axis_name << "</text>\n";
    svg << "<text x=\"18\" y=\"" << detail::fmt2(top + plot_h / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << detail::fmt2(top + plot_h / 2)
        << ")\">success rate</text>\n";

    for (std::size_t s = 0; s < order.size(); ++s) {
        const char* color = palette[s % std::size(palette)];
        svg << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\" points=\"";
        const auto& pts = series[order[s]];
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) svg << ' ';
            svg << detail::fmt2(px(pts[i].first)) << ',' << detail::fmt2(py(pts[i].second));
        }
        svg << "\"/>\n";
    }

    svg << "<g class=\"legend\">\n";
    for (std::size_t s = 0; s < order.size(); ++s) {
        const char* color = palette[s % std::size(palette)];
        const double y = top + 10 + 20.0 * static_cast<double>(s);
        const double x = left + plot_w + 15;
        svg << "<g class=\"legend-entry\"><line x1=\"" << detail::fmt2(x) << "\" y1=\"" << detail::fmt2(y)
            << "\" x2=\"" << detail::fmt2(x + 24) << "\" y2=\"" << detail::fmt2(y) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/><text x=\"" << detail::fmt2(x + 30) << "\" y=\""
            << detail::fmt2(y + 4) << "\">" << detail::xml_escape(order[s]) << "</text></g>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

} // namespace rwl1
