// Metrics CSV round-trip and static SVG line charts. Charts are rendered
// from parsed CSV rows only, so deleting an SVG and re-rendering it from
// its CSV is lossless.
#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "emix/trainer.hpp"

namespace emix {

inline constexpr const char* kMetricsHeader =
    "iter,source_risk,disparity,proxy,combined_risk,target_acc,a_distance";

inline void write_metrics_csv(std::ostream& os, const std::vector<IterationMetrics>& rows) {
    os << kMetricsHeader << "\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        os << buf;
    };
    for (const IterationMetrics& r : rows) {
        os << r.iteration << ",";
        put(r.source_risk);
        os << ",";
        put(r.disparity);
        os << ",";
        put(r.proxy);
        os << ",";
        put(r.combined_risk);
        os << ",";
        put(r.target_acc);
        os << ",";
        if (std::isfinite(r.a_distance)) put(r.a_distance);
        os << "\n";
    }
}

inline std::vector<IterationMetrics> read_metrics_csv(std::istream& is) {
    std::vector<IterationMetrics> rows;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("metrics csv: missing header");
    if (line != kMetricsHeader) throw std::invalid_argument("metrics csv: unexpected header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        while (cells.size() < 7) cells.emplace_back();  // trailing empty a_distance
        IterationMetrics r;
        r.iteration = std::stoi(cells[0]);
        r.source_risk = std::stod(cells[1]);
        r.disparity = std::stod(cells[2]);
        r.proxy = std::stod(cells[3]);
        r.combined_risk = std::stod(cells[4]);
        r.target_acc = std::stod(cells[5]);
        r.a_distance = cells[6].empty() ? std::numeric_limits<double>::quiet_NaN()
                                        : std::stod(cells[6]);
        rows.push_back(r);
    }
    return rows;
}

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

inline const std::vector<std::string>& chart_palette() {
    static const std::vector<std::string> p{"#1f77b4", "#2ca02c", "#ff7f0e",
                                            "#8c564b", "#9467bd", "#d62728"};
    return p;
}

inline std::string variant_color(const std::string& variant) {
    if (variant == "none") return "#1f77b4";
    if (variant == "t") return "#2ca02c";
    if (variant == "tm") return "#ff7f0e";
    if (variant == "stm") return "#8c564b";
    if (variant == "ste") return "#9467bd";
    return "#d62728";
}

namespace detail {

inline std::string fmt_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// One chart panel drawn at the given offset into the parent SVG.
inline void render_panel(std::ostringstream& os, double ox, double oy, double w, double h,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label, const std::vector<Series>& series) {
    const double ml = 52, mr = 14, mt = 28, mb = 38;
    const double px = ox + ml, py = oy + mt, pw = w - ml - mr, ph = h - mt - mb;

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool any = false;
    for (const Series& s : series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(y)) continue;
            if (!any) {
                xmin = xmax = x;
                ymin = ymax = y;
                any = true;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double x) { return px + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return py + ph - (y - ymin) / (ymax - ymin) * ph; };

    os << "<rect x='" << px << "' y='" << py << "' width='" << pw << "' height='" << ph
       << "' fill='white' stroke='#444'/>\n";
    os << "<text x='" << ox + w / 2 << "' y='" << oy + 18
       << "' text-anchor='middle' font-size='13' font-family='sans-serif'>" << title
       << "</text>\n";
    os << "<text x='" << px + pw / 2 << "' y='" << py + ph + 30
       << "' text-anchor='middle' font-size='11' font-family='sans-serif'>" << x_label
       << "</text>\n";
    os << "<text x='" << ox + 14 << "' y='" << py + ph / 2
       << "' text-anchor='middle' font-size='11' font-family='sans-serif' transform='rotate(-90 "
       << ox + 14 << " " << py + ph / 2 << ")'>" << y_label << "</text>\n";

    for (int t = 0; t <= 4; ++t) {
        const double fx = xmin + (xmax - xmin) * t / 4.0;
        const double fy = ymin + (ymax - ymin) * t / 4.0;
        os << "<line x1='" << sx(fx) << "' y1='" << py + ph << "' x2='" << sx(fx) << "' y2='"
           << py + ph + 4 << "' stroke='#444'/>\n";
        os << "<text x='" << sx(fx) << "' y='" << py + ph + 16
           << "' text-anchor='middle' font-size='9' font-family='sans-serif'>" << fmt_num(fx)
           << "</text>\n";
        os << "<line x1='" << px - 4 << "' y1='" << sy(fy) << "' x2='" << px << "' y2='" << sy(fy)
           << "' stroke='#444'/>\n";
        os << "<text x='" << px - 6 << "' y='" << sy(fy) + 3
           << "' text-anchor='end' font-size='9' font-family='sans-serif'>" << fmt_num(fy)
           << "</text>\n";
    }

    for (const Series& s : series) {
        os << "<polyline fill='none' stroke='" << s.color << "' stroke-width='1.5' points='";
        bool first = true;
        for (auto [x, y] : s.points) {
            if (!std::isfinite(y)) continue;
            if (!first) os << " ";
            os << fmt_num(sx(x)) << "," << fmt_num(sy(y));
            first = false;
        }
        os << "'/>\n";
    }
    double ly = py + 12;
    for (const Series& s : series) {
        os << "<line x1='" << px + pw - 86 << "' y1='" << ly - 3 << "' x2='" << px + pw - 70
           << "' y2='" << ly - 3 << "' stroke='" << s.color << "' stroke-width='2'/>\n";
        os << "<text x='" << px + pw - 66 << "' y='" << ly
           << "' font-size='9' font-family='sans-serif'>" << s.label << "</text>\n";
        ly += 12;
    }
}

}  // namespace detail

inline std::string svg_line_chart(const std::string& title, const std::string& x_label,
                                  const std::string& y_label, const std::vector<Series>& series,
                                  int width = 560, int height = 400) {
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' version='1.1' width='" << width << "' height='"
       << height << "' viewBox='0 0 " << width << " " << height << "'>\n";
    detail::render_panel(os, 0, 0, width, height, title, x_label, y_label, series);
    os << "</svg>\n";
    return os.str();
}

// Side-by-side panels, combined-risk curve left and accuracy curve right.
inline std::string svg_two_panel(const std::string& left_title, const std::string& right_title,
                                 const std::vector<Series>& left,
                                 const std::vector<Series>& right, int width = 980,
                                 int height = 400) {
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' version='1.1' width='" << width << "' height='"
       << height << "' viewBox='0 0 " << width << " " << height << "'>\n";
    detail::render_panel(os, 0, 0, width / 2.0, height, left_title, "iteration", "combined risk",
                         left);
    detail::render_panel(os, width / 2.0, 0, width / 2.0, height, right_title, "iteration",
                         "target accuracy", right);
    os << "</svg>\n";
    return os.str();
}

inline Series metrics_series(const std::vector<IterationMetrics>& rows, const std::string& label,
                             const std::string& color, double IterationMetrics::* field) {
    Series s;
    s.label = label;
    s.color = color;
    for (const IterationMetrics& r : rows)
        s.points.emplace_back(static_cast<double>(r.iteration), r.*field);
    return s;
}

}  // namespace emix
