#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entrovel::svg {

enum class Scale { linear, log };

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// One drawn dataset. `markers` draws a circle per point; `line` a polyline.
struct PlotSeries {
    enum class Style { markers, line };

    std::string label;
    std::vector<Point> points;
    Style style = Style::line;
    bool dashed = false;
};

struct Panel {
    std::string x_label;
    std::string y_label;
    Scale y_scale = Scale::linear;
    std::vector<PlotSeries> series;
};

/// Descriptor of a complete figure; panels stack vertically.
struct Figure {
    std::string title;
    std::vector<Panel> panels;
};

inline constexpr double canvas_width = 800.0;
inline constexpr double canvas_height = 500.0;
inline constexpr double margin_left = 80.0;
inline constexpr double margin_right = 170.0;
inline constexpr double margin_top = 45.0;
inline constexpr double margin_bottom = 50.0;
inline constexpr double panel_gap = 55.0;

struct Rect {
    double x = 0.0, y = 0.0, width = 0.0, height = 0.0;

    [[nodiscard]] bool contains(double px, double py) const {
        return px >= x && px <= x + width && py >= y && py <= y + height;
    }
};

/// Pixel rectangle of panel `index` out of `count`.
inline Rect plot_area(std::size_t index, std::size_t count) {
    const double total = canvas_height - margin_top - margin_bottom - panel_gap * static_cast<double>(count - 1);
    const double h = total / static_cast<double>(count);
    return {margin_left, margin_top + static_cast<double>(index) * (h + panel_gap), canvas_width - margin_left - margin_right, h};
}

/// Affine map from (possibly log10-transformed) data coordinates to pixels.
/// `lo` and `hi` are given in transformed space (log10 for a log axis).
class AxisMap {
public:
    AxisMap(double lo, double hi, double px_from, double px_to, Scale scale)
        : lo_(lo), hi_(hi), px_from_(px_from), px_to_(px_to), scale_(scale) {
        if (!(hi_ > lo_)) throw std::invalid_argument("axis range must be non-empty");
    }

    /// Builds a padded range covering `values`; a degenerate range is widened.
    static AxisMap fit(std::vector<double> values, double px_from, double px_to, Scale scale) {
        if (values.empty()) values = {0.0, 1.0};
        if (scale == Scale::log)
            for (auto& v : values) {
                if (!(v > 0.0)) throw std::invalid_argument("log axis requires positive values");
                v = std::log10(v);
            }
        auto [mn, mx] = std::minmax_element(values.begin(), values.end());
        double lo = *mn, hi = *mx;
        if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
            const double half = scale == Scale::log ? 0.5 : std::max(1.0, std::abs(hi) * 0.1);
            lo -= half;
            hi += half;
        }
        const double pad = 0.05 * (hi - lo);
        return AxisMap(lo - pad, hi + pad, px_from, px_to, scale);
    }

    [[nodiscard]] double to_pixel(double v) const {
        const double u = scale_ == Scale::log ? std::log10(v) : v;
        return px_from_ + (u - lo_) / (hi_ - lo_) * (px_to_ - px_from_);
    }

    [[nodiscard]] Scale scale() const { return scale_; }
    /// Data-space bounds (untransformed).
    [[nodiscard]] double data_lo() const { return scale_ == Scale::log ? std::pow(10.0, lo_) : lo_; }
    [[nodiscard]] double data_hi() const { return scale_ == Scale::log ? std::pow(10.0, hi_) : hi_; }

    /// Tick positions in data space.
    [[nodiscard]] std::vector<double> ticks() const {
        if (scale_ == Scale::log && hi_ - lo_ >= 1.0) {
            const double step = std::max(1.0, nice_step((hi_ - lo_) / 5.0));
            std::vector<double> out;
            for (double e = std::ceil(lo_ / step) * step; e <= hi_ + 1e-9; e += step) out.push_back(std::pow(10.0, e));
            return out;
        }
        const double lo = data_lo(), hi = data_hi();
        const double step = nice_step((hi - lo) / 5.0);
        std::vector<double> out;
        for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step)
            out.push_back(std::abs(v) < 1e-9 * step ? 0.0 : v);
        return out;
    }

    [[nodiscard]] static std::string tick_label(double v, const std::vector<double>& ticks) {
        double step = 1.0;
        if (ticks.size() >= 2) step = std::abs(ticks[1] - ticks[0]);
        const bool log_like = ticks.size() >= 2 && ticks[0] > 0 && std::abs(ticks[1] / ticks[0] - 10.0) < 1e-6;
        char buf[32];
        if (log_like || step >= 1.0) {
            std::snprintf(buf, sizeof buf, "%g", v);
        } else {
            const int decimals = static_cast<int>(std::ceil(-std::log10(step) - 1e-9));
            std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
        }
        return buf;
    }

private:
    static double nice_step(double raw) {
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        const double f = raw / mag;
        const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
        return nice * mag;
    }

    double lo_, hi_, px_from_, px_to_;
    Scale scale_;
};

inline std::string escape(std::string_view s) {
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

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf) == "-0.00" ? "0.00" : buf;
}

inline constexpr std::array<const char*, 8> palette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                        "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace detail

/// Axis maps used to draw `panel` inside `area`.
inline std::pair<AxisMap, AxisMap> panel_axes(const Panel& panel, const Rect& area) {
    std::vector<double> xs, ys;
    for (const auto& s : panel.series)
        for (const auto& p : s.points) {
            xs.push_back(p.x);
            ys.push_back(p.y);
        }
    return {AxisMap::fit(xs, area.x, area.x + area.width, Scale::linear),
            AxisMap::fit(ys, area.y + area.height, area.y, panel.y_scale)};
}

/// Renders a deterministic, standalone SVG document (800x500 canvas).
inline std::string render(const Figure& fig) {
    using detail::num;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" viewBox=\"0 0 800 500\" "
           "font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(canvas_width / 2) + "\" y=\"26\" text-anchor=\"middle\" font-size=\"16\">" +
           escape(fig.title) + "</text>\n";

    const std::size_t count = std::max<std::size_t>(1, fig.panels.size());
    std::size_t colour = 0;
    for (std::size_t pi = 0; pi < fig.panels.size(); ++pi) {
        const Panel& panel = fig.panels[pi];
        const Rect area = plot_area(pi, count);
        const auto [xmap, ymap] = panel_axes(panel, area);
        const double bottom = area.y + area.height;

        out += "<g class=\"panel\">\n";
        out += "<rect class=\"plot-area\" x=\"" + num(area.x) + "\" y=\"" + num(area.y) + "\" width=\"" + num(area.width) +
               "\" height=\"" + num(area.height) + "\" fill=\"none\" stroke=\"#333333\"/>\n";

        const auto xt = xmap.ticks();
        for (double v : xt) {
            const double px = xmap.to_pixel(v);
            out += "<line x1=\"" + num(px) + "\" y1=\"" + num(bottom) + "\" x2=\"" + num(px) + "\" y2=\"" + num(bottom + 5) +
                   "\" stroke=\"#333333\"/>\n";
            out += "<text x=\"" + num(px) + "\" y=\"" + num(bottom + 18) + "\" text-anchor=\"middle\">" +
                   escape(AxisMap::tick_label(v, xt)) + "</text>\n";
        }
        const auto yt = ymap.ticks();
        for (double v : yt) {
            const double py = ymap.to_pixel(v);
            out += "<line x1=\"" + num(area.x) + "\" y1=\"" + num(py) + "\" x2=\"" + num(area.x + area.width) + "\" y2=\"" +
                   num(py) + "\" stroke=\"#dddddd\"/>\n";
            out += "<text x=\"" + num(area.x - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" +
                   escape(AxisMap::tick_label(v, yt)) + "</text>\n";
        }
        out += "<text x=\"" + num(area.x + area.width / 2) + "\" y=\"" + num(bottom + 36) + "\" text-anchor=\"middle\">" +
               escape(panel.x_label) + "</text>\n";
        const double ymid = area.y + area.height / 2;
        out += "<text x=\"" + num(area.x - 58) + "\" y=\"" + num(ymid) + "\" text-anchor=\"middle\" transform=\"rotate(-90 " +
               num(area.x - 58) + " " + num(ymid) + ")\">" + escape(panel.y_label) + "</text>\n";

        double legend_y = area.y + 12;
        const double legend_x = area.x + area.width + 15;
        for (const auto& s : panel.series) {
            const std::string stroke = detail::palette[colour++ % detail::palette.size()];
            const std::string dash = s.dashed ? " stroke-dasharray=\"8 5\"" : "";
            if (s.style == PlotSeries::Style::line) {
                std::string pts;
                for (const auto& p : s.points) {
                    if (!pts.empty()) pts += ' ';
                    pts += num(xmap.to_pixel(p.x)) + "," + num(ymap.to_pixel(p.y));
                }
                out += "<polyline class=\"series\" fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"2\"" + dash +
                       " points=\"" + pts + "\"/>\n";
                out += "<line x1=\"" + num(legend_x) + "\" y1=\"" + num(legend_y - 4) + "\" x2=\"" + num(legend_x + 20) +
                       "\" y2=\"" + num(legend_y - 4) + "\" stroke=\"" + stroke + "\" stroke-width=\"2\"" + dash + "/>\n";
            } else {
                for (const auto& p : s.points)
                    out += "<circle class=\"point\" cx=\"" + num(xmap.to_pixel(p.x)) + "\" cy=\"" + num(ymap.to_pixel(p.y)) +
                           "\" r=\"3\" fill=\"" + stroke + "\"/>\n";
                out += "<circle cx=\"" + num(legend_x + 10) + "\" cy=\"" + num(legend_y - 4) + "\" r=\"3\" fill=\"" + stroke +
                       "\"/>\n";
            }
            out += "<text x=\"" + num(legend_x + 26) + "\" y=\"" + num(legend_y) + "\">" + escape(s.label) + "</text>\n";
            legend_y += 18;
        }
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace entrovel::svg
