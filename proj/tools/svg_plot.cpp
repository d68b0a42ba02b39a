#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace dms::plot {

namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 72, kRight = 24, kTop = 40, kBottom = 56;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

struct Axis {
    double lo = 0, hi = 1;
    double scale(double v, double pixel_lo, double pixel_hi) const {
        if (hi == lo) return 0.5 * (pixel_lo + pixel_hi);
        return pixel_lo + (v - lo) / (hi - lo) * (pixel_hi - pixel_lo);
    }
};

std::vector<double> ticks(const Axis& ax, bool log_axis) {
    std::vector<double> out;
    if (log_axis) {
        for (int e = static_cast<int>(std::floor(ax.lo)); e <= static_cast<int>(std::ceil(ax.hi)); ++e)
            if (e >= ax.lo - 1e-9 && e <= ax.hi + 1e-9) out.push_back(e);
        return out;
    }
    const double span = ax.hi - ax.lo;
    if (span <= 0) return {ax.lo};
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0})
        if (raw <= mult * mag) { step = mult * mag; break; }
    for (double v = std::ceil(ax.lo / step) * step; v <= ax.hi + 1e-9 * span; v += step)
        out.push_back(v);
    return out;
}

}  // namespace

void render_svg(std::ostream& os, const PlotSpec& spec) {
    Axis x, y;
    x.lo = y.lo = std::numeric_limits<double>::infinity();
    x.hi = y.hi = -std::numeric_limits<double>::infinity();

    auto transform = [&](double q, double p) -> std::pair<double, double> {
        return spec.loglog ? std::pair<double, double>{std::log10(q), std::log10(p)}
                           : std::pair<double, double>{q, p};
    };

    for (const Series& s : spec.series)
        for (const auto& [q, p] : s.points) {
            if (spec.loglog && (q <= 0 || p <= 0)) continue;
            const auto [tx, ty] = transform(q, p);
            x.lo = std::min(x.lo, tx); x.hi = std::max(x.hi, tx);
            y.lo = std::min(y.lo, ty); y.hi = std::max(y.hi, ty);
        }
    if (!(x.lo <= x.hi)) { x = {0, 1}; y = {0, 1}; }
    const double xpad = (x.hi - x.lo) * 0.04 + 1e-12, ypad = (y.hi - y.lo) * 0.04 + 1e-12;
    x.lo -= xpad; x.hi += xpad; y.lo -= ypad; y.hi += ypad;

    auto px = [&](double v) { return x.scale(v, kLeft, kWidth - kRight); };
    auto py = [&](double v) { return y.scale(v, kHeight - kBottom, kTop); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"15\">" << spec.title << "</text>\n";

    // frame
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
       << "\" height=\"" << kHeight - kTop - kBottom
       << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

    for (double t : ticks(x, spec.loglog)) {
        const double gx = px(t);
        os << "<line x1=\"" << gx << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << gx
           << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << gx << "\" y=\"" << kHeight - kBottom + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << (spec.loglog ? "1e" + fmt(t) : fmt(t)) << "</text>\n";
    }
    for (double t : ticks(y, spec.loglog)) {
        const double gy = py(t);
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << gy << "\" x2=\"" << kLeft << "\" y2=\""
           << gy << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << gy + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << (spec.loglog ? "1e" + fmt(t) : fmt(t)) << "</text>\n";
    }
    os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">q</text>\n";
    os << "<text x=\"18\" y=\"" << kHeight / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
          "transform=\"rotate(-90 18 " << kHeight / 2 << ")\">p</text>\n";

    double legend_y = kTop + 16;
    for (const Series& s : spec.series) {
        std::string path;
        bool first = true;
        for (const auto& [q, p] : s.points) {
            if (spec.loglog && (q <= 0 || p <= 0)) continue;
            const auto [tx, ty] = transform(q, p);
            path += (first ? "M" : "L") + fmt(px(tx)) + ' ' + fmt(py(ty));
            first = false;
            if (!s.line_only)
                os << "<circle cx=\"" << px(tx) << "\" cy=\"" << py(ty)
                   << "\" r=\"2.2\" fill=\"" << s.color << "\" fill-opacity=\"0.75\"/>\n";
        }
        if (s.line_only && !path.empty())
            os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << s.color
               << "\" stroke-width=\"1.6\"/>\n";
        if (!s.label.empty()) {
            os << "<rect x=\"" << kWidth - kRight - 170 << "\" y=\"" << legend_y - 9
               << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
            os << "<text x=\"" << kWidth - kRight - 154 << "\" y=\"" << legend_y
               << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
            legend_y += 18;
        }
    }

    if (!spec.annotation.empty())
        os << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 18
           << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">" << spec.annotation
           << "</text>\n";
    os << "</svg>\n";
}

}  // namespace dms::plot
