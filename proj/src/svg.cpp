#include "capsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace capsim {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 640.0;   // legend sits to the right of this
constexpr double kTop = 40.0;
constexpr double kBottom = 550.0;
constexpr int kTicks = 10;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                "#9467bd", "#ff7f0e", "#8c564b"};
constexpr int kPaletteSize = 6;

std::string fmt(double v, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void include(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finalize() {
        if (!(lo <= hi)) {  // no data
            lo = 0.0;
            hi = 1.0;
        }
        if (lo == hi) {  // flat series still needs an extent
            lo -= 0.5;
            hi += 0.5;
        }
    }
    double frac(double v) const { return (v - lo) / (hi - lo); }
};

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<ChartSeries>& series) {
    Range xr, yr;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("chart series with mismatched x/y lengths");
        for (double v : s.x) xr.include(v);
        for (double v : s.y) yr.include(v);
    }
    xr.finalize();
    yr.finalize();

    const auto px = [&](double v) { return kLeft + xr.frac(v) * (kRight - kLeft); };
    const auto py = [&](double v) { return kBottom - yr.frac(v) * (kBottom - kTop); };

    std::string out;
    out.reserve(1 << 15);
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
           "viewBox=\"0 0 800 600\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
    out += "<text x=\"" + fmt((kLeft + kRight) / 2, "%.0f") +
           "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
           "text-anchor=\"middle\">" + escape(title) + "</text>\n";

    // frame
    out += "<rect x=\"" + fmt(kLeft, "%.0f") + "\" y=\"" + fmt(kTop, "%.0f") +
           "\" width=\"" + fmt(kRight - kLeft, "%.0f") + "\" height=\"" +
           fmt(kBottom - kTop, "%.0f") + "\" fill=\"none\" stroke=\"#333333\"/>\n";

    for (int i = 0; i < kTicks; ++i) {
        const double f = static_cast<double>(i) / (kTicks - 1);
        const double xv = xr.lo + f * (xr.hi - xr.lo);
        const double yv = yr.lo + f * (yr.hi - yr.lo);
        const double xp = kLeft + f * (kRight - kLeft);
        const double yp = kBottom - f * (kBottom - kTop);
        out += "<line x1=\"" + fmt(xp, "%.2f") + "\" y1=\"" + fmt(kBottom, "%.0f") +
               "\" x2=\"" + fmt(xp, "%.2f") + "\" y2=\"" + fmt(kBottom + 5, "%.0f") +
               "\" stroke=\"#333333\"/>\n";
        out += "<text x=\"" + fmt(xp, "%.2f") + "\" y=\"" + fmt(kBottom + 18, "%.0f") +
               "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"middle\">" + fmt(xv, "%.3g") + "</text>\n";
        out += "<line x1=\"" + fmt(kLeft - 5, "%.0f") + "\" y1=\"" + fmt(yp, "%.2f") +
               "\" x2=\"" + fmt(kLeft, "%.0f") + "\" y2=\"" + fmt(yp, "%.2f") +
               "\" stroke=\"#333333\"/>\n";
        out += "<text x=\"" + fmt(kLeft - 8, "%.0f") + "\" y=\"" + fmt(yp + 4, "%.2f") +
               "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"end\">" + fmt(yv, "%.3g") + "</text>\n";
    }

    out += "<text x=\"" + fmt((kLeft + kRight) / 2, "%.0f") + "\" y=\"" +
           fmt(kHeight - 12, "%.0f") +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" +
           escape(x_label) + "</text>\n";
    out += "<text x=\"18\" y=\"" + fmt((kTop + kBottom) / 2, "%.0f") +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 " + fmt((kTop + kBottom) / 2, "%.0f") + ")\">" +
           escape(y_label) + "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i) {
            if (i) out += ' ';
            out += fmt(px(series[s].x[i]), "%.2f") + "," + fmt(py(series[s].y[i]), "%.2f");
        }
        out += "\"/>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % kPaletteSize];
        const double ly = kTop + 10 + 18.0 * static_cast<double>(s);
        out += "<line x1=\"" + fmt(kRight + 10, "%.0f") + "\" y1=\"" + fmt(ly, "%.1f") +
               "\" x2=\"" + fmt(kRight + 34, "%.0f") + "\" y2=\"" + fmt(ly, "%.1f") +
               "\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + fmt(kRight + 40, "%.0f") + "\" y=\"" + fmt(ly + 4, "%.1f") +
               "\" font-family=\"sans-serif\" font-size=\"12\">" +
               escape(series[s].label) + "</text>\n";
    }

    out += "</svg>\n";
    return out;
}

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<ChartSeries>& series) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    file << render_line_chart(title, x_label, y_label, series);
    if (!file) throw std::runtime_error("write failed: " + path);
}

}  // namespace capsim
