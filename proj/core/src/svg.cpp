#include "streamlabel/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace streamlabel {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Keeps long curves to a few hundred vertices.
std::vector<std::size_t> sample_indices(std::size_t n) {
    std::vector<std::size_t> idx;
    const std::size_t step = std::max<std::size_t>(1, n / 400);
    for (std::size_t i = 0; i < n; i += step) idx.push_back(i);
    if (n > 0 && idx.back() != n - 1) idx.push_back(n - 1);
    return idx;
}

}  // namespace

std::string render_svg(const LineChart& chart) {
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -ymin;
    std::size_t xmax = 1;
    for (const auto& s : chart.series) {
        xmax = std::max(xmax, s.y.size());
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            const double hw = i < s.half_width.size() ? s.half_width[i] : 0.0;
            if (!std::isfinite(s.y[i])) continue;
            ymin = std::min(ymin, s.y[i] - hw);
            ymax = std::max(ymax, s.y[i] + hw);
        }
    }
    if (!std::isfinite(ymin)) {
        ymin = 0.0;
        ymax = 1.0;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (xmax > 1 ? (x - 1.0) / double(xmax - 1) : 0.0) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
           num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(chart.title) + "</text>\n";
    out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) + "\" height=\"" +
           num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        const double xv = 1.0 + double(xmax - 1) * i / 4.0;
        out += "<line x1=\"" + num(kLeft - 4) + "\" x2=\"" + num(kLeft) + "\" y1=\"" + num(py(yv)) +
               "\" y2=\"" + num(py(yv)) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(yv) + 4) + "\" text-anchor=\"end\">" +
               tick(yv) + "</text>\n";
        out += "<line x1=\"" + num(px(xv)) + "\" x2=\"" + num(px(xv)) + "\" y1=\"" + num(kTop + ph) +
               "\" y2=\"" + num(kTop + ph + 4) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(kTop + ph + 16) + "\" text-anchor=\"middle\">" +
               tick(std::round(xv)) + "</text>\n";
    }
    out += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) + "\" text-anchor=\"middle\">" +
           escape(chart.x_label) + "</text>\n";
    out += "<text transform=\"translate(16," + num(kTop + ph / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">" + escape(chart.y_label) + "</text>\n";

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const Series& s = chart.series[k];
        const std::string color = kPalette[k % (sizeof kPalette / sizeof *kPalette)];
        const auto idx = sample_indices(s.y.size());
        if (!s.half_width.empty() && !idx.empty()) {
            std::string pts;
            for (std::size_t i : idx) {
                pts += num(px(double(i + 1))) + "," + num(py(s.y[i] + s.half_width[i])) + " ";
            }
            for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
                pts += num(px(double(*it + 1))) + "," + num(py(s.y[*it] - s.half_width[*it])) + " ";
            }
            out += "<polygon points=\"" + pts + "\" fill=\"" + color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
        }
        std::string pts;
        for (std::size_t i : idx) pts += num(px(double(i + 1))) + "," + num(py(s.y[i])) + " ";
        out += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
        const double ly = kTop + 10 + 18.0 * double(k);
        out += "<line x1=\"" + num(kLeft + pw + 10) + "\" x2=\"" + num(kLeft + pw + 30) + "\" y1=\"" + num(ly) +
               "\" y2=\"" + num(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + num(kLeft + pw + 34) + "\" y=\"" + num(ly + 4) + "\">" + escape(s.name) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace streamlabel
