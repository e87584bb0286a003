#include "fishnet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace fishnet {
namespace {

constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
const char* const kDash[] = {"", "6,3", "2,2", "8,3,2,3"};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[32];
    if (v == 0.0) {
        return "0";
    }
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string escape(const std::string& s)
{
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

// Round step of 1, 2 or 5 times a power of ten giving about `target` ticks.
double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1 : f < 3.5 ? 2 : f < 7.5 ? 5 : 10) * mag;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad()
    {
        if (!(hi > lo)) {
            const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
            lo -= d;
            hi += d;
        }
    }
};

}  // namespace

std::string render_svg(const PlotSpec& spec)
{
    Range xr, yr;
    for (const auto& s : spec.series) {
        for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
            if (std::isfinite(s.x[k]) && std::isfinite(s.y[k])) {
                xr.add(s.x[k]);
                yr.add(s.y[k]);
            }
        }
    }
    if (!(xr.hi >= xr.lo)) {
        throw std::runtime_error("plot '" + spec.title + "': no finite data");
    }
    xr.pad();
    yr.pad();
    const double xs = nice_step(xr.hi - xr.lo, 6);
    const double ys = nice_step(yr.hi - yr.lo, 6);
    xr.lo = std::floor(xr.lo / xs) * xs;
    xr.hi = std::ceil(xr.hi / xs) * xs;
    yr.lo = std::floor(yr.lo / ys) * ys;
    yr.hi = std::ceil(yr.hi / ys) * ys;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

    std::string o;
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
         "viewBox=\"0 0 720 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
    o += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" "
         "font-size=\"15\">" + escape(spec.title) + "</text>\n";

    // grid and ticks
    for (int k = 0;; ++k) {
        const double x = xr.lo + k * xs;
        if (x > xr.hi + 1e-9 * xs) {
            break;
        }
        const std::string X = fmt(px(x));
        o += "<line x1=\"" + X + "\" y1=\"" + fmt(kTop) + "\" x2=\"" + X + "\" y2=\"" +
             fmt(kTop + ph) + "\" stroke=\"#e0e0e0\"/>\n";
        o += "<text x=\"" + X + "\" y=\"" + fmt(kTop + ph + 18) +
             "\" text-anchor=\"middle\">" + tick_label(std::abs(x) < 1e-12 * xs ? 0.0 : x) +
             "</text>\n";
    }
    for (int k = 0;; ++k) {
        const double y = yr.lo + k * ys;
        if (y > yr.hi + 1e-9 * ys) {
            break;
        }
        const std::string Y = fmt(py(y));
        o += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + Y + "\" x2=\"" + fmt(kLeft + pw) +
             "\" y2=\"" + Y + "\" stroke=\"#e0e0e0\"/>\n";
        o += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(py(y) + 4) +
             "\" text-anchor=\"end\">" + tick_label(std::abs(y) < 1e-12 * ys ? 0.0 : y) +
             "</text>\n";
    }
    o += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(pw) +
         "\" height=\"" + fmt(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    o += "<text x=\"" + fmt(kLeft + pw / 2) + "\" y=\"" + fmt(kHeight - 14) +
         "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
    o += "<text transform=\"translate(20," + fmt(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(spec.y_label) + "</text>\n";

    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const auto& s = spec.series[i];
        const std::string color = kPalette[i % 8];
        const std::string dash = kDash[i % 4];
        if (s.markers) {
            for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
                if (std::isfinite(s.x[k]) && std::isfinite(s.y[k])) {
                    o += "<circle cx=\"" + fmt(px(s.x[k])) + "\" cy=\"" + fmt(py(s.y[k])) +
                         "\" r=\"2\" fill=\"" + color + "\"/>\n";
                }
            }
        }
        else {
            // Non-finite points break the line into separate runs.
            std::string pts;
            auto flush = [&] {
                if (!pts.empty()) {
                    o += "<polyline fill=\"none\" stroke=\"" + color +
                         "\" stroke-width=\"1.5\"" +
                         (dash[0] ? std::string(" stroke-dasharray=\"") + dash + "\"" : "") +
                         " points=\"" + pts + "\"/>\n";
                    pts.clear();
                }
            };
            for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
                if (std::isfinite(s.x[k]) && std::isfinite(s.y[k])) {
                    pts += (pts.empty() ? "" : " ") + fmt(px(s.x[k])) + "," + fmt(py(s.y[k]));
                }
                else {
                    flush();
                }
            }
            flush();
        }
        const double ly = kTop + 10 + 18 * static_cast<double>(i);
        const double lx = kLeft + pw + 12;
        if (s.markers) {
            o += "<circle cx=\"" + fmt(lx + 10) + "\" cy=\"" + fmt(ly) + "\" r=\"3\" fill=\"" +
                 color + "\"/>\n";
        }
        else {
            o += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 20) +
                 "\" y2=\"" + fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
        }
        o += "<text x=\"" + fmt(lx + 26) + "\" y=\"" + fmt(ly + 4) + "\">" + escape(s.name) +
             "</text>\n";
    }
    o += "</svg>\n";
    return o;
}

}  // namespace fishnet
