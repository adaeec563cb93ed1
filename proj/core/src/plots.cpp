#include "mfspec/plots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mfspec::plot {

namespace {

constexpr double kWidth = 720.0;
constexpr double kPanelHeight = 420.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool valid() const { return lo <= hi; }
    void pad() {
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }
double tr(double v, bool log) { return log ? std::log10(v) : v; }

std::vector<double> ticks(const Range& r) {
    const double span = r.hi - r.lo;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> out;
    for (double t = std::ceil(r.lo / step) * step; t <= r.hi + 1e-12 * span; t += step) {
        out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    }
    return out;
}

// Renders one panel at vertical offset `y0`; returns false when empty.
bool render_panel(std::ostringstream& os, const Axes& axes, const std::vector<Curve>& curves, double y0) {
    Range xr, yr;
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < std::min(c.x.size(), c.y.size()); ++i) {
            if (usable(c.x[i], axes.log_x) && usable(c.y[i], axes.log_y)) {
                xr.add(tr(c.x[i], axes.log_x));
                yr.add(tr(c.y[i], axes.log_y));
            }
        }
    }
    const double pw = kWidth - kLeft - kRight;
    const double ph = kPanelHeight - kTop - kBottom;
    const double px0 = kLeft;
    const double py0 = y0 + kTop;
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(y0 + 24)
       << "\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(axes.title) << "</text>\n";
    os << "<rect x=\"" << num(px0) << "\" y=\"" << num(py0) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
       << "\" fill=\"none\" stroke=\"#333\"/>\n";
    if (!xr.valid()) {
        os << "<text x=\"" << num(px0 + pw / 2) << "\" y=\"" << num(py0 + ph / 2)
           << "\" text-anchor=\"middle\" font-size=\"14\">no data</text>\n";
        return false;
    }
    xr.pad();
    yr.pad();
    const auto sx = [&](double v) { return px0 + (tr(v, axes.log_x) - xr.lo) / (xr.hi - xr.lo) * pw; };
    const auto sy = [&](double v) { return py0 + ph - (tr(v, axes.log_y) - yr.lo) / (yr.hi - yr.lo) * ph; };
    for (double t : ticks(xr)) {
        const double x = px0 + (t - xr.lo) / (xr.hi - xr.lo) * pw;
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(py0 + ph) << "\" x2=\"" << num(x) << "\" y2=\""
           << num(py0 + ph + 5) << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << num(x) << "\" y=\"" << num(py0 + ph + 18) << "\" text-anchor=\"middle\" font-size=\"11\">"
           << (axes.log_x ? "1e" : "") << num(t) << "</text>\n";
    }
    for (double t : ticks(yr)) {
        const double y = py0 + ph - (t - yr.lo) / (yr.hi - yr.lo) * ph;
        os << "<line x1=\"" << num(px0 - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(px0) << "\" y2=\"" << num(y)
           << "\" stroke=\"#333\"/>\n";
        os << "<text x=\"" << num(px0 - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
           << (axes.log_y ? "1e" : "") << num(t) << "</text>\n";
    }
    os << "<text x=\"" << num(px0 + pw / 2) << "\" y=\"" << num(py0 + ph + 40)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(axes.x_label) << "</text>\n";
    os << "<text x=\"20\" y=\"" << num(py0 + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 "
       << num(py0 + ph / 2) << ")\">" << xml_escape(axes.y_label) << "</text>\n";
    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const auto& c = curves[ci];
        const char* color = kPalette[ci % std::size(kPalette)];
        std::ostringstream pts;
        for (std::size_t i = 0; i < std::min(c.x.size(), c.y.size()); ++i) {
            if (!usable(c.x[i], axes.log_x) || !usable(c.y[i], axes.log_y)) continue;
            const double x = sx(c.x[i]);
            const double y = sy(c.y[i]);
            if (c.markers) {
                os << "<circle cx=\"" << num(x) << "\" cy=\"" << num(y) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
                if (i < c.point_labels.size()) {
                    os << "<text x=\"" << num(x + 5) << "\" y=\"" << num(y - 4) << "\" font-size=\"9\">"
                       << xml_escape(c.point_labels[i]) << "</text>\n";
                }
            } else {
                pts << num(x) << ',' << num(y) << ' ';
            }
        }
        if (!c.markers) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << pts.str()
               << "\"/>\n";
        }
        const double ly = py0 + 14.0 + 16.0 * static_cast<double>(ci);
        os << "<rect x=\"" << num(px0 + pw + 10) << "\" y=\"" << num(ly - 8) << "\" width=\"10\" height=\"10\" fill=\""
           << color << "\"/>\n";
        os << "<text x=\"" << num(px0 + pw + 25) << "\" y=\"" << num(ly + 1) << "\" font-size=\"11\">"
           << xml_escape(c.name) << "</text>\n";
    }
    return true;
}

std::string open_svg(double height) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(height)
       << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(height) << "\" font-family=\"sans-serif\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return os.str();
}

}  // namespace

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string placeholder(const std::string& title) {
    std::ostringstream os;
    os << open_svg(kPanelHeight);
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title)
       << "</text>\n";
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"" << num(kPanelHeight / 2)
       << "\" text-anchor=\"middle\" font-size=\"14\">no data</text>\n</svg>\n";
    return os.str();
}

std::string line_chart(const Axes& axes, const std::vector<Curve>& curves) {
    std::ostringstream body;
    if (!render_panel(body, axes, curves, 0.0)) {
        return placeholder(axes.title);
    }
    return open_svg(kPanelHeight) + body.str() + "</svg>\n";
}

std::string stacked_panels(const std::string& title, const std::vector<Axes>& axes,
                           const std::vector<std::vector<Curve>>& panels) {
    if (panels.empty()) {
        return placeholder(title);
    }
    std::ostringstream body;
    body << "<text x=\"" << num(kWidth / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"18\">" << xml_escape(title)
         << "</text>\n";
    bool any = false;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const Axes a = i < axes.size() ? axes[i] : Axes{};
        any = render_panel(body, a, panels[i], 30.0 + kPanelHeight * static_cast<double>(i)) || any;
    }
    if (!any) {
        return placeholder(title);
    }
    return open_svg(30.0 + kPanelHeight * static_cast<double>(panels.size())) + body.str() + "</svg>\n";
}

std::string bar_chart(const std::string& title, const std::string& value_label,
                      const std::vector<std::string>& labels, const std::vector<double>& values) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < std::min(labels.size(), values.size()); ++i) {
        if (std::isfinite(values[i])) idx.push_back(i);
    }
    if (idx.empty()) {
        return placeholder(title);
    }
    const double row = 18.0;
    const double left = 170.0;
    const double plot_w = kWidth - left - 60.0;
    const double height = kTop + kBottom + row * static_cast<double>(idx.size());
    double lo = 0.0, hi = 0.0;
    for (auto i : idx) {
        lo = std::min(lo, values[i]);
        hi = std::max(hi, values[i]);
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;
    const auto sx = [&](double v) { return left + (v - lo) / (hi - lo) * plot_w; };
    std::ostringstream os;
    os << open_svg(height);
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title)
       << "</text>\n";
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const std::size_t i = idx[r];
        const double y = kTop + row * static_cast<double>(r);
        const double x0 = sx(std::min(0.0, values[i]));
        const double x1 = sx(std::max(0.0, values[i]));
        os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 12) << "\" text-anchor=\"end\" font-size=\"11\">"
           << xml_escape(labels[i]) << "</text>\n";
        os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y + 2) << "\" width=\"" << num(std::max(x1 - x0, 0.5))
           << "\" height=\"" << num(row - 4) << "\" fill=\"" << kPalette[0] << "\"/>\n";
        os << "<text x=\"" << num(x1 + 4) << "\" y=\"" << num(y + 12) << "\" font-size=\"10\">" << num(values[i])
           << "</text>\n";
    }
    os << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(height - 15)
       << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(value_label) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

std::vector<Curve> decade_shifted_curves(const FluctuationSurface& surface, const std::vector<double>& qs) {
    std::vector<Curve> out;
    int shift = 0;
    for (double q : qs) {
        const auto it = std::find(surface.q.begin(), surface.q.end(), q);
        if (it == surface.q.end()) continue;
        const auto qi = static_cast<std::size_t>(it - surface.q.begin());
        Curve c;
        std::ostringstream name;
        name << "q=" << q;
        c.name = name.str();
        const double factor = std::pow(10.0, shift);
        for (std::size_t si = 0; si < surface.scales.size(); ++si) {
            c.x.push_back(static_cast<double>(surface.scales[si]));
            c.y.push_back(surface.at(qi, si) * factor);
        }
        out.push_back(std::move(c));
        ++shift;
    }
    return out;
}

}  // namespace mfspec::plot
