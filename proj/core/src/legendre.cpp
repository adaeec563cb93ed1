#include "mfspec/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace mfspec {

std::vector<double> scaling_function(const HurstCurve& h) {
    std::vector<double> tau(h.q.size());
    for (std::size_t i = 0; i < h.q.size(); ++i) {
        tau[i] = h.q[i] * h.h[i] - 1.0;
    }
    return tau;
}

SpectrumSummary legendre_points(const HurstCurve& h, bool drop_negative_f) {
    const std::size_t n = h.q.size();
    if (n < 5 || h.h.size() != n) {
        throw AnalysisError("Legendre transform needs at least 5 q values");
    }
    SpectrumSummary out;
    out.flavor = h.flavor;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? i : i + 1;
        const double dh = (h.h[hi] - h.h[lo]) / (h.q[hi] - h.q[lo]);
        const double q = h.q[i];
        const double pi = q * dh + h.h[i];
        // f = q pi - tau written so that a constant h gives exactly 1.
        const double f = q * (pi - h.h[i]) + 1.0;
        if (drop_negative_f && f < 0.0) {
            out.truncated = true;
            continue;
        }
        out.points.push_back({q, pi, f});
    }
    if (!out.points.empty()) {
        const auto m = spectrum_metrics(out);
        out.width = m.width;
        out.pi_peak = m.pi_peak;
    }
    return out;
}

SpectrumMetrics spectrum_metrics(const SpectrumSummary& summary) {
    const auto& pts = summary.points;
    if (pts.empty()) {
        throw AnalysisError("empty spectrum");
    }
    SpectrumMetrics m;
    const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                              [](const auto& a, const auto& b) { return a.pi < b.pi; });
    m.pi_min = lo->pi;
    m.pi_max = hi->pi;
    m.width = m.pi_max - m.pi_min;
    const auto top = std::max_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.f < b.f; });
    m.pi_peak = top->pi;
    const auto k = static_cast<std::size_t>(top - pts.begin());
    if (k > 0 && k + 1 < pts.size()) {
        const double x0 = pts[k - 1].pi, x1 = pts[k].pi, x2 = pts[k + 1].pi;
        const double y0 = pts[k - 1].f, y1 = pts[k].f, y2 = pts[k + 1].f;
        const double d01 = x0 - x1, d02 = x0 - x2, d12 = x1 - x2;
        const double scale = std::max({std::abs(d01), std::abs(d02), std::abs(d12)});
        if (scale > 1e-12 && std::abs(d01) > 1e-12 * scale && std::abs(d02) > 1e-12 * scale &&
            std::abs(d12) > 1e-12 * scale) {
            // Vertex of the Lagrange parabola through the three points.
            const double a = y0 / (d01 * d02) - y1 / (d01 * d12) + y2 / (d02 * d12);
            const double b = -y0 * (x1 + x2) / (d01 * d02) + y1 * (x0 + x2) / (d01 * d12) -
                             y2 * (x0 + x1) / (d02 * d12);
            if (a < 0.0) {
                const double vertex = -b / (2.0 * a);
                const double lo_pi = std::min({x0, x1, x2});
                const double hi_pi = std::max({x0, x1, x2});
                m.pi_peak = std::clamp(vertex, lo_pi, hi_pi);
            }
        }
    }
    return m;
}

void write_spectrum_csv(std::ostream& os, const SpectrumSummary& summary) {
    os << "pi,f,q\n";
    os.precision(12);
    for (const auto& p : summary.points) {
        os << p.pi << ',' << p.f << ',' << p.q << '\n';
    }
}

}  // namespace mfspec
