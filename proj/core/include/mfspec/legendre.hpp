#pragma once

#include <iosfwd>
#include <vector>

#include "mfspec/mfdfa.hpp"

namespace mfspec {

struct SpectrumPoint {
    double q = 0.0;
    double pi = 0.0;  ///< singularity strength d tau / dq
    double f = 0.0;   ///< q pi - tau(q)
};

/// Legendre spectrum of one Hurst curve plus its width and peak.
struct SpectrumSummary {
    std::vector<SpectrumPoint> points;  ///< ordered by generating q
    double width = 0.0;
    double pi_peak = 0.0;
    HurstFlavor flavor = HurstFlavor::Plain;
    bool truncated = false;
};

struct SpectrumMetrics {
    double width = 0.0;
    double pi_peak = 0.0;
    double pi_min = 0.0;
    double pi_max = 0.0;
};

/// tau(q) = q h(q) - 1.
std::vector<double> scaling_function(const HurstCurve& h);

/// Central differences for h'(q), one-sided at the ends. With
/// `drop_negative_f`, points with f < 0 are removed.
SpectrumSummary legendre_points(const HurstCurve& h, bool drop_negative_f = true);

/// Width over the points, pi at maximal f refined by a parabola through the
/// peak and its two neighbours.
SpectrumMetrics spectrum_metrics(const SpectrumSummary& summary);

/// pi,f columns.
void write_spectrum_csv(std::ostream& os, const SpectrumSummary& summary);

}  // namespace mfspec
