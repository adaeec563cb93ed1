#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mfspec/series.hpp"

namespace mfspec {

enum class WindowScheme {
    EvenCover,        ///< ceil(N/s) evenly spaced windows with minimal overlap
    ForwardBackward,  ///< floor(N/s) windows from each end (2 floor(N/s) total)
};

enum class SurfaceFlavor { Plain, Shuffled, Surrogate };
enum class HurstFlavor { Plain, Shuffled, Surrogate, Correlation, Distribution };

std::string to_string(SurfaceFlavor f);
std::string to_string(HurstFlavor f);
HurstFlavor hurst_flavor(SurfaceFlavor f);

struct MfdfaConfig {
    int poly_order = 4;
    std::vector<double> q_grid;             ///< empty: -10..10 step 0.5
    std::vector<std::size_t> scale_grid;    ///< empty: derived from the series length
    std::size_t scale_count = 24;
    std::size_t fit_min = 0;                ///< fit_range bounds in samples; 0 = unbounded
    std::size_t fit_max = 0;
    int integration_order = 2;
    std::size_t n_shuffles = 50;
    std::size_t n_surrogates = 50;
    WindowScheme window_scheme = WindowScheme::EvenCover;
    std::size_t threads = 1;                ///< worker count for ensembles; not part of the result
};

std::vector<double> default_q_grid();

/// `count` log-spaced integer scales from 4(poly_order+2) to floor(n/4).
std::vector<std::size_t> default_scale_grid(std::size_t n, int poly_order, std::size_t count = 24);

/// Fills defaults for a series of length n and validates the invariants.
MfdfaConfig resolve_config(MfdfaConfig cfg, std::size_t n);

/// Canonical text form used for fingerprints and logs.
std::string describe(const MfdfaConfig& cfg);

std::vector<std::size_t> segment_starts(std::size_t n, std::size_t s,
                                        WindowScheme scheme = WindowScheme::EvenCover);

/// Least-squares polynomial detrending over abscissae 0..s-1 using a
/// precomputed orthonormal basis. Throws "detrend singular" when the basis
/// loses more than 12 digits.
class PolynomialDetrender {
public:
    PolynomialDetrender(std::size_t window, int poly_order);

    /// Mean squared residual (1/s normalization).
    double residual_variance(std::span<const double> window) const;

    std::size_t window() const noexcept { return window_; }

private:
    std::size_t window_;
    int order_;
    std::vector<double> basis_;  // (order_+1) rows of length window_
};

double window_variance(std::span<const double> window, int poly_order);

struct FluctuationSurface {
    std::vector<double> q;
    std::vector<std::size_t> scales;
    std::vector<double> values;  ///< row-major: values[qi * scales.size() + si]
    SurfaceFlavor flavor = SurfaceFlavor::Plain;
    std::size_t ensemble_size = 1;
    MfdfaConfig config;

    double at(std::size_t qi, std::size_t si) const { return values[qi * scales.size() + si]; }
    double& at(std::size_t qi, std::size_t si) { return values[qi * scales.size() + si]; }
};

/// F_q(s) of an already integrated profile. `cfg` must be resolved.
FluctuationSurface fluctuation_function(std::span<const double> profile, const MfdfaConfig& cfg);

/// Integrates `fluc` cfg.integration_order times, then fluctuation_function.
FluctuationSurface plain_surface(const Series& fluc, const MfdfaConfig& cfg);

/// Arithmetic mean of F_q(s) over shuffled or phase-randomized realizations
/// of `fluc`. Realization r uses rng.realization(r).
FluctuationSurface ensemble_surface(const Series& fluc, const MfdfaConfig& cfg, SurfaceFlavor flavor,
                                    const RngSpec& rng);

struct HurstCurve {
    std::vector<double> q;
    std::vector<double> h;
    std::vector<double> std_error;  ///< OLS slope standard error
    HurstFlavor flavor = HurstFlavor::Plain;
    MfdfaConfig config;
};

/// OLS slope of log F_q(s) on log s over the fit range, minus the
/// integration correction (integration_order - 1).
HurstCurve fit_hurst(const FluctuationSurface& surface);

/// h - h_shuf.
HurstCurve correlation_hurst(const HurstCurve& plain, const HurstCurve& shuffled);
/// h - h_sur.
HurstCurve distribution_hurst(const HurstCurve& plain, const HurstCurve& surrogate);

/// Header of scales, one row per q.
void write_surface_csv(std::ostream& os, const FluctuationSurface& surface);

}  // namespace mfspec
