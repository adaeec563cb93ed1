#include "mfspec/mfdfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "mfspec/parallel.hpp"
#include "mfspec/spectral.hpp"

namespace mfspec {

std::string to_string(SurfaceFlavor f) {
    switch (f) {
        case SurfaceFlavor::Plain: return "plain";
        case SurfaceFlavor::Shuffled: return "shuffled";
        case SurfaceFlavor::Surrogate: return "surrogate";
    }
    return "unknown";
}

std::string to_string(HurstFlavor f) {
    switch (f) {
        case HurstFlavor::Plain: return "plain";
        case HurstFlavor::Shuffled: return "shuffled";
        case HurstFlavor::Surrogate: return "surrogate";
        case HurstFlavor::Correlation: return "correlation";
        case HurstFlavor::Distribution: return "distribution";
    }
    return "unknown";
}

HurstFlavor hurst_flavor(SurfaceFlavor f) {
    switch (f) {
        case SurfaceFlavor::Shuffled: return HurstFlavor::Shuffled;
        case SurfaceFlavor::Surrogate: return HurstFlavor::Surrogate;
        case SurfaceFlavor::Plain: break;
    }
    return HurstFlavor::Plain;
}

std::vector<double> default_q_grid() {
    std::vector<double> q;
    for (int i = -20; i <= 20; ++i) {
        q.push_back(0.5 * i);
    }
    return q;
}

std::vector<std::size_t> default_scale_grid(std::size_t n, int poly_order, std::size_t count) {
    const std::size_t s_min = 4 * static_cast<std::size_t>(poly_order + 2);
    const std::size_t s_max = n / 4;
    if (s_max < s_min) {
        throw AnalysisError("series too short for the requested polynomial order");
    }
    std::vector<std::size_t> out;
    if (count < 2 || s_max == s_min) {
        out.push_back(s_min);
        return out;
    }
    const double lo = std::log(static_cast<double>(s_min));
    const double hi = std::log(static_cast<double>(s_max));
    for (std::size_t i = 0; i < count; ++i) {
        const double t = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        const auto s = static_cast<std::size_t>(std::llround(std::exp(t)));
        const std::size_t clamped = std::clamp(s, s_min, s_max);
        if (out.empty() || clamped > out.back()) {
            out.push_back(clamped);
        }
    }
    return out;
}

MfdfaConfig resolve_config(MfdfaConfig cfg, std::size_t n) {
    if (cfg.poly_order < 1) {
        throw std::invalid_argument("poly_order must be >= 1");
    }
    if (cfg.integration_order < 1 || cfg.integration_order > 2) {
        throw std::invalid_argument("integration_order must be 1 or 2");
    }
    if (cfg.q_grid.empty()) {
        cfg.q_grid = default_q_grid();
    }
    if (!std::is_sorted(cfg.q_grid.begin(), cfg.q_grid.end()) ||
        std::adjacent_find(cfg.q_grid.begin(), cfg.q_grid.end()) != cfg.q_grid.end()) {
        throw std::invalid_argument("q_grid must be strictly increasing");
    }
    const auto has = [&](double v) {
        return std::find(cfg.q_grid.begin(), cfg.q_grid.end(), v) != cfg.q_grid.end();
    };
    if (!has(0.0) || !has(2.0)) {
        throw std::invalid_argument("q_grid must contain 0 and 2");
    }
    if (cfg.scale_grid.empty()) {
        cfg.scale_grid = default_scale_grid(n, cfg.poly_order, cfg.scale_count);
    }
    const std::size_t min_window = 2 * static_cast<std::size_t>(cfg.poly_order + 1);
    for (std::size_t i = 0; i < cfg.scale_grid.size(); ++i) {
        const std::size_t s = cfg.scale_grid[i];
        if (s <= min_window) {
            throw std::invalid_argument("scale " + std::to_string(s) + " too small for poly_order " +
                                        std::to_string(cfg.poly_order));
        }
        if (s > n) {
            throw std::invalid_argument("scale " + std::to_string(s) + " exceeds series length");
        }
        if (i > 0 && s <= cfg.scale_grid[i - 1]) {
            throw std::invalid_argument("scale_grid must be strictly increasing");
        }
    }
    return cfg;
}

std::string describe(const MfdfaConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "poly_order=" << cfg.poly_order << ";integration_order=" << cfg.integration_order
       << ";window=" << (cfg.window_scheme == WindowScheme::EvenCover ? "cover" : "forward_backward")
       << ";n_shuffles=" << cfg.n_shuffles << ";n_surrogates=" << cfg.n_surrogates << ";fit=" << cfg.fit_min
       << ".." << cfg.fit_max << ";q=";
    for (double q : cfg.q_grid) os << q << ',';
    os << ";s=";
    for (auto s : cfg.scale_grid) os << s << ',';
    return os.str();
}

std::vector<std::size_t> segment_starts(std::size_t n, std::size_t s, WindowScheme scheme) {
    if (s < 2 || s > n) {
        throw AnalysisError("window size must satisfy 2 <= s <= n");
    }
    std::vector<std::size_t> starts;
    if (scheme == WindowScheme::ForwardBackward) {
        const std::size_t count = n / s;
        for (std::size_t w = 0; w < count; ++w) starts.push_back(w * s);
        for (std::size_t w = 0; w < count; ++w) starts.push_back(n - (w + 1) * s);
        return starts;
    }
    const std::size_t count = (n + s - 1) / s;
    if (count == 1) {
        return {0};
    }
    const std::size_t span = n - s;
    const std::size_t den = count - 1;
    for (std::size_t w = 0; w < count; ++w) {
        // round(w * span / den), half rounds up.
        starts.push_back((2 * w * span + den) / (2 * den));
    }
    return starts;
}

PolynomialDetrender::PolynomialDetrender(std::size_t window, int poly_order) : window_(window), order_(poly_order) {
    if (poly_order < 0) {
        throw std::invalid_argument("poly_order must be non-negative");
    }
    const std::size_t terms = static_cast<std::size_t>(poly_order) + 1;
    if (window <= 2 * terms) {
        throw AnalysisError("window of " + std::to_string(window) + " samples too short for poly_order " +
                            std::to_string(poly_order));
    }
    // Modified Gram-Schmidt (two sweeps) on monomials of the abscissa mapped to [-1, 1].
    basis_.assign(terms * window, 0.0);
    const double half = 0.5 * static_cast<double>(window - 1);
    for (std::size_t k = 0; k < terms; ++k) {
        double* col = &basis_[k * window];
        for (std::size_t t = 0; t < window; ++t) {
            const double x = (static_cast<double>(t) - half) / half;
            col[t] = std::pow(x, static_cast<double>(k));
        }
        double norm0 = 0.0;
        for (std::size_t t = 0; t < window; ++t) norm0 += col[t] * col[t];
        norm0 = std::sqrt(norm0);
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (std::size_t j = 0; j < k; ++j) {
                const double* prev = &basis_[j * window];
                double dot = 0.0;
                for (std::size_t t = 0; t < window; ++t) dot += prev[t] * col[t];
                for (std::size_t t = 0; t < window; ++t) col[t] -= dot * prev[t];
            }
        }
        double norm = 0.0;
        for (std::size_t t = 0; t < window; ++t) norm += col[t] * col[t];
        norm = std::sqrt(norm);
        if (!(norm > 1e-12 * norm0)) {
            throw AnalysisError("detrend singular");
        }
        for (std::size_t t = 0; t < window; ++t) col[t] /= norm;
    }
}

double PolynomialDetrender::residual_variance(std::span<const double> window) const {
    if (window.size() != window_) {
        throw std::invalid_argument("window length mismatch");
    }
    const std::size_t terms = static_cast<std::size_t>(order_) + 1;
    // Thread-local scratch keeps the hot loop allocation-free.
    thread_local std::vector<double> r;
    r.assign(window.begin(), window.end());
    for (std::size_t k = 0; k < terms; ++k) {
        const double* b = &basis_[k * window_];
        double dot = 0.0;
        for (std::size_t t = 0; t < window_; ++t) dot += b[t] * r[t];
        for (std::size_t t = 0; t < window_; ++t) r[t] -= dot * b[t];
    }
    double ss = 0.0;
    for (double v : r) ss += v * v;
    return ss / static_cast<double>(window_);
}

double window_variance(std::span<const double> window, int poly_order) {
    return PolynomialDetrender(window.size(), poly_order).residual_variance(window);
}

namespace {

// F_q(s) from per-window residual variances; `window(start, s)` yields the
// profile samples of one window.
template <typename Window>
FluctuationSurface surface_from_windows(std::size_t n, const MfdfaConfig& cfg, Window window) {
    FluctuationSurface out;
    out.q = cfg.q_grid;
    out.scales = cfg.scale_grid;
    out.config = cfg;
    out.values.assign(out.q.size() * out.scales.size(), 0.0);
    std::vector<double> log_f2;
    for (std::size_t si = 0; si < out.scales.size(); ++si) {
        const std::size_t s = out.scales[si];
        if (s > n) {
            throw AnalysisError("profile shorter than the largest scale");
        }
        const PolynomialDetrender detrender(s, cfg.poly_order);
        const auto starts = segment_starts(n, s, cfg.window_scheme);
        log_f2.clear();
        bool has_zero = false;
        for (std::size_t start : starts) {
            const double f2 = detrender.residual_variance(window(start, s));
            if (f2 <= 0.0) {
                has_zero = true;
            }
            log_f2.push_back(f2 > 0.0 ? std::log(f2) : -std::numeric_limits<double>::infinity());
        }
        const double count = static_cast<double>(log_f2.size());
        for (std::size_t qi = 0; qi < out.q.size(); ++qi) {
            const double q = out.q[qi];
            if (has_zero && q <= 0.0) {
                throw AnalysisError("zero local variance under negative moment at scale " + std::to_string(s));
            }
            double log_fq;
            if (q == 0.0) {
                double acc = 0.0;
                for (double lf : log_f2) acc += lf;
                log_fq = 0.5 * acc / count;
            } else {
                // log of the generalized mean, evaluated with log-sum-exp.
                const double half_q = 0.5 * q;
                double top = -std::numeric_limits<double>::infinity();
                for (double lf : log_f2) top = std::max(top, half_q * lf);
                double acc = 0.0;
                for (double lf : log_f2) acc += std::exp(half_q * lf - top);
                log_fq = (top + std::log(acc / count)) / q;
            }
            out.at(qi, si) = std::exp(log_fq);
        }
    }
    return out;
}

}  // namespace

FluctuationSurface fluctuation_function(std::span<const double> profile, const MfdfaConfig& cfg) {
    return surface_from_windows(profile.size(), cfg,
                                [&](std::size_t start, std::size_t s) { return profile.subspan(start, s); });
}

FluctuationSurface plain_surface(const Series& fluc, const MfdfaConfig& cfg) {
    if (cfg.poly_order < cfg.integration_order - 1) {
        const auto profile = integrate(fluc.view(), cfg.integration_order);
        return fluctuation_function(profile, cfg);
    }
    // Integrating each window from its own start differs from the global
    // profile by a polynomial of degree integration_order - 1, which the
    // detrending removes; the local sums keep far more precision.
    const auto x = fluc.view();
    thread_local std::vector<double> local;
    return surface_from_windows(x.size(), cfg, [&](std::size_t start, std::size_t s) {
        local.assign(x.begin() + static_cast<std::ptrdiff_t>(start),
                     x.begin() + static_cast<std::ptrdiff_t>(start + s));
        for (int k = 0; k < cfg.integration_order; ++k) {
            long double acc = 0.0L;
            for (auto& v : local) {
                acc += v;
                v = static_cast<double>(acc);
            }
        }
        return std::span<const double>(local);
    });
}

FluctuationSurface ensemble_surface(const Series& fluc, const MfdfaConfig& cfg, SurfaceFlavor flavor,
                                    const RngSpec& rng) {
    if (flavor == SurfaceFlavor::Plain) {
        return plain_surface(fluc, cfg);
    }
    const std::size_t count = flavor == SurfaceFlavor::Shuffled ? cfg.n_shuffles : cfg.n_surrogates;
    if (count == 0) {
        throw std::invalid_argument("ensemble size must be positive");
    }
    Spectrum spectrum;
    if (flavor == SurfaceFlavor::Surrogate) {
        spectrum = forward_dft(fluc);
    }
    std::vector<FluctuationSurface> parts(count);
    parallel_for(count, cfg.threads, [&](std::size_t r) {
        const RngSpec stream = rng.realization(rng.realization_index + r);
        const Series realization =
            flavor == SurfaceFlavor::Shuffled ? shuffle_series(fluc, stream) : make_surrogate(spectrum, stream);
        parts[r] = plain_surface(realization, cfg);
    });
    // Fixed index order keeps the average independent of the thread count.
    FluctuationSurface out = std::move(parts[0]);
    for (std::size_t r = 1; r < count; ++r) {
        for (std::size_t i = 0; i < out.values.size(); ++i) {
            out.values[i] += parts[r].values[i];
        }
    }
    for (auto& v : out.values) {
        v /= static_cast<double>(count);
    }
    out.flavor = flavor;
    out.ensemble_size = count;
    return out;
}

HurstCurve fit_hurst(const FluctuationSurface& surface) {
    const auto& cfg = surface.config;
    std::vector<std::size_t> idx;
    for (std::size_t si = 0; si < surface.scales.size(); ++si) {
        const std::size_t s = surface.scales[si];
        if ((cfg.fit_min == 0 || s >= cfg.fit_min) && (cfg.fit_max == 0 || s <= cfg.fit_max)) {
            idx.push_back(si);
        }
    }
    if (idx.size() < 4) {
        throw AnalysisError("fit range needs at least 4 scales");
    }
    const double k = static_cast<double>(idx.size());
    std::vector<double> x;
    double mx = 0.0;
    for (auto si : idx) {
        x.push_back(std::log(static_cast<double>(surface.scales[si])));
        mx += x.back();
    }
    mx /= k;
    double sxx = 0.0;
    for (double v : x) sxx += (v - mx) * (v - mx);

    const double correction = static_cast<double>(cfg.integration_order - 1);
    HurstCurve curve;
    curve.q = surface.q;
    curve.flavor = hurst_flavor(surface.flavor);
    curve.config = cfg;
    for (std::size_t qi = 0; qi < surface.q.size(); ++qi) {
        std::vector<double> y;
        double my = 0.0;
        for (auto si : idx) {
            y.push_back(std::log(surface.at(qi, si)));
            my += y.back();
        }
        my /= k;
        double sxy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my);
        const double slope = sxy / sxx;
        const double intercept = my - slope * mx;
        double ssr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double e = y[i] - (intercept + slope * x[i]);
            ssr += e * e;
        }
        curve.h.push_back(slope - correction);
        curve.std_error.push_back(std::sqrt(ssr / (k - 2.0) / sxx));
    }
    return curve;
}

namespace {

HurstCurve difference(const HurstCurve& a, const HurstCurve& b, HurstFlavor flavor) {
    if (a.q != b.q) {
        throw AnalysisError("Hurst curves have mismatched q grids");
    }
    HurstCurve out;
    out.q = a.q;
    out.flavor = flavor;
    out.config = a.config;
    for (std::size_t i = 0; i < a.q.size(); ++i) {
        out.h.push_back(a.h[i] - b.h[i]);
        const double ea = i < a.std_error.size() ? a.std_error[i] : 0.0;
        const double eb = i < b.std_error.size() ? b.std_error[i] : 0.0;
        out.std_error.push_back(std::hypot(ea, eb));
    }
    return out;
}

}  // namespace

HurstCurve correlation_hurst(const HurstCurve& plain, const HurstCurve& shuffled) {
    return difference(plain, shuffled, HurstFlavor::Correlation);
}

HurstCurve distribution_hurst(const HurstCurve& plain, const HurstCurve& surrogate) {
    return difference(plain, surrogate, HurstFlavor::Distribution);
}

void write_surface_csv(std::ostream& os, const FluctuationSurface& surface) {
    os << "q";
    for (auto s : surface.scales) os << ',' << s;
    os << '\n';
    os.precision(12);
    for (std::size_t qi = 0; qi < surface.q.size(); ++qi) {
        os << surface.q[qi];
        for (std::size_t si = 0; si < surface.scales.size(); ++si) os << ',' << surface.at(qi, si);
        os << '\n';
    }
}

}  // namespace mfspec
