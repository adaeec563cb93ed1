#include "mfspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "mfspec/fft.hpp"

namespace mfspec {

Spectrum forward_dft(std::span<const double> x) {
    if (x.size() < 2) {
        throw AnalysisError("DFT needs at least 2 samples");
    }
    std::vector<std::complex<double>> in(x.begin(), x.end());
    return Spectrum{fft::transform(in, -1)};
}

Spectrum forward_dft(const Series& s) { return forward_dft(s.view()); }

Series inverse_dft(const Spectrum& sp) {
    const auto out = fft::transform(sp.coefficients, +1);
    double scale = 0.0;
    for (const auto& c : sp.coefficients) {
        scale = std::max(scale, std::abs(c));
    }
    scale = std::max(scale, 1.0);
    std::vector<double> re(out.size());
    double residue = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        re[i] = out[i].real();
        residue = std::max(residue, std::abs(out[i].imag()));
    }
    if (residue > 1e-6 * scale) {
        throw AnalysisError("non-real synthesis");
    }
    return Series(std::move(re));
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    bool ok = false;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    if (n < 2) {
        return {};
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) {
        return {};
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx, true};
}

}  // namespace

SpectrumDecomposition decompose(const Series& s, const CarrierPolicy& policy) {
    if (s.size() < 64) {
        throw AnalysisError("decomposition needs at least 64 samples");
    }
    if (std::all_of(s.values.begin(), s.values.end(), [](double v) { return v == 0.0; })) {
        throw AnalysisError("zero signal");
    }
    const Spectrum full = forward_dft(s);
    const std::size_t n = full.size();
    const std::size_t half = n / 2;
    const std::size_t lo = std::max<std::size_t>(policy.fit_min_bin, 1);
    const std::size_t hi = policy.fit_max_bin == 0 ? half : std::min(policy.fit_max_bin, half);

    double peak = 0.0;
    for (const auto& c : full.coefficients) {
        peak = std::max(peak, std::abs(c));
    }
    // Bins at round-off level carry no information about the background.
    const double floor = 1e-12 * peak;

    std::vector<double> logmag(half + 1, 0.0);
    std::vector<bool> usable(half + 1, false);
    for (std::size_t w = 1; w <= half; ++w) {
        const double m = std::abs(full.coefficients[w]);
        if (m > floor) {
            logmag[w] = std::log10(m);
            usable[w] = true;
        }
    }

    std::vector<bool> flagged(half + 1, false);
    LineFit fit;
    for (int pass = 0; pass <= std::max(policy.refit_passes, 0); ++pass) {
        std::vector<double> xs, ys;
        for (std::size_t w = lo; w <= hi; ++w) {
            if (usable[w] && !flagged[w]) {
                xs.push_back(std::log10(static_cast<double>(w)));
                ys.push_back(logmag[w]);
            }
        }
        const LineFit next = fit_line(xs, ys);
        if (!next.ok) {
            break;
        }
        fit = next;
        for (std::size_t w = 1; w <= half; ++w) {
            const double background = fit.intercept + fit.slope * std::log10(static_cast<double>(w));
            flagged[w] = usable[w] && (logmag[w] - background > policy.threshold_decades);
        }
    }

    SpectrumDecomposition d;
    d.beta = fit.slope;
    d.intercept = fit.intercept;
    std::vector<bool> is_carrier(n, false);
    is_carrier[0] = true;
    if (fit.ok) {
        for (std::size_t w = 1; w <= half; ++w) {
            if (flagged[w]) {
                is_carrier[w] = true;
                is_carrier[n - w] = true;
            }
        }
    }
    d.carrier.coefficients.assign(n, {0.0, 0.0});
    d.fluctuation.coefficients.assign(n, {0.0, 0.0});
    for (std::size_t w = 0; w < n; ++w) {
        if (is_carrier[w]) {
            d.carrier.coefficients[w] = full.coefficients[w];
            d.carrier_bins.push_back(w);
        } else {
            d.fluctuation.coefficients[w] = full.coefficients[w];
        }
    }
    return d;
}

Series carrier_series(const SpectrumDecomposition& d) { return inverse_dft(d.carrier); }

Series fluctuation_series(const SpectrumDecomposition& d) { return inverse_dft(d.fluctuation); }

Series make_surrogate(const Spectrum& fluctuation, const RngSpec& rng) {
    const std::size_t n = fluctuation.size();
    auto engine = make_engine(rng);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    std::bernoulli_distribution flip(0.5);
    Spectrum out;
    out.coefficients.assign(n, {0.0, 0.0});
    if (n == 0) {
        return Series{};
    }
    out.coefficients[0] = fluctuation.coefficients[0];
    const std::size_t upper = (n - 1) / 2;
    for (std::size_t w = 1; w <= upper; ++w) {
        const auto rot = std::polar(1.0, phase(engine));
        out.coefficients[w] = fluctuation.coefficients[w] * rot;
        out.coefficients[n - w] = std::conj(out.coefficients[w]);
    }
    if (n % 2 == 0) {
        const double sign = flip(engine) ? -1.0 : 1.0;
        out.coefficients[n / 2] = fluctuation.coefficients[n / 2] * sign;
    }
    return inverse_dft(out);
}

Series make_surrogate(const SpectrumDecomposition& d, const RngSpec& rng) {
    return make_surrogate(d.fluctuation, rng);
}

void write_decomposition_csv(std::ostream& os, const SpectrumDecomposition& d) {
    os << "bin,part,re,im\n";
    os.precision(17);
    for (std::size_t w = 0; w < d.carrier.size(); ++w) {
        const bool car = std::binary_search(d.carrier_bins.begin(), d.carrier_bins.end(), w);
        const auto& c = car ? d.carrier.coefficients[w] : d.fluctuation.coefficients[w];
        os << w << ',' << (car ? "carrier" : "fluctuation") << ',' << c.real() << ',' << c.imag() << '\n';
    }
}

}  // namespace mfspec
