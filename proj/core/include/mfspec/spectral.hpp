#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "mfspec/series.hpp"

namespace mfspec {

/// Unitary (1/sqrt(N)) discrete Fourier coefficients, bin w = 0..N-1.
struct Spectrum {
    std::vector<std::complex<double>> coefficients;

    std::size_t size() const noexcept { return coefficients.size(); }
};

struct CarrierPolicy {
    /// A bin is a carrier peak when log10|c| exceeds the background fit by this much.
    double threshold_decades = 1.0;
    /// Background fit range in bins; 0 for fit_max_bin means N/2.
    std::size_t fit_min_bin = 1;
    std::size_t fit_max_bin = 0;
    /// Extra background refits with already-flagged peaks excluded.
    int refit_passes = 1;
};

struct SpectrumDecomposition {
    Spectrum carrier;
    Spectrum fluctuation;
    std::vector<std::size_t> carrier_bins;  // sorted, closed under w <-> N-w
    double beta = 0.0;                      // background slope of log|c| vs log w
    double intercept = 0.0;
};

Spectrum forward_dft(const Series& s);
Spectrum forward_dft(std::span<const double> x);

/// Real synthesis. Throws "non-real synthesis" when the imaginary residue
/// exceeds 1e-6 relative to the coefficient scale.
Series inverse_dft(const Spectrum& sp);

SpectrumDecomposition decompose(const Series& s, const CarrierPolicy& policy = {});

Series carrier_series(const SpectrumDecomposition& d);
Series fluctuation_series(const SpectrumDecomposition& d);

/// Phase-randomized copy of the fluctuation spectrum (moduli preserved).
Series make_surrogate(const SpectrumDecomposition& d, const RngSpec& rng);
Series make_surrogate(const Spectrum& fluctuation, const RngSpec& rng);

/// Debug dump: bin,part,re,im rows.
void write_decomposition_csv(std::ostream& os, const SpectrumDecomposition& d);

}  // namespace mfspec
