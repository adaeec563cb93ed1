#pragma once

#include <span>
#include <vector>

#include "mfspec/series.hpp"

namespace mfspec {

struct CascadeSpec {
    int levels = 16;         ///< series length 2^levels
    double weight_a = 0.75;  ///< in (0.5, 1)
};

/// IID N(0, 1).
Series gaussian_white_noise(std::size_t n, const RngSpec& rng);

/// Unit-variance fractional Gaussian noise by circulant embedding.
/// n must be a power of two, hurst in (0, 1).
Series fgn(std::size_t n, double hurst, const RngSpec& rng);

/// gamma(k) = (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2.
double fgn_autocovariance(std::size_t k, double hurst);

/// Binomial multiplicative cascade normalized to unit mean. Each block's
/// left/right weight assignment is drawn from the RNG.
Series binomial_cascade(const CascadeSpec& spec, const RngSpec& rng);

/// Same construction with explicit orientations, consumed level by level,
/// block by block (level l has 2^l blocks). `true` puts 1-a on the left.
Series binomial_cascade(const CascadeSpec& spec, std::span<const bool> swap_flags);

/// Closed-form generalized Hurst exponent of the binomial cascade.
double analytic_cascade_hurst(double q, double weight_a);

/// AR(1) x_t = phi x_{t-1} + e_t started from the stationary distribution.
Series ar1(std::size_t n, double phi, const RngSpec& rng);

/// IID Exp(1).
Series exponential_noise(std::size_t n, const RngSpec& rng);

}  // namespace mfspec
