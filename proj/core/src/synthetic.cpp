#include "mfspec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mfspec/fft.hpp"

namespace mfspec {

Series gaussian_white_noise(std::size_t n, const RngSpec& rng) {
    auto engine = make_engine(rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = normal(engine);
    return Series(std::move(v), "white_noise");
}

double fgn_autocovariance(std::size_t k, double hurst) {
    const double h2 = 2.0 * hurst;
    const double kk = static_cast<double>(k);
    const double below = k == 0 ? 1.0 : std::pow(kk - 1.0, h2);
    return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + below);
}

Series fgn(std::size_t n, double hurst, const RngSpec& rng) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
        throw std::invalid_argument("hurst must lie in (0, 1)");
    }
    if (!fft::is_power_of_two(n)) {
        throw std::invalid_argument("fgn length must be a power of two");
    }
    if (n == 1) {
        return gaussian_white_noise(1, rng);
    }
    const std::size_t m = 2 * n;
    std::vector<fft::Complex> row(m);
    for (std::size_t k = 0; k <= n; ++k) {
        row[k] = fgn_autocovariance(k, hurst);
    }
    for (std::size_t k = n + 1; k < m; ++k) {
        row[k] = row[m - k];
    }
    // Eigenvalues of the circulant: unnormalized DFT of its first row.
    auto eig = fft::transform(row, -1);
    const double root_m = std::sqrt(static_cast<double>(m));
    auto engine = make_engine(rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<fft::Complex> y(m);
    for (std::size_t k = 0; k < m; ++k) {
        double lambda = eig[k].real() * root_m;
        if (lambda < -1e-9) {
            throw AnalysisError("fGn covariance is not embeddable");
        }
        lambda = std::max(lambda, 0.0);
        const double re = normal(engine);
        const double im = normal(engine);
        y[k] = std::sqrt(lambda) * fft::Complex(re, im);
    }
    const auto x = fft::transform(y, -1);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = x[i].real();
    return Series(std::move(v), "fgn");
}

namespace {

void check_cascade(const CascadeSpec& spec) {
    if (spec.levels < 0 || spec.levels > 30) {
        throw std::invalid_argument("cascade levels must lie in [0, 30]");
    }
    if (!(spec.weight_a > 0.0 && spec.weight_a < 1.0)) {
        throw std::invalid_argument("cascade weight must lie in (0, 1)");
    }
}

template <typename Flip>
Series build_cascade(const CascadeSpec& spec, Flip&& flip) {
    check_cascade(spec);
    const std::size_t n = std::size_t{1} << spec.levels;
    const double a = spec.weight_a;
    const double b = 1.0 - a;
    std::vector<double> v(n, 1.0);
    for (int level = 0; level < spec.levels; ++level) {
        const std::size_t block = n >> level;
        const std::size_t half = block / 2;
        for (std::size_t start = 0; start < n; start += block) {
            const bool swap = flip();
            const double left = swap ? b : a;
            const double right = swap ? a : b;
            for (std::size_t i = 0; i < half; ++i) {
                v[start + i] *= left;
                v[start + half + i] *= right;
            }
        }
    }
    // Products sum to 1; scaling by 2^levels is exact.
    for (auto& x : v) x *= static_cast<double>(n);
    return Series(std::move(v), "cascade");
}

}  // namespace

Series binomial_cascade(const CascadeSpec& spec, const RngSpec& rng) {
    auto engine = make_engine(rng);
    std::bernoulli_distribution coin(0.5);
    return build_cascade(spec, [&] { return coin(engine); });
}

Series binomial_cascade(const CascadeSpec& spec, std::span<const bool> swap_flags) {
    std::size_t pos = 0;
    return build_cascade(spec, [&] {
        if (pos >= swap_flags.size()) {
            throw std::invalid_argument("not enough cascade orientation flags");
        }
        return swap_flags[pos++];
    });
}

double analytic_cascade_hurst(double q, double weight_a) {
    if (!(weight_a > 0.0 && weight_a < 1.0)) {
        throw std::invalid_argument("cascade weight must lie in (0, 1)");
    }
    const double la = std::log(weight_a);
    const double lb = std::log1p(-weight_a);
    if (q == 0.0) {
        return -(la + lb) / (2.0 * std::numbers::ln2);
    }
    // 1/q - ln(a^q + b^q)/(q ln 2) = -ln((a^q + b^q)/2)/(q ln 2)
    double log_mean;
    if (std::abs(q) < 1.0) {
        log_mean = std::log1p(0.5 * (std::expm1(q * la) + std::expm1(q * lb)));
    } else {
        const double top = std::max(q * la, q * lb);
        log_mean = top + std::log(std::exp(q * la - top) + std::exp(q * lb - top)) - std::numbers::ln2;
    }
    return -log_mean / (q * std::numbers::ln2);
}

Series ar1(std::size_t n, double phi, const RngSpec& rng) {
    if (!(std::abs(phi) < 1.0)) {
        throw std::invalid_argument("AR(1) coefficient must satisfy |phi| < 1");
    }
    auto engine = make_engine(rng);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(n);
    if (n > 0) {
        v[0] = normal(engine) / std::sqrt(1.0 - phi * phi);
        for (std::size_t i = 1; i < n; ++i) v[i] = phi * v[i - 1] + normal(engine);
    }
    return Series(std::move(v), "ar1");
}

Series exponential_noise(std::size_t n, const RngSpec& rng) {
    auto engine = make_engine(rng);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = expo(engine);
    return Series(std::move(v), "exponential");
}

}  // namespace mfspec
