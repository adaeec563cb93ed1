#include "mfspec/fft.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace mfspec::fft {

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

namespace {

// Unnormalized in-place radix-2 transform; data.size() must be a power of two.
void radix2(std::vector<Complex>& data, int sign) {
    const std::size_t n = data.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) {
            j ^= bit;
        }
        j ^= bit;
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        // Twiddles computed directly per stage to avoid recurrence drift.
        std::vector<Complex> tw(half);
        for (std::size_t k = 0; k < half; ++k) {
            const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
            tw[k] = {std::cos(ang), std::sin(ang)};
        }
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const Complex u = data[i + k];
                const Complex v = data[i + k + half] * tw[k];
                data[i + k] = u + v;
                data[i + k + half] = u - v;
            }
        }
    }
}

// Unnormalized arbitrary-length transform via chirp-z convolution.
std::vector<Complex> bluestein(std::span<const Complex> x, int sign) {
    const std::size_t n = x.size();
    std::size_t m = 1;
    while (m < 2 * n - 1) {
        m <<= 1;
    }
    std::vector<Complex> chirp(n);
    const std::size_t period = 2 * n;
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the phase argument small for large k.
        const std::uint64_t kk = k % period;
        const std::size_t k2 = static_cast<std::size_t>((kk * kk) % period);
        const double ang = sign * std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        chirp[k] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<Complex> a(m), b(m);
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = x[k] * chirp[k];
    }
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
        b[k] = b[m - k] = std::conj(chirp[k]);
    }
    radix2(a, -1);
    radix2(b, -1);
    for (std::size_t k = 0; k < m; ++k) {
        a[k] *= b[k];
    }
    radix2(a, +1);
    std::vector<Complex> out(n);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = a[k] * scale * chirp[k];
    }
    return out;
}

}  // namespace

std::vector<Complex> transform(std::span<const Complex> x, int sign) {
    if (sign != -1 && sign != 1) {
        throw std::invalid_argument("fft sign must be -1 or +1");
    }
    const std::size_t n = x.size();
    if (n == 0) {
        return {};
    }
    std::vector<Complex> out;
    if (is_power_of_two(n)) {
        out.assign(x.begin(), x.end());
        radix2(out, sign);
    } else {
        out = bluestein(x, sign);
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& c : out) {
        c *= norm;
    }
    return out;
}

}  // namespace mfspec::fft
