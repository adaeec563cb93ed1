#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mfspec::fft {

using Complex = std::complex<double>;

/// Unitary DFT of arbitrary length: radix-2 for powers of two, Bluestein's
/// chirp-z otherwise. Sign -1 is the forward transform, +1 the inverse.
std::vector<Complex> transform(std::span<const Complex> x, int sign);

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace mfspec::fft
