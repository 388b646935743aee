#pragma once

#include <complex>
#include <vector>

namespace qie::detail {

/// In-place radix-2 complex FFT. n must be a power of two.
/// forward: X_m = sum_j x_j e^{-2*pi*i*j*m/n}; inverse includes the 1/n.
void fft(std::vector<std::complex<double>>& data, bool forward);

/// Signed DFT wavenumber 2*pi*m~/(n*dx) for bin m (m~ = m or m - n).
double dft_wavenumber(std::size_t m, std::size_t n, double dx);

bool is_power_of_two(std::size_t n);

} // namespace qie::detail
