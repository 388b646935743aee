#include "qie/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace qie::detail {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft(std::vector<std::complex<double>>& data, bool forward) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) throw std::invalid_argument("fft: size must be a power of two");

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    // Twiddles from cos/sin directly; a running product would accumulate
    // roundoff past the 1e-10 unitarity budget over long evolutions.
    const double ang0 = (forward ? -2.0 : 2.0) * M_PI / static_cast<double>(n);
    std::vector<std::complex<double>> tw(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double a = ang0 * static_cast<double>(j);
        tw[j] = {std::cos(a), std::sin(a)};
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = data[i + k];
                const auto v = data[i + k + len / 2] * tw[k * stride];
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
            }
        }
    }
    if (!forward) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& c : data) c *= inv;
    }
}

double dft_wavenumber(std::size_t m, std::size_t n, double dx) {
    const auto half = n / 2;
    const double m_signed = (m < half) ? static_cast<double>(m)
                                       : static_cast<double>(m) - static_cast<double>(n);
    return 2.0 * M_PI * m_signed / (static_cast<double>(n) * dx);
}

} // namespace qie::detail
