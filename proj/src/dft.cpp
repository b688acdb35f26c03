#include "tsphen/dft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tsphen::dft {

namespace {

bool is_pow2(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Bluestein: X_k = w_k * IDFT(DFT(x_n w_n) . DFT(chirp)), w_n = exp(-i pi n^2 / N).
std::vector<std::complex<double>> bluestein(std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t m = next_pow2(2 * n - 1);
    const double pi = std::numbers::pi;

    std::vector<std::complex<double>> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        // i^2 mod 2n keeps the chirp argument small for long inputs
        const auto sq = static_cast<double>((i * i) % (2 * n));
        const double ang = pi * sq / static_cast<double>(n);
        w[i] = {std::cos(ang), -std::sin(ang)};
    }

    std::vector<std::complex<double>> a(m, {0.0, 0.0});
    std::vector<std::complex<double>> b(m, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) a[i] = x[i] * w[i];
    b[0] = std::conj(w[0]);
    for (std::size_t i = 1; i < n; ++i) b[i] = b[m - i] = std::conj(w[i]);

    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
    fft_pow2(a, true);

    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * w[i];
    return out;
}

}  // namespace

void fft_pow2(std::vector<std::complex<double>>& data, bool inverse) {
    const std::size_t n = data.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: size must be a power of two");
    if (n == 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = data[i + k];
                const auto v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& v : data) v /= static_cast<double>(n);
    }
}

std::vector<std::complex<double>> dft_real(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    if (is_pow2(n)) {
        std::vector<std::complex<double>> data(n);
        for (std::size_t i = 0; i < n; ++i) data[i] = {x[i], 0.0};
        fft_pow2(data, false);
        return data;
    }
    return bluestein(x);
}

std::vector<double> periodogram_positive(std::span<const double> x) {
    const auto spectrum = dft_real(x);
    const std::size_t nbins = x.size() / 2;
    std::vector<double> power(nbins);
    for (std::size_t k = 1; k <= nbins; ++k) power[k - 1] = std::norm(spectrum[k]);
    return power;
}

}  // namespace tsphen::dft
