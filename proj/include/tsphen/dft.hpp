#pragma once

#include <complex>
#include <span>
#include <vector>

namespace tsphen::dft {

/// In-place iterative radix-2 FFT; size must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& data, bool inverse);

/// Forward DFT of a real sequence of any length. Power-of-two sizes run the
/// radix-2 path directly; other sizes go through Bluestein's chirp-z
/// reduction to a padded power-of-two convolution.
std::vector<std::complex<double>> dft_real(std::span<const double> x);

/// Squared-magnitude spectrum |X_k|^2 for the positive-frequency bins
/// k = 1 .. floor(n/2); the DC bin is excluded.
std::vector<double> periodogram_positive(std::span<const double> x);

}  // namespace tsphen::dft
