#pragma once

// Direct O(N^2) discrete Fourier transform, evaluated in long double.

#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using cplx = std::complex<long double>;

/// Forward 2-D DFT of a real row-major field (no normalization).
std::vector<cplx> dft2(std::size_t width, std::size_t height, const std::vector<double>& field);
/// Inverse 2-D DFT including the 1/(width*height) factor.
std::vector<cplx> idft2(std::size_t width, std::size_t height, const std::vector<cplx>& spectrum);

/// Signed frequency of bin j on n samples, in [-n/2, (n-1)/2].
long signed_frequency(std::size_t j, std::size_t n);

/// 2 pi max(|k|, 1)^(-epsilon) applied to `field` by direct transforms.
std::vector<cplx> fractional_multiplier(std::size_t width, std::size_t height, const std::vector<double>& field,
                                        double epsilon);

} // namespace oracle
