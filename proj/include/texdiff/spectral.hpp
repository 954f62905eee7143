#pragma once

#include "texdiff/image.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace texdiff::spectral {

/// Integer lattice frequency of DFT bin j on a grid of n samples:
/// j for j < ceil(n/2), j - n otherwise, i.e. k in [-floor(n/2), ceil(n/2) - 1].
long lattice_frequency(std::size_t j, std::size_t n) noexcept;

/// Diagonal Fourier multiplier m_k = 2 pi max(|k|, 1)^(-epsilon) over a
/// height x width frequency grid, stored row-major like the image.
class SpectralMultiplier {
public:
    SpectralMultiplier(std::size_t width, std::size_t height, double epsilon);

    double epsilon() const noexcept { return epsilon_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    double at(std::size_t kx_bin, std::size_t ky_bin) const noexcept { return values_[ky_bin * width_ + kx_bin]; }
    const std::vector<double>& values() const noexcept { return values_; }

    static double value(long kx, long ky, double epsilon) noexcept;

private:
    std::size_t width_;
    std::size_t height_;
    double epsilon_;
    std::vector<double> values_;
};

/// F^{-1}(diag[m] F(field)) on the periodic grid, full complex result.
std::vector<std::complex<double>> apply_multiplier_complex(const Image& field, const SpectralMultiplier& multiplier);

/// Real part of apply_multiplier_complex with m built from `epsilon`.
Image apply_fractional_multiplier(const Image& field, double epsilon);

/// Nonlocal edge detector |grad^{1-eps} I|: the spectral multiplier applied
/// to the spatial central-difference gradient magnitude. epsilon in [0, 1).
Image fractional_gradient_magnitude(const Image& image, double epsilon);

} // namespace texdiff::spectral
