#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace texdiff {

/// Single-channel real-valued intensity grid, row-major.
///
/// Images produced by the loaders hold intensities in [0, 1]. Intermediate
/// fields (gradient magnitudes, spectral edge maps) reuse the same type and
/// may leave that range.
class Image {
public:
    Image() = default;
    Image(std::size_t width, std::size_t height, double fill = 0.0);
    Image(std::size_t width, std::size_t height, std::vector<double> data);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& at(std::size_t x, std::size_t y) noexcept { return data_[y * width_ + x]; }
    double at(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }

    /// Replicate-padded access: coordinates are clamped into the grid.
    double clamped(std::ptrdiff_t x, std::ptrdiff_t y) const noexcept;

    std::span<double> pixels() noexcept { return data_; }
    std::span<const double> pixels() const noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    double min() const;
    double max() const;
    double mean() const;
    bool all_finite() const noexcept;

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

/// Affine rescale so that min -> 0 and max -> 1. A constant image maps to
/// all zeros.
Image normalize(const Image& image);

Image transpose(const Image& image);

} // namespace texdiff
