#include "texdiff/image.hpp"

#include "texdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace texdiff {

Image::Image(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), data_(width * height, fill) {}

Image::Image(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != width_ * height_) {
        throw ShapeError("image data length " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(width_) + "x" +
                         std::to_string(height_));
    }
}

double Image::clamped(std::ptrdiff_t x, std::ptrdiff_t y) const noexcept {
    const auto w = static_cast<std::ptrdiff_t>(width_);
    const auto h = static_cast<std::ptrdiff_t>(height_);
    x = std::clamp<std::ptrdiff_t>(x, 0, w - 1);
    y = std::clamp<std::ptrdiff_t>(y, 0, h - 1);
    return data_[static_cast<std::size_t>(y * w + x)];
}

double Image::min() const {
    if (data_.empty()) throw ShapeError("min of empty image");
    return *std::min_element(data_.begin(), data_.end());
}

double Image::max() const {
    if (data_.empty()) throw ShapeError("max of empty image");
    return *std::max_element(data_.begin(), data_.end());
}

double Image::mean() const {
    if (data_.empty()) throw ShapeError("mean of empty image");
    return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

bool Image::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Image normalize(const Image& image) {
    if (image.empty()) throw ShapeError("cannot normalize an empty image");
    const double lo = image.min();
    const double hi = image.max();
    Image out(image.width(), image.height(), 0.0);
    if (!(hi > lo)) return out;
    const double range = hi - lo;
    auto src = image.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (src[i] - lo) / range;
    return out;
}

Image transpose(const Image& image) {
    Image out(image.height(), image.width());
    for (std::size_t y = 0; y < image.height(); ++y)
        for (std::size_t x = 0; x < image.width(); ++x) out.at(y, x) = image.at(x, y);
    return out;
}

} // namespace texdiff
