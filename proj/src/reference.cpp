#include "texdiff/reference.hpp"

#include "texdiff/error.hpp"

#include <algorithm>
#include <cmath>

namespace texdiff::reference {

using descriptors::kNeighbors;
using descriptors::kRingOffsets;
using descriptors::QuantizedImage;

namespace {

// Neighbour order matches the parallel kernels' flux summation: E, W, S, N.
constexpr int kStencil[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};

template <class Coefficient>
Image explicit_step(const Image& image, double dt, Coefficient&& coefficient) {
    Image out(image.width(), image.height());
    for (std::size_t y = 0; y < image.height(); ++y) {
        for (std::size_t x = 0; x < image.width(); ++x) {
            const auto xi = static_cast<std::ptrdiff_t>(x);
            const auto yi = static_cast<std::ptrdiff_t>(y);
            const double centre = image.at(x, y);
            double sum = 0.0;
            for (const auto& d : kStencil) {
                const std::ptrdiff_t nx = std::clamp<std::ptrdiff_t>(xi + d[0], 0, static_cast<std::ptrdiff_t>(image.width()) - 1);
                const std::ptrdiff_t ny = std::clamp<std::ptrdiff_t>(yi + d[1], 0, static_cast<std::ptrdiff_t>(image.height()) - 1);
                const double diff = image.at(static_cast<std::size_t>(nx), static_cast<std::size_t>(ny)) - centre;
                sum += coefficient(x, y, static_cast<std::size_t>(nx), static_cast<std::size_t>(ny), diff) * diff;
            }
            out.at(x, y) = centre + dt * sum;
        }
    }
    return out;
}

} // namespace

Image gaussian_blur(const Image& image, double sigma) {
    const auto taps = diffusion::gaussian_taps(sigma);
    const auto r = static_cast<std::ptrdiff_t>(taps.size() / 2);
    Image out(image.width(), image.height());
    for (std::size_t y = 0; y < image.height(); ++y)
        for (std::size_t x = 0; x < image.width(); ++x) {
            const double centre = image.at(x, y);
            double acc = 0.0;
            for (std::ptrdiff_t j = -r; j <= r; ++j)
                for (std::ptrdiff_t i = -r; i <= r; ++i)
                    acc += taps[static_cast<std::size_t>(i + r)] * taps[static_cast<std::size_t>(j + r)] *
                           (image.clamped(static_cast<std::ptrdiff_t>(x) + i, static_cast<std::ptrdiff_t>(y) + j) - centre);
            out.at(x, y) = centre + acc;
        }
    return out;
}

Image pm_step(const Image& image, const diffusion::DiffusionParams& params) {
    return explicit_step(image, params.dt, [&](auto, auto, auto, auto, double diff) {
        return diffusion::pm_diffusivity(std::abs(diff), params.kappa);
    });
}

Image fbr_step(const Image& image, const diffusion::DiffusionParams& params) {
    return explicit_step(image, params.dt, [&](auto, auto, auto, auto, double diff) {
        return diffusion::fbr_edge_diffusivity(std::abs(diff), params);
    });
}

Image nl_step(const Image& image, const diffusion::DiffusionParams& params) {
    const Image c = diffusion::nl_diffusivity(image, params);
    return explicit_step(image, params.dt, [&](std::size_t x, std::size_t y, std::size_t nx, std::size_t ny, double) {
        return 0.5 * (c.at(x, y) + c.at(nx, ny));
    });
}

std::vector<std::int64_t> lbp_histogram(const QuantizedImage& image) {
    std::vector<std::int64_t> hist(256, 0);
    for (std::size_t y = 0; y < image.height; ++y)
        for (std::size_t x = 0; x < image.width; ++x)
            ++hist[descriptors::sign_pattern(image.at(x, y), descriptors::ring_at(image, x, y))];
    return hist;
}

std::vector<double> lbpv_histogram(const QuantizedImage& image) {
    std::vector<double> hist(kNeighbors + 2, 0.0);
    for (std::size_t y = 0; y < image.height; ++y)
        for (std::size_t x = 0; x < image.width; ++x) {
            const auto ring = descriptors::ring_at(image, x, y);
            hist[descriptors::riu2_from_pattern(descriptors::sign_pattern(image.at(x, y), ring))] +=
                descriptors::ring_variance(ring);
        }
    return hist;
}

descriptors::ClbpHistograms clbp_histograms(const QuantizedImage& image) {
    const double n = static_cast<double>(image.width * image.height);
    double sum_abs = 0.0;
    double sum_gray = 0.0;
    for (std::size_t y = 0; y < image.height; ++y)
        for (std::size_t x = 0; x < image.width; ++x) {
            sum_gray += image.at(x, y);
            for (int g : descriptors::ring_at(image, x, y)) sum_abs += std::abs(image.at(x, y) - g);
        }
    const double magnitude_threshold = sum_abs / (8.0 * n);
    const double mean_gray = sum_gray / n;

    descriptors::ClbpHistograms out{reference::lbp_histogram(image), std::vector<std::int64_t>(256, 0), std::vector<std::int64_t>(2, 0)};
    for (std::size_t y = 0; y < image.height; ++y)
        for (std::size_t x = 0; x < image.width; ++x) {
            const int c = image.at(x, y);
            const auto ring = descriptors::ring_at(image, x, y);
            unsigned code = 0;
            for (int p = 0; p < kNeighbors; ++p)
                if (std::abs(c - ring[p]) >= magnitude_threshold) code |= 1u << p;
            ++out.magnitude[code];
            ++out.centre[c >= mean_gray ? 1 : 0];
        }
    return out;
}

descriptors::LtpHistograms ltp_histograms(const QuantizedImage& image, int k) {
    descriptors::LtpHistograms out{std::vector<std::int64_t>(256, 0), std::vector<std::int64_t>(256, 0)};
    for (std::size_t y = 0; y < image.height; ++y)
        for (std::size_t x = 0; x < image.width; ++x) {
            const int c = image.at(x, y);
            const auto ring = descriptors::ring_at(image, x, y);
            unsigned up = 0;
            unsigned lo = 0;
            for (int p = 0; p < kNeighbors; ++p) {
                if (ring[p] > c + k) up |= 1u << p;
                if (ring[p] < c - k) lo |= 1u << p;
            }
            ++out.upper[up];
            ++out.lower[lo];
        }
    return out;
}

std::vector<std::int64_t> cslbp_histogram(const Image& normalized, double threshold) {
    const std::size_t w = normalized.width();
    const std::size_t h = normalized.height();
    if (w < 4 || h < 4) throw ShapeError("CSLBP needs at least 4x4 pixels");
    std::vector<std::int64_t> hist(256, 0);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            std::array<double, kNeighbors> ring{};
            for (int p = 0; p < kNeighbors; ++p)
                ring[p] = normalized.clamped(static_cast<std::ptrdiff_t>(x) + kRingOffsets[p][0],
                                             static_cast<std::ptrdiff_t>(y) + kRingOffsets[p][1]);
            const std::size_t cell_row = y * 4 / h;
            const std::size_t cell_col = x * 4 / w;
            ++hist[(cell_row * 4 + cell_col) * 16 + static_cast<std::size_t>(descriptors::cslbp_code(ring, threshold))];
        }
    return hist;
}

} // namespace texdiff::reference
