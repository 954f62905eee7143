#pragma once

#include "texdiff/image.hpp"

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace texdiff::descriptors {

enum class Descriptor { LBP, LBPV, CLBP, LBPHF, LTP, CSLBP };

inline constexpr Descriptor kAllDescriptors[] = {Descriptor::LBP,   Descriptor::LBPV, Descriptor::CLBP,
                                                 Descriptor::LBPHF, Descriptor::LTP,  Descriptor::CSLBP};

/// Lower-case token used by the CLI and in CSV files: lbp, lbpv, clbp, ...
std::string_view descriptor_name(Descriptor d) noexcept;
Descriptor parse_descriptor(std::string_view name);

/// Feature vector length: LBP 256, LBPV 10, CLBP 514, LBPHF 38, LTP 512, CSLBP 256.
std::size_t feature_length(Descriptor d) noexcept;

inline constexpr int kNeighbors = 8;

/// Ring offsets (dx, dy) for p = 0..7: east first, then counter-clockwise
/// as seen on screen (y grows downwards).
inline constexpr std::array<std::array<int, 2>, 8> kRingOffsets{{
    {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

/// 8-bit gray levels, levels = round(255 * clamp(intensity, 0, 1)).
struct QuantizedImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> levels;

    int at(std::size_t x, std::size_t y) const noexcept { return levels[y * width + x]; }
    int clamped(std::ptrdiff_t x, std::ptrdiff_t y) const noexcept;
};

QuantizedImage quantize(const Image& image);

using Ring = std::array<int, kNeighbors>;
/// 3x3 gray levels indexed [row][column]; centre at [1][1].
using Window = std::array<std::array<int, 3>, 3>;

Ring ring_from_window(const Window& window) noexcept;
/// Replicate-padded ring around (x, y).
Ring ring_at(const QuantizedImage& image, std::size_t x, std::size_t y) noexcept;

/// Sign pattern: bit p set iff ring[p] >= centre.
std::uint8_t sign_pattern(int centre, const Ring& ring) noexcept;
int lbp_code(const Window& window) noexcept;

/// Circular 0<->1 transition count of an 8-bit pattern (wrap included).
int uniformity(std::uint8_t pattern) noexcept;
/// popcount if uniformity < 2, else P + 1 = 9.
int riu2_from_pattern(std::uint8_t pattern) noexcept;
int riu2_code(const Window& window) noexcept;

/// 512 * population variance of the ring, an exact integer.
std::int64_t ring_variance_x512(const Ring& ring) noexcept;
double ring_variance(const Ring& ring) noexcept;

/// u2 mapping: the 58 patterns with uniformity <= 2 get bins 0..57 in
/// increasing code order, every other pattern maps to 58.
int uniform_bin(std::uint8_t pattern) noexcept;
inline constexpr int kUniformBins = 59;

std::vector<std::int64_t> lbp_histogram(const QuantizedImage& image);
std::vector<double> lbpv_histogram(const QuantizedImage& image);

struct ClbpHistograms {
    std::vector<std::int64_t> sign;      // 256 bins, equal to the LBP histogram
    std::vector<std::int64_t> magnitude; // 256 bins
    std::vector<std::int64_t> centre;    // 2 bins
};
ClbpHistograms clbp_histograms(const QuantizedImage& image);

/// 38 Fourier features from a raw 256-bin LBP histogram: |H(n,u)| for
/// n = 1..7, u = 0..4, then h(all zeros), h(all ones), h(non-uniform).
std::vector<double> lbphf_from_histogram(const std::vector<std::int64_t>& lbp_hist);
std::vector<std::int64_t> uniform_histogram(const std::vector<std::int64_t>& lbp_hist);

struct LtpHistograms {
    std::vector<std::int64_t> upper; // 256 bins, bit set iff neighbour > centre + k
    std::vector<std::int64_t> lower; // 256 bins, bit set iff neighbour < centre - k
};
LtpHistograms ltp_histograms(const QuantizedImage& image, int k);

/// Centre-symmetric code: bit i set iff ring[i] - ring[i + 4] > threshold.
int cslbp_code(const std::array<double, kNeighbors>& ring, double threshold) noexcept;
/// 4x4 grid of 16-bin CSLBP histograms on an image already in [0, 1].
/// Throws ShapeError below 4x4 pixels.
std::vector<std::int64_t> cslbp_histogram(const Image& normalized, double threshold);

/// 3x3 median with replicate padding.
Image median3x3(const Image& image);

struct DescriptorOptions {
    int ltp_k = 5;
    double cslbp_threshold = 0.01;
    bool cslbp_median = false;

    friend bool operator==(const DescriptorOptions&, const DescriptorOptions&) = default;
};

struct FeatureVector {
    Descriptor descriptor = Descriptor::LBP;
    std::vector<double> values;
};

/// Raw (unnormalized) feature vector for `image`.
std::vector<double> raw_features(const Image& image, Descriptor descriptor, const DescriptorOptions& options = {});

/// Quantizes (or range-normalizes, for CSLBP), runs the descriptor and
/// L1-normalizes each histogram block (S|M|C for CLBP, upper|lower for LTP,
/// the whole vector otherwise). Zero-mass blocks stay zero. Throws
/// NumericalError on non-finite input.
FeatureVector extract(const Image& image, Descriptor descriptor, const DescriptorOptions& options = {});

/// Block boundaries used by extract's normalization.
std::vector<std::size_t> block_sizes(Descriptor descriptor);

} // namespace texdiff::descriptors
