#include "texdiff/descriptors.hpp"

#include "texdiff/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <span>
#include <string>

namespace texdiff::descriptors {

namespace {

std::uint8_t rotl8(std::uint8_t v, int s) noexcept {
    return std::rotl(v, s);
}

struct UniformTable {
    std::array<int, 256> bin{};
    UniformTable() {
        int next = 0;
        for (int p = 0; p < 256; ++p) bin[p] = uniformity(static_cast<std::uint8_t>(p)) <= 2 ? next++ : 58;
    }
};

const UniformTable& uniform_table() {
    static const UniformTable table;
    return table;
}

// Per-pixel codes computed row-parallel, then counted serially so the
// histogram does not depend on the thread partition.
template <class CodeFn>
std::vector<std::int64_t> count_codes(std::size_t width, std::size_t height, std::size_t bins, CodeFn&& code) {
    std::vector<std::uint16_t> codes(width * height);
    const auto H = static_cast<std::ptrdiff_t>(height);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < width; ++x)
            codes[static_cast<std::size_t>(y) * width + x] = static_cast<std::uint16_t>(code(x, static_cast<std::size_t>(y)));
    std::vector<std::int64_t> hist(bins, 0);
    for (auto c : codes) ++hist[c];
    return hist;
}

void l1_normalize(std::span<double> block) {
    double total = 0.0;
    for (double v : block) total += std::abs(v);
    if (total > 0.0)
        for (double& v : block) v /= total;
}

template <class T>
void append(std::vector<double>& out, const std::vector<T>& values) {
    for (const auto& v : values) out.push_back(static_cast<double>(v));
}

} // namespace

std::string_view descriptor_name(Descriptor d) noexcept {
    switch (d) {
    case Descriptor::LBP: return "lbp";
    case Descriptor::LBPV: return "lbpv";
    case Descriptor::CLBP: return "clbp";
    case Descriptor::LBPHF: return "lbphf";
    case Descriptor::LTP: return "ltp";
    case Descriptor::CSLBP: return "cslbp";
    }
    return "unknown";
}

Descriptor parse_descriptor(std::string_view name) {
    for (Descriptor d : kAllDescriptors)
        if (descriptor_name(d) == name) return d;
    throw ParameterError("unknown descriptor: " + std::string(name));
}

std::size_t feature_length(Descriptor d) noexcept {
    switch (d) {
    case Descriptor::LBP: return 256;
    case Descriptor::LBPV: return kNeighbors + 2;
    case Descriptor::CLBP: return 256 + 256 + 2;
    case Descriptor::LBPHF: return 38;
    case Descriptor::LTP: return 512;
    case Descriptor::CSLBP: return 256;
    }
    return 0;
}

std::vector<std::size_t> block_sizes(Descriptor d) {
    switch (d) {
    case Descriptor::CLBP: return {256, 256, 2};
    case Descriptor::LTP: return {256, 256};
    default: return {feature_length(d)};
    }
}

int QuantizedImage::clamped(std::ptrdiff_t x, std::ptrdiff_t y) const noexcept {
    x = std::clamp<std::ptrdiff_t>(x, 0, static_cast<std::ptrdiff_t>(width) - 1);
    y = std::clamp<std::ptrdiff_t>(y, 0, static_cast<std::ptrdiff_t>(height) - 1);
    return levels[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)];
}

QuantizedImage quantize(const Image& image) {
    QuantizedImage q{image.width(), image.height(), std::vector<std::uint8_t>(image.size())};
    auto src = image.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (!std::isfinite(src[i])) throw NumericalError("non-finite intensity during quantization");
        q.levels[i] = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(src[i], 0.0, 1.0)));
    }
    return q;
}

Ring ring_from_window(const Window& window) noexcept {
    Ring ring{};
    for (int p = 0; p < kNeighbors; ++p) ring[p] = window[1 + kRingOffsets[p][1]][1 + kRingOffsets[p][0]];
    return ring;
}

Ring ring_at(const QuantizedImage& image, std::size_t x, std::size_t y) noexcept {
    Ring ring{};
    const auto xi = static_cast<std::ptrdiff_t>(x);
    const auto yi = static_cast<std::ptrdiff_t>(y);
    for (int p = 0; p < kNeighbors; ++p) ring[p] = image.clamped(xi + kRingOffsets[p][0], yi + kRingOffsets[p][1]);
    return ring;
}

std::uint8_t sign_pattern(int centre, const Ring& ring) noexcept {
    unsigned code = 0;
    for (int p = 0; p < kNeighbors; ++p)
        if (ring[p] >= centre) code |= 1u << p;
    return static_cast<std::uint8_t>(code);
}

int lbp_code(const Window& window) noexcept { return sign_pattern(window[1][1], ring_from_window(window)); }

int uniformity(std::uint8_t pattern) noexcept { return std::popcount(static_cast<std::uint8_t>(pattern ^ rotl8(pattern, 1))); }

int riu2_from_pattern(std::uint8_t pattern) noexcept {
    return uniformity(pattern) < 2 ? std::popcount(pattern) : kNeighbors + 1;
}

int riu2_code(const Window& window) noexcept { return riu2_from_pattern(static_cast<std::uint8_t>(lbp_code(window))); }

std::int64_t ring_variance_x512(const Ring& ring) noexcept {
    const std::int64_t sum = std::accumulate(ring.begin(), ring.end(), std::int64_t{0});
    std::int64_t acc = 0;
    for (int g : ring) {
        const std::int64_t d = 8 * static_cast<std::int64_t>(g) - sum;
        acc += d * d;
    }
    return acc;
}

double ring_variance(const Ring& ring) noexcept { return static_cast<double>(ring_variance_x512(ring)) / 512.0; }

int uniform_bin(std::uint8_t pattern) noexcept { return uniform_table().bin[pattern]; }

std::vector<std::int64_t> lbp_histogram(const QuantizedImage& image) {
    return count_codes(image.width, image.height, 256, [&](std::size_t x, std::size_t y) {
        return sign_pattern(image.at(x, y), ring_at(image, x, y));
    });
}

std::vector<double> lbpv_histogram(const QuantizedImage& image) {
    const std::size_t n = image.width * image.height;
    std::vector<std::uint8_t> bin(n);
    std::vector<std::int64_t> var(n);
    const auto H = static_cast<std::ptrdiff_t>(image.height);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t yy = 0; yy < H; ++yy) {
        const auto y = static_cast<std::size_t>(yy);
        for (std::size_t x = 0; x < image.width; ++x) {
            const Ring ring = ring_at(image, x, y);
            bin[y * image.width + x] = static_cast<std::uint8_t>(riu2_from_pattern(sign_pattern(image.at(x, y), ring)));
            var[y * image.width + x] = ring_variance_x512(ring);
        }
    }
    // Integer accumulation keeps the sums exact.
    std::vector<std::int64_t> acc(kNeighbors + 2, 0);
    for (std::size_t i = 0; i < n; ++i) acc[bin[i]] += var[i];
    std::vector<double> hist(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) hist[k] = static_cast<double>(acc[k]) / 512.0;
    return hist;
}

ClbpHistograms clbp_histograms(const QuantizedImage& image) {
    const std::size_t w = image.width;
    const std::size_t h = image.height;
    const auto n = static_cast<std::int64_t>(w * h);

    // Global thresholds kept as exact integer ratios:
    // magnitude threshold c = sum_abs / (8 n), centre threshold = sum_gray / n.
    std::int64_t sum_abs = 0;
    std::int64_t sum_gray = 0;
    const auto H = static_cast<std::ptrdiff_t>(h);
#pragma omp parallel for schedule(static) reduction(+ : sum_abs, sum_gray)
    for (std::ptrdiff_t yy = 0; yy < H; ++yy) {
        const auto y = static_cast<std::size_t>(yy);
        for (std::size_t x = 0; x < w; ++x) {
            const int c = image.at(x, y);
            sum_gray += c;
            for (int g : ring_at(image, x, y)) sum_abs += std::abs(c - g);
        }
    }

    ClbpHistograms out;
    out.sign = lbp_histogram(image);
    out.magnitude = count_codes(w, h, 256, [&](std::size_t x, std::size_t y) {
        const int c = image.at(x, y);
        const Ring ring = ring_at(image, x, y);
        unsigned code = 0;
        for (int p = 0; p < kNeighbors; ++p)
            if (8 * n * std::abs(c - ring[p]) >= sum_abs) code |= 1u << p;
        return code;
    });
    out.centre = count_codes(w, h, 2, [&](std::size_t x, std::size_t y) {
        return n * image.at(x, y) >= sum_gray ? 1 : 0;
    });
    return out;
}

std::vector<std::int64_t> uniform_histogram(const std::vector<std::int64_t>& lbp_hist) {
    if (lbp_hist.size() != 256) throw ShapeError("uniform histogram expects 256 LBP bins");
    std::vector<std::int64_t> out(kUniformBins, 0);
    for (int p = 0; p < 256; ++p) out[uniform_bin(static_cast<std::uint8_t>(p))] += lbp_hist[p];
    return out;
}

std::vector<double> lbphf_from_histogram(const std::vector<std::int64_t>& lbp_hist) {
    if (lbp_hist.size() != 256) throw ShapeError("LBPHF expects 256 LBP bins");
    const auto u2 = uniform_histogram(lbp_hist);
    std::vector<double> out;
    out.reserve(38);
    for (int ones = 1; ones < kNeighbors; ++ones) {
        const auto base = static_cast<std::uint8_t>((1u << ones) - 1u);
        for (int u = 0; u <= kNeighbors / 2; ++u) {
            std::complex<double> acc{0.0, 0.0};
            for (int r = 0; r < kNeighbors; ++r) {
                const double count = static_cast<double>(u2[uniform_bin(rotl8(base, r))]);
                const double angle = -2.0 * std::numbers::pi * u * r / kNeighbors;
                acc += count * std::complex<double>(std::cos(angle), std::sin(angle));
            }
            out.push_back(std::abs(acc));
        }
    }
    out.push_back(static_cast<double>(u2[uniform_bin(0x00)]));
    out.push_back(static_cast<double>(u2[uniform_bin(0xFF)]));
    out.push_back(static_cast<double>(u2[58]));
    return out;
}

LtpHistograms ltp_histograms(const QuantizedImage& image, int k) {
    if (k < 0) throw ParameterError("LTP threshold k must be >= 0");
    auto pattern = [&](std::size_t x, std::size_t y, bool upper) {
        const int c = image.at(x, y);
        const Ring ring = ring_at(image, x, y);
        unsigned code = 0;
        for (int p = 0; p < kNeighbors; ++p) {
            const bool set = upper ? ring[p] > c + k : ring[p] < c - k;
            if (set) code |= 1u << p;
        }
        return code;
    };
    LtpHistograms out;
    out.upper = count_codes(image.width, image.height, 256, [&](std::size_t x, std::size_t y) { return pattern(x, y, true); });
    out.lower = count_codes(image.width, image.height, 256, [&](std::size_t x, std::size_t y) { return pattern(x, y, false); });
    return out;
}

int cslbp_code(const std::array<double, kNeighbors>& ring, double threshold) noexcept {
    int code = 0;
    for (int i = 0; i < kNeighbors / 2; ++i)
        if (ring[i] - ring[i + kNeighbors / 2] > threshold) code |= 1 << i;
    return code;
}

std::vector<std::int64_t> cslbp_histogram(const Image& normalized, double threshold) {
    const std::size_t w = normalized.width();
    const std::size_t h = normalized.height();
    if (w < 4 || h < 4) throw ShapeError("CSLBP needs at least 4x4 pixels for its 4x4 cell grid");
    return count_codes(w, h, 256, [&](std::size_t x, std::size_t y) {
        std::array<double, kNeighbors> ring{};
        for (int p = 0; p < kNeighbors; ++p)
            ring[p] = normalized.clamped(static_cast<std::ptrdiff_t>(x) + kRingOffsets[p][0],
                                         static_cast<std::ptrdiff_t>(y) + kRingOffsets[p][1]);
        const std::size_t cell = (y * 4 / h) * 4 + (x * 4 / w);
        return static_cast<int>(cell * 16) + cslbp_code(ring, threshold);
    });
}

Image median3x3(const Image& image) {
    Image out(image.width(), image.height());
    const auto H = static_cast<std::ptrdiff_t>(image.height());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t y = 0; y < H; ++y) {
        for (std::size_t xu = 0; xu < image.width(); ++xu) {
            const auto x = static_cast<std::ptrdiff_t>(xu);
            std::array<double, 9> v{};
            int i = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) v[i++] = image.clamped(x + dx, y + dy);
            std::nth_element(v.begin(), v.begin() + 4, v.end());
            out.at(xu, static_cast<std::size_t>(y)) = v[4];
        }
    }
    return out;
}

std::vector<double> raw_features(const Image& image, Descriptor descriptor, const DescriptorOptions& options) {
    if (image.empty()) throw ShapeError("cannot extract features from an empty image");
    if (!image.all_finite()) throw NumericalError("non-finite intensity in descriptor input");
    std::vector<double> out;
    out.reserve(feature_length(descriptor));
    if (descriptor == Descriptor::CSLBP) {
        const Image filtered = options.cslbp_median ? median3x3(image) : image;
        append(out, cslbp_histogram(normalize(filtered), options.cslbp_threshold));
        return out;
    }
    const QuantizedImage q = quantize(image);
    switch (descriptor) {
    case Descriptor::LBP: append(out, lbp_histogram(q)); break;
    case Descriptor::LBPV: out = lbpv_histogram(q); break;
    case Descriptor::CLBP: {
        const auto h = clbp_histograms(q);
        append(out, h.sign);
        append(out, h.magnitude);
        append(out, h.centre);
        break;
    }
    case Descriptor::LBPHF: out = lbphf_from_histogram(lbp_histogram(q)); break;
    case Descriptor::LTP: {
        const auto h = ltp_histograms(q, options.ltp_k);
        append(out, h.upper);
        append(out, h.lower);
        break;
    }
    case Descriptor::CSLBP: break;
    }
    return out;
}

FeatureVector extract(const Image& image, Descriptor descriptor, const DescriptorOptions& options) {
    FeatureVector fv{descriptor, raw_features(image, descriptor, options)};
    std::size_t offset = 0;
    for (std::size_t len : block_sizes(descriptor)) {
        l1_normalize(std::span<double>(fv.values).subspan(offset, len));
        offset += len;
    }
    return fv;
}

} // namespace texdiff::descriptors
