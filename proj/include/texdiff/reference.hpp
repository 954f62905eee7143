#pragma once

// Serial reference kernels. Each mirrors a parallel kernel from diffusion.hpp
// or descriptors.hpp using the plain per-pixel formulation; tests check the
// parallel kernels against these and the benchmark compares their speed.

#include "texdiff/descriptors.hpp"
#include "texdiff/diffusion.hpp"
#include "texdiff/image.hpp"

#include <cstdint>
#include <vector>

namespace texdiff::reference {

/// Direct 2-D convolution with the outer-product kernel, replicate padding.
Image gaussian_blur(const Image& image, double sigma);

/// Per-pixel explicit updates; bit-identical to the parallel steps.
Image pm_step(const Image& image, const diffusion::DiffusionParams& params);
Image fbr_step(const Image& image, const diffusion::DiffusionParams& params);
Image nl_step(const Image& image, const diffusion::DiffusionParams& params);

std::vector<std::int64_t> lbp_histogram(const descriptors::QuantizedImage& image);
std::vector<double> lbpv_histogram(const descriptors::QuantizedImage& image);
descriptors::ClbpHistograms clbp_histograms(const descriptors::QuantizedImage& image);
descriptors::LtpHistograms ltp_histograms(const descriptors::QuantizedImage& image, int k);
std::vector<std::int64_t> cslbp_histogram(const Image& normalized, double threshold);

} // namespace texdiff::reference
