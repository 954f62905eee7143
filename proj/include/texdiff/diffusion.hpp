#pragma once

#include "texdiff/image.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace texdiff::diffusion {

enum class Method { Gaussian, PeronaMalik, ForwardBackward, Nonlocal };

/// CLI / file name token: gaussian, pm, fbr, nl.
std::string_view method_name(Method method) noexcept;
Method parse_method(std::string_view name);
inline constexpr Method kAllMethods[] = {Method::Gaussian, Method::PeronaMalik, Method::ForwardBackward,
                                         Method::Nonlocal};

struct DiffusionParams {
    double kappa = 1.0;       // edge threshold, in intensity units of the [0,1] image
    double delta = 0.1;       // forward-backward regularization weight
    double p = 1.1;           // growth exponent, > 1
    double epsilon = 0.1;     // fractional order of the nonlocal edge detector
    double dt = 0.25;         // explicit time step
    double sigma_step = 0.5;  // Gaussian sigma increment per scale
    double grad_floor = 1e-6; // lower clamp for |grad I| in the singular FBR term

    /// Throws ParameterError when an invariant is violated.
    void validate() const;

    friend bool operator==(const DiffusionParams&, const DiffusionParams&) = default;
};

/// Perona-Malik edge-stopping function 1 / (1 + (s / kappa)^2).
double pm_diffusivity(double s, double kappa) noexcept;

/// Unclamped forward-backward diffusivity
/// 1 / (1 + (s / kappa)^2) + delta * max(s, grad_floor)^(p - 2).
double fbr_diffusivity(double s, const DiffusionParams& params) noexcept;

/// Largest per-edge diffusivity for which the explicit 4-neighbour update
/// is a convex combination: 1 / (4 dt).
double stable_diffusivity_bound(double dt) noexcept;

/// Diffusivity actually used by fbr_step: fbr_diffusivity clamped to
/// stable_diffusivity_bound(dt).
double fbr_edge_diffusivity(double s, const DiffusionParams& params) noexcept;

/// Unnormalized continuous Gaussian 1/(2 pi sigma^2) exp(-(x^2+y^2)/(2 sigma^2)).
double gaussian_density(double x, double y, double sigma) noexcept;

/// Mass-normalized 1-D taps of radius ceil(3 sigma). The 2-D kernel is the
/// outer product of these taps, which equals the normalized 2-D Gaussian.
std::vector<double> gaussian_taps(double sigma);

/// Separable Gaussian convolution with replicate padding. Both pass orders
/// are evaluated and averaged so the result commutes exactly with
/// transposition.
Image gaussian_blur(const Image& image, double sigma);

/// Central-difference |grad I| with replicate boundary. Requires >= 2x2.
Image gradient_magnitude(const Image& image);

/// One explicit Perona-Malik step on the 4-neighbour one-sided stencil.
Image pm_step(const Image& image, const DiffusionParams& params);

/// One explicit forward-backward regularized step (see fbr_edge_diffusivity).
Image fbr_step(const Image& image, const DiffusionParams& params);

enum class EdgeDetector {
    Fractional,      // c from the spectral fractional gradient, averaged over edge endpoints
    LocalDifference, // epsilon = 0 reduction: c from each edge's own difference (equals pm_step)
};

/// Per-pixel nonlocal diffusivity 1 / (1 + (F / kappa)^2) with
/// F = fractional_gradient_magnitude(image, epsilon).
Image nl_diffusivity(const Image& image, const DiffusionParams& params);

/// One explicit nonlocal step. The fractional field is recomputed from the
/// current image on every call.
Image nl_step(const Image& image, const DiffusionParams& params,
              EdgeDetector detector = EdgeDetector::Fractional);

/// Scale `it` (1-based) of the stack. For Gaussian this blurs `source` at
/// sigma = it * sigma_step; the iterative methods step `previous` once.
Image advance(Method method, const Image& source, const Image& previous, int it, const DiffusionParams& params);

struct ScaleStack {
    Method method = Method::Gaussian;
    DiffusionParams params;
    std::vector<Image> scales; // scales[i] is iteration it = i + 1

    const Image& at_iteration(int it) const { return scales.at(static_cast<std::size_t>(it - 1)); }
};

ScaleStack diffuse(const Image& image, Method method, int n_scales, const DiffusionParams& params);

/// Sum of |I(neighbour) - I(centre)| over all horizontal and vertical edges.
double total_variation(const Image& image);

} // namespace texdiff::diffusion
