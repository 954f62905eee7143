#include "texdiff/diffusion.hpp"

#include "texdiff/error.hpp"
#include "texdiff/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace texdiff::diffusion {

namespace {

void validate_stencil_params(const DiffusionParams& p) {
    if (!(p.dt > 0.0 && p.dt <= 0.25)) throw ParameterError("dt must lie in (0, 0.25]");
    if (!(p.kappa > 0.0)) throw ParameterError("kappa must be > 0");
    if (!(p.p > 1.0)) throw ParameterError("p must be > 1");
    if (!(p.delta >= 0.0)) throw ParameterError("delta must be >= 0");
    if (!(p.grad_floor > 0.0)) throw ParameterError("grad_floor must be > 0");
    if (!(p.sigma_step > 0.0)) throw ParameterError("sigma_step must be > 0");
}

// Edge coefficients are stored per edge: horizontal edge (x, x+1) at
// h[y * (w-1) + x], vertical edge (y, y+1) at v[y * w + x]. Fluxes are
// c * (I(right|below) - I(centre)); each pixel gains its east/south flux
// and loses its west/north flux, summed in the order E, W, S, N.
template <class EdgeFlux>
Image divergence_step(const Image& image, double dt, EdgeFlux&& flux) {
    const std::size_t w = image.width();
    const std::size_t h = image.height();
    std::vector<double> fh(w > 1 ? (w - 1) * h : 0);
    std::vector<double> fv(h > 1 ? w * (h - 1) : 0);
    const auto H = static_cast<std::ptrdiff_t>(h);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t yy = 0; yy < H; ++yy) {
        const auto y = static_cast<std::size_t>(yy);
        for (std::size_t x = 0; x + 1 < w; ++x) fh[y * (w - 1) + x] = flux(x, y, x + 1, y);
        if (y + 1 < h)
            for (std::size_t x = 0; x < w; ++x) fv[y * w + x] = flux(x, y, x, y + 1);
    }

    Image out(w, h);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t yy = 0; yy < H; ++yy) {
        const auto y = static_cast<std::size_t>(yy);
        for (std::size_t x = 0; x < w; ++x) {
            const double east = x + 1 < w ? fh[y * (w - 1) + x] : 0.0;
            const double west = x > 0 ? -fh[y * (w - 1) + x - 1] : 0.0;
            const double south = y + 1 < h ? fv[y * w + x] : 0.0;
            const double north = y > 0 ? -fv[(y - 1) * w + x] : 0.0;
            double sum = 0.0;
            sum += east;
            sum += west;
            sum += south;
            sum += north;
            out.at(x, y) = image.at(x, y) + dt * sum;
        }
    }
    return out;
}

// One 1-D pass along rows (horizontal == true) or columns with replicate
// padding. Taps falling off either end are folded into a single weight on
// the border sample. Accumulating deviations from the centre sample keeps
// constant lines exactly constant.
Image blur_pass(const Image& src, const std::vector<double>& taps, bool horizontal) {
    const std::size_t w = src.width();
    const std::size_t h = src.height();
    const auto r = static_cast<std::ptrdiff_t>(taps.size() / 2);
    std::vector<double> prefix(taps.size() + 1, 0.0);
    for (std::size_t i = 0; i < taps.size(); ++i) prefix[i + 1] = prefix[i] + taps[i];

    const std::size_t len = horizontal ? w : h;
    const std::size_t lines = horizontal ? h : w;
    const auto n = static_cast<std::ptrdiff_t>(len);
    Image out(w, h);
    const auto L = static_cast<std::ptrdiff_t>(lines);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t line = 0; line < L; ++line) {
        auto sample = [&](std::ptrdiff_t i) {
            return horizontal ? src.at(static_cast<std::size_t>(i), static_cast<std::size_t>(line))
                              : src.at(static_cast<std::size_t>(line), static_cast<std::size_t>(i));
        };
        for (std::ptrdiff_t x = 0; x < n; ++x) {
            const std::ptrdiff_t lo = std::max(-r, -x);
            const std::ptrdiff_t hi = std::min(r, n - 1 - x);
            // taps index t = offset + r; prefix[t] = sum of taps[0..t).
            const double left_weight = prefix[static_cast<std::size_t>(lo + r)];
            const double right_weight = prefix[taps.size()] - prefix[static_cast<std::size_t>(hi + r + 1)];
            const double centre = sample(x);
            double acc = left_weight * (sample(0) - centre);
            for (std::ptrdiff_t k = lo; k <= hi; ++k)
                acc += taps[static_cast<std::size_t>(k + r)] * (sample(x + k) - centre);
            acc += right_weight * (sample(n - 1) - centre);
            acc += centre;
            if (horizontal)
                out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(line)) = acc;
            else
                out.at(static_cast<std::size_t>(line), static_cast<std::size_t>(x)) = acc;
        }
    }
    return out;
}

} // namespace

std::string_view method_name(Method method) noexcept {
    switch (method) {
    case Method::Gaussian: return "gaussian";
    case Method::PeronaMalik: return "pm";
    case Method::ForwardBackward: return "fbr";
    case Method::Nonlocal: return "nl";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : kAllMethods)
        if (method_name(m) == name) return m;
    throw ParameterError("unknown diffusion method: " + std::string(name));
}

void DiffusionParams::validate() const {
    validate_stencil_params(*this);
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in (0, 1)");
}

double pm_diffusivity(double s, double kappa) noexcept {
    const double q = s / kappa;
    return 1.0 / (1.0 + q * q);
}

double fbr_diffusivity(double s, const DiffusionParams& params) noexcept {
    return pm_diffusivity(s, params.kappa) + params.delta * std::pow(std::max(s, params.grad_floor), params.p - 2.0);
}

double stable_diffusivity_bound(double dt) noexcept { return 1.0 / (4.0 * dt); }

double fbr_edge_diffusivity(double s, const DiffusionParams& params) noexcept {
    return std::min(fbr_diffusivity(s, params), stable_diffusivity_bound(params.dt));
}

double gaussian_density(double x, double y, double sigma) noexcept {
    const double s2 = sigma * sigma;
    return std::exp(-(x * x + y * y) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

std::vector<double> gaussian_taps(double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("sigma must be > 0");
    const auto r = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
    std::vector<double> taps(static_cast<std::size_t>(2 * r + 1));
    double total = 0.0;
    for (std::ptrdiff_t i = -r; i <= r; ++i) {
        const double v = std::exp(-static_cast<double>(i * i) / (2.0 * sigma * sigma));
        taps[static_cast<std::size_t>(i + r)] = v;
        total += v;
    }
    for (double& t : taps) t /= total;
    return taps;
}

Image gaussian_blur(const Image& image, double sigma) {
    const auto taps = gaussian_taps(sigma);
    if (image.empty()) return image;
    const Image rows_then_cols = blur_pass(blur_pass(image, taps, true), taps, false);
    const Image cols_then_rows = blur_pass(blur_pass(image, taps, false), taps, true);
    Image out(image.width(), image.height());
    auto a = rows_then_cols.pixels();
    auto b = cols_then_rows.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = 0.5 * (a[i] + b[i]);
    return out;
}

Image gradient_magnitude(const Image& image) {
    if (image.width() < 2 || image.height() < 2)
        throw ShapeError("gradient magnitude needs at least a 2x2 image");
    const std::size_t w = image.width();
    Image out(w, image.height());
    const auto H = static_cast<std::ptrdiff_t>(image.height());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t y = 0; y < H; ++y) {
        for (std::size_t xu = 0; xu < w; ++xu) {
            const auto x = static_cast<std::ptrdiff_t>(xu);
            const double ix = 0.5 * (image.clamped(x + 1, y) - image.clamped(x - 1, y));
            const double iy = 0.5 * (image.clamped(x, y + 1) - image.clamped(x, y - 1));
            out.at(xu, static_cast<std::size_t>(y)) = std::sqrt(ix * ix + iy * iy);
        }
    }
    return out;
}

Image pm_step(const Image& image, const DiffusionParams& params) {
    validate_stencil_params(params);
    const double kappa = params.kappa;
    return divergence_step(image, params.dt, [&](std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) {
        const double d = image.at(x1, y1) - image.at(x0, y0);
        return pm_diffusivity(std::abs(d), kappa) * d;
    });
}

Image fbr_step(const Image& image, const DiffusionParams& params) {
    validate_stencil_params(params);
    return divergence_step(image, params.dt, [&](std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) {
        const double d = image.at(x1, y1) - image.at(x0, y0);
        return fbr_edge_diffusivity(std::abs(d), params) * d;
    });
}

Image nl_diffusivity(const Image& image, const DiffusionParams& params) {
    Image c = spectral::fractional_gradient_magnitude(image, params.epsilon);
    for (double& v : c.pixels()) v = pm_diffusivity(v, params.kappa);
    return c;
}

Image nl_step(const Image& image, const DiffusionParams& params, EdgeDetector detector) {
    if (detector == EdgeDetector::LocalDifference) return pm_step(image, params);
    params.validate();
    const Image c = nl_diffusivity(image, params);
    return divergence_step(image, params.dt, [&](std::size_t x0, std::size_t y0, std::size_t x1, std::size_t y1) {
        const double d = image.at(x1, y1) - image.at(x0, y0);
        return 0.5 * (c.at(x0, y0) + c.at(x1, y1)) * d;
    });
}

Image advance(Method method, const Image& source, const Image& previous, int it, const DiffusionParams& params) {
    switch (method) {
    case Method::Gaussian: return gaussian_blur(source, params.sigma_step * it);
    case Method::PeronaMalik: return pm_step(previous, params);
    case Method::ForwardBackward: return fbr_step(previous, params);
    case Method::Nonlocal: return nl_step(previous, params);
    }
    throw ParameterError("unknown diffusion method");
}

ScaleStack diffuse(const Image& image, Method method, int n_scales, const DiffusionParams& params) {
    if (n_scales < 1) throw ParameterError("n_scales must be >= 1");
    params.validate();
    ScaleStack stack{method, params, {}};
    stack.scales.reserve(static_cast<std::size_t>(n_scales));
    const Image* previous = &image;
    for (int it = 1; it <= n_scales; ++it) {
        stack.scales.push_back(advance(method, image, *previous, it, params));
        previous = &stack.scales.back();
    }
    return stack;
}

double total_variation(const Image& image) {
    double tv = 0.0;
    for (std::size_t y = 0; y < image.height(); ++y)
        for (std::size_t x = 0; x < image.width(); ++x) {
            if (x + 1 < image.width()) tv += std::abs(image.at(x + 1, y) - image.at(x, y));
            if (y + 1 < image.height()) tv += std::abs(image.at(x, y + 1) - image.at(x, y));
        }
    return tv;
}

} // namespace texdiff::diffusion
