#include "texdiff/spectral.hpp"

#include "texdiff/diffusion.hpp"
#include "texdiff/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace texdiff::spectral {

namespace {

// FFTW's planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

class Plan {
public:
    Plan(std::size_t width, std::size_t height, fftw_complex* buffer, int sign) {
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_dft_2d(static_cast<int>(height), static_cast<int>(width), buffer, buffer, sign,
                                 FFTW_ESTIMATE);
        if (!plan_) throw Error("FFTW failed to create a plan");
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

} // namespace

long lattice_frequency(std::size_t j, std::size_t n) noexcept {
    const std::size_t half_up = (n + 1) / 2;
    return j < half_up ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

double SpectralMultiplier::value(long kx, long ky, double epsilon) noexcept {
    const double norm = std::hypot(static_cast<double>(kx), static_cast<double>(ky));
    return 2.0 * std::numbers::pi * std::pow(std::max(norm, 1.0), -epsilon);
}

SpectralMultiplier::SpectralMultiplier(std::size_t width, std::size_t height, double epsilon)
    : width_(width), height_(height), epsilon_(epsilon), values_(width * height) {
    for (std::size_t y = 0; y < height; ++y) {
        const long ky = lattice_frequency(y, height);
        for (std::size_t x = 0; x < width; ++x)
            values_[y * width + x] = value(lattice_frequency(x, width), ky, epsilon);
    }
}

std::vector<std::complex<double>> apply_multiplier_complex(const Image& field, const SpectralMultiplier& multiplier) {
    if (field.width() != multiplier.width() || field.height() != multiplier.height())
        throw ShapeError("spectral multiplier grid does not match the field");
    const std::size_t n = field.size();
    if (n == 0) return {};

    FftwBuffer buffer(fftw_alloc_complex(n));
    if (!buffer) throw std::bad_alloc();
    Plan forward(field.width(), field.height(), buffer.get(), FFTW_FORWARD);
    Plan backward(field.width(), field.height(), buffer.get(), FFTW_BACKWARD);

    auto src = field.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        buffer[i][0] = src[i];
        buffer[i][1] = 0.0;
    }
    forward.execute();
    const auto& m = multiplier.values();
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = m[i] * inv_n;
        buffer[i][0] *= s;
        buffer[i][1] *= s;
    }
    backward.execute();

    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = {buffer[i][0], buffer[i][1]};
    return out;
}

Image apply_fractional_multiplier(const Image& field, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in [0, 1)");
    const SpectralMultiplier multiplier(field.width(), field.height(), epsilon);
    const auto spectrum = apply_multiplier_complex(field, multiplier);
    Image out(field.width(), field.height());
    auto dst = out.pixels();
    for (std::size_t i = 0; i < spectrum.size(); ++i) dst[i] = spectrum[i].real();
    return out;
}

Image fractional_gradient_magnitude(const Image& image, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ParameterError("epsilon must lie in [0, 1)");
    return apply_fractional_multiplier(diffusion::gradient_magnitude(image), epsilon);
}

} // namespace texdiff::spectral
