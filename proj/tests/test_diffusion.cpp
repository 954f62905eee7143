#include "texdiff/diffusion.hpp"
#include "texdiff/error.hpp"

#include "support/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace texdiff;
using namespace texdiff::diffusion;

namespace {

Image step_edge(std::size_t w, std::size_t h, std::size_t edge_x) {
    Image img(w, h, 0.0);
    for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = edge_x; x < w; ++x) img.at(x, y) = 1.0;
    return img;
}

} // namespace

TEST(DiffusionParams, DefaultsValidate) {
    const DiffusionParams p;
    EXPECT_EQ(p.kappa, 1.0);
    EXPECT_EQ(p.delta, 0.1);
    EXPECT_EQ(p.p, 1.1);
    EXPECT_EQ(p.epsilon, 0.1);
    EXPECT_EQ(p.dt, 0.25);
    EXPECT_EQ(p.sigma_step, 0.5);
    EXPECT_EQ(p.grad_floor, 1e-6);
    EXPECT_NO_THROW(p.validate());
}

TEST(DiffusionParams, RejectsOutOfRangeValues) {
    auto bad = [](auto mutate) {
        DiffusionParams p;
        mutate(p);
        EXPECT_THROW(p.validate(), ParameterError);
    };
    bad([](DiffusionParams& p) { p.dt = 0.3; });
    bad([](DiffusionParams& p) { p.dt = 0.0; });
    bad([](DiffusionParams& p) { p.kappa = 0.0; });
    bad([](DiffusionParams& p) { p.p = 1.0; });
    bad([](DiffusionParams& p) { p.epsilon = 1.0; });
    bad([](DiffusionParams& p) { p.epsilon = 0.0; });
    bad([](DiffusionParams& p) { p.grad_floor = 0.0; });
    bad([](DiffusionParams& p) { p.delta = -0.1; });
}

TEST(MethodNames, RoundTrip) {
    for (Method m : kAllMethods) EXPECT_EQ(parse_method(method_name(m)), m);
    EXPECT_THROW(parse_method("heat"), ParameterError);
}

TEST(PeronaMalik, DiffusivityAnchors) {
    EXPECT_EQ(pm_diffusivity(0.0, 1.0), 1.0);
    EXPECT_EQ(pm_diffusivity(1.0, 1.0), 0.5);
    EXPECT_EQ(pm_diffusivity(0.3, 0.3), 0.5);
}

TEST(PeronaMalik, TwoPixelExample) {
    const Image out = pm_step(Image(2, 1, std::vector<double>{0.0, 1.0}), DiffusionParams{});
    EXPECT_EQ(out.at(0, 0), 0.125);
    EXPECT_EQ(out.at(1, 0), 0.875);
}

TEST(PeronaMalik, ConstantImageUnchanged) {
    const Image img(9, 7, 0.37);
    EXPECT_EQ(pm_step(img, {}), img);
}

TEST(PeronaMalik, SmallKappaPreservesStrongEdges) {
    DiffusionParams p;
    p.kappa = 0.05;
    const Image edge = step_edge(8, 4, 4);
    const Image out = pm_step(edge, p);
    EXPECT_GT(out.at(3, 0), 0.0);
    EXPECT_LT(out.at(3, 0), 0.001);
}

TEST(PeronaMalik, TotalVariationNonIncreasing) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Image img = synthetic::random_image(16, 12, seed);
        double tv = total_variation(img);
        for (int it = 0; it < 30; ++it) {
            img = pm_step(img, {});
            const double next = total_variation(img);
            ASSERT_LE(next, tv + 1e-12) << "seed " << seed << " it " << it;
            tv = next;
        }
    }
}

TEST(ForwardBackward, DiffusivityAtUnitGradient) {
    EXPECT_NEAR(fbr_diffusivity(1.0, DiffusionParams{}), 0.6, 1e-15);
    EXPECT_NEAR(fbr_edge_diffusivity(1.0, DiffusionParams{}), 0.6, 1e-15);
}

TEST(ForwardBackward, SingularTermIsFloored) {
    const DiffusionParams p;
    EXPECT_TRUE(std::isfinite(fbr_diffusivity(0.0, p)));
    EXPECT_EQ(fbr_diffusivity(0.0, p), fbr_diffusivity(p.grad_floor, p));
    EXPECT_EQ(fbr_edge_diffusivity(0.0, p), stable_diffusivity_bound(p.dt));
    EXPECT_EQ(stable_diffusivity_bound(0.25), 1.0);
}

TEST(ForwardBackward, ConstantImageUnchanged) {
    const Image img(6, 6, 0.8);
    EXPECT_EQ(fbr_step(img, {}), img);
}

TEST(ForwardBackward, ZeroDeltaEqualsPeronaMalik) {
    DiffusionParams p;
    p.delta = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Image img = synthetic::random_image(11, 9, seed);
        EXPECT_EQ(fbr_step(img, p), pm_step(img, p));
    }
}

TEST(Gaussian, DensityAtOrigin) {
    EXPECT_NEAR(gaussian_density(0.0, 0.0, 0.5), 0.63662, 5e-6);
    EXPECT_DOUBLE_EQ(gaussian_density(0.0, 0.0, 0.5), 1.0 / (2.0 * std::numbers::pi * 0.25));
}

TEST(Gaussian, TapsAreNormalizedWithRadiusThreeSigma) {
    for (double sigma : {0.5, 1.0, 1.3, 4.0}) {
        const auto taps = gaussian_taps(sigma);
        EXPECT_EQ(taps.size(), 2 * static_cast<std::size_t>(std::ceil(3.0 * sigma)) + 1);
        double sum = 0.0;
        for (double t : taps) sum += t;
        EXPECT_NEAR(sum, 1.0, 1e-15);
        for (std::size_t i = 0; i < taps.size(); ++i) EXPECT_EQ(taps[i], taps[taps.size() - 1 - i]);
    }
}

TEST(Gaussian, ConstantImageUnchanged) {
    const Image img(10, 6, 0.25);
    for (double sigma : {0.5, 2.0, 10.0}) EXPECT_EQ(gaussian_blur(img, sigma), img);
}

TEST(Gaussian, ImpulseResponseIsNormalizedKernel) {
    Image impulse(21, 21, 0.0);
    impulse.at(10, 10) = 1.0;
    const Image out = gaussian_blur(impulse, 1.0);
    const auto taps = gaussian_taps(1.0);
    const int r = static_cast<int>(taps.size() / 2);
    double total = 0.0;
    for (int y = -r; y <= r; ++y)
        for (int x = -r; x <= r; ++x) {
            const double expected = taps[static_cast<std::size_t>(x + r)] * taps[static_cast<std::size_t>(y + r)];
            EXPECT_NEAR(out.at(static_cast<std::size_t>(10 + x), static_cast<std::size_t>(10 + y)), expected, 1e-15);
            total += expected;
        }
    EXPECT_NEAR(total, 1.0, 1e-14);
    EXPECT_EQ(out.at(0, 0), 0.0);
}

TEST(Gaussian, CommutesExactlyWithTranspose) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Image img = synthetic::random_image(13, 8, seed);
        for (double sigma : {0.5, 1.5, 3.0})
            EXPECT_EQ(gaussian_blur(transpose(img), sigma), transpose(gaussian_blur(img, sigma)));
    }
}

TEST(Gaussian, NonPositiveSigmaRejected) {
    EXPECT_THROW(gaussian_blur(Image(4, 4), 0.0), ParameterError);
    EXPECT_THROW(gaussian_blur(Image(4, 4), -1.0), ParameterError);
}

TEST(GradientMagnitude, ConstantIsZero) {
    const Image g = gradient_magnitude(Image(5, 4, 0.9));
    for (double v : g.pixels()) EXPECT_EQ(v, 0.0);
}

TEST(GradientMagnitude, UnitRampHasUnitInteriorMagnitude) {
    Image ramp(6, 5);
    for (std::size_t y = 0; y < 5; ++y)
        for (std::size_t x = 0; x < 6; ++x) ramp.at(x, y) = static_cast<double>(x);
    const Image g = gradient_magnitude(ramp);
    for (std::size_t y = 0; y < 5; ++y)
        for (std::size_t x = 1; x < 5; ++x) EXPECT_EQ(g.at(x, y), 1.0);
}

TEST(GradientMagnitude, CentralDifferencesCancelOnImpulse) {
    Image img(3, 3, 0.0);
    img.at(1, 1) = 1.0;
    const Image g = gradient_magnitude(img);
    EXPECT_EQ(g.at(1, 1), 0.0);
    EXPECT_EQ(g.at(0, 1), 0.5);
}

TEST(GradientMagnitude, DegenerateShapeRejected) {
    EXPECT_THROW(gradient_magnitude(Image(1, 5)), ShapeError);
    EXPECT_THROW(gradient_magnitude(Image(5, 1)), ShapeError);
}

TEST(Nonlocal, ConstantImageUnchanged) {
    const Image img(8, 6, 0.4);
    EXPECT_EQ(nl_step(img, {}), img);
}

TEST(Nonlocal, LocalDifferenceDetectorEqualsPeronaMalik) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Image img = synthetic::random_image(10, 10, 100 + seed);
        EXPECT_EQ(nl_step(img, {}, EdgeDetector::LocalDifference), pm_step(img, {}));
    }
}

TEST(Nonlocal, EdgeDiffusivityBelowFlatRegion) {
    DiffusionParams p;
    p.kappa = 0.5;
    const Image edge = step_edge(32, 16, 16);
    const Image c = nl_diffusivity(edge, p);
    const double at_edge = 0.5 * (c.at(15, 8) + c.at(16, 8));
    const double flat = 0.5 * (c.at(4, 8) + c.at(5, 8));
    EXPECT_LT(at_edge, flat);
    EXPECT_LT(c.at(15, 8), c.at(4, 8));
}

TEST(Nonlocal, RequiresOpenUnitEpsilon) {
    DiffusionParams p;
    p.epsilon = 0.0;
    EXPECT_THROW(nl_step(Image(4, 4), p), ParameterError);
}

TEST(ExplicitSteps, ExtremumPrincipleAndMeanConservation) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Image src = synthetic::random_image(12, 10, 500 + seed);
        for (Method m : {Method::PeronaMalik, Method::ForwardBackward, Method::Nonlocal}) {
            Image img = src;
            for (int it = 1; it <= 20; ++it) {
                const Image next = advance(m, src, img, it, {});
                EXPECT_GE(next.min(), img.min() - 1e-12);
                EXPECT_LE(next.max(), img.max() + 1e-12);
                EXPECT_NEAR(next.mean(), img.mean(), 1e-9 * std::abs(img.mean()));
                img = next;
            }
        }
    }
}

TEST(Diffuse, GaussianSigmaSchedule) {
    const Image src = synthetic::random_image(16, 16, 9);
    const ScaleStack stack = diffuse(src, Method::Gaussian, 6, {});
    ASSERT_EQ(stack.scales.size(), 6u);
    for (int it = 1; it <= 6; ++it) EXPECT_EQ(stack.at_iteration(it), gaussian_blur(src, 0.5 * it));
}

TEST(Diffuse, GaussianFullScheduleEndsAtSeventyFive) {
    const Image src = synthetic::random_image(8, 8, 10);
    const ScaleStack stack = diffuse(src, Method::Gaussian, 150, {});
    ASSERT_EQ(stack.scales.size(), 150u);
    EXPECT_EQ(stack.at_iteration(150), gaussian_blur(src, 75.0));
}

TEST(Diffuse, SingleScaleIsOneStep) {
    const Image src = synthetic::random_image(9, 9, 11);
    EXPECT_EQ(diffuse(src, Method::PeronaMalik, 1, {}).at_iteration(1), pm_step(src, {}));
    EXPECT_EQ(diffuse(src, Method::ForwardBackward, 1, {}).at_iteration(1), fbr_step(src, {}));
    EXPECT_EQ(diffuse(src, Method::Nonlocal, 1, {}).at_iteration(1), nl_step(src, {}));
}

TEST(Diffuse, IteratesSteps) {
    const Image src = synthetic::random_image(9, 9, 12);
    const ScaleStack stack = diffuse(src, Method::PeronaMalik, 3, {});
    EXPECT_EQ(stack.at_iteration(3), pm_step(pm_step(pm_step(src, {}), {}), {}));
}

TEST(Diffuse, ConstantSourceIsFixedPoint) {
    const Image src(8, 8, 0.6);
    for (Method m : kAllMethods) {
        const ScaleStack stack = diffuse(src, m, 150, {});
        ASSERT_EQ(stack.scales.size(), 150u);
        for (const Image& s : stack.scales) ASSERT_EQ(s, src) << method_name(m);
    }
}

TEST(Diffuse, ZeroScalesRejected) { EXPECT_THROW(diffuse(Image(4, 4), Method::PeronaMalik, 0, {}), ParameterError); }

TEST(TotalVariation, CountsEveryEdgeOnce) {
    const Image img(3, 2, std::vector<double>{0, 1, 3, 0, 0, 0});
    EXPECT_EQ(total_variation(img), 1 + 2 + 0 + 0 + 1 + 3);
}
