#include "texdiff/descriptors.hpp"
#include "texdiff/diffusion.hpp"
#include "texdiff/reference.hpp"
#include "texdiff/spectral.hpp"

#include "support/synthetic.hpp"

#include <benchmark/benchmark.h>

using namespace texdiff;

namespace {

Image input(const benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    return synthetic::texture(2, n, 1);
}

template <class Step>
void run_step(benchmark::State& state, Step step) {
    const Image img = input(state);
    const diffusion::DiffusionParams params;
    for (auto _ : state) benchmark::DoNotOptimize(step(img, params));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}

void BM_PmStep(benchmark::State& s) { run_step(s, [](const Image& i, const auto& p) { return diffusion::pm_step(i, p); }); }
void BM_PmStepReference(benchmark::State& s) { run_step(s, [](const Image& i, const auto& p) { return reference::pm_step(i, p); }); }
void BM_FbrStep(benchmark::State& s) { run_step(s, [](const Image& i, const auto& p) { return diffusion::fbr_step(i, p); }); }
void BM_FbrStepReference(benchmark::State& s) { run_step(s, [](const Image& i, const auto& p) { return reference::fbr_step(i, p); }); }
void BM_NlStep(benchmark::State& s) { run_step(s, [](const Image& i, const auto& p) { return diffusion::nl_step(i, p); }); }
void BM_NlStepReference(benchmark::State& s) { run_step(s, [](const Image& i, const auto& p) { return reference::nl_step(i, p); }); }

void BM_GaussianBlur(benchmark::State& state) {
    const Image img = input(state);
    for (auto _ : state) benchmark::DoNotOptimize(diffusion::gaussian_blur(img, 2.0));
}
void BM_GaussianBlurReference(benchmark::State& state) {
    const Image img = input(state);
    for (auto _ : state) benchmark::DoNotOptimize(reference::gaussian_blur(img, 2.0));
}

void BM_FractionalGradient(benchmark::State& state) {
    const Image img = input(state);
    for (auto _ : state) benchmark::DoNotOptimize(spectral::fractional_gradient_magnitude(img, 0.1));
}

void BM_Clbp(benchmark::State& state) {
    const auto q = descriptors::quantize(input(state));
    for (auto _ : state) benchmark::DoNotOptimize(descriptors::clbp_histograms(q));
}
void BM_ClbpReference(benchmark::State& state) {
    const auto q = descriptors::quantize(input(state));
    for (auto _ : state) benchmark::DoNotOptimize(reference::clbp_histograms(q));
}

void BM_Ltp(benchmark::State& state) {
    const auto q = descriptors::quantize(input(state));
    for (auto _ : state) benchmark::DoNotOptimize(descriptors::ltp_histograms(q, 5));
}
void BM_LtpReference(benchmark::State& state) {
    const auto q = descriptors::quantize(input(state));
    for (auto _ : state) benchmark::DoNotOptimize(reference::ltp_histograms(q, 5));
}

} // namespace

BENCHMARK(BM_PmStep)->Arg(128)->Arg(512);
BENCHMARK(BM_PmStepReference)->Arg(128)->Arg(512);
BENCHMARK(BM_FbrStep)->Arg(128)->Arg(512);
BENCHMARK(BM_FbrStepReference)->Arg(128)->Arg(512);
BENCHMARK(BM_NlStep)->Arg(128)->Arg(512);
BENCHMARK(BM_NlStepReference)->Arg(128)->Arg(512);
BENCHMARK(BM_GaussianBlur)->Arg(128)->Arg(512);
BENCHMARK(BM_GaussianBlurReference)->Arg(128)->Arg(512);
BENCHMARK(BM_FractionalGradient)->Arg(128)->Arg(512);
BENCHMARK(BM_Clbp)->Arg(128)->Arg(512);
BENCHMARK(BM_ClbpReference)->Arg(128)->Arg(512);
BENCHMARK(BM_Ltp)->Arg(128)->Arg(512);
BENCHMARK(BM_LtpReference)->Arg(128)->Arg(512);

BENCHMARK_MAIN();
