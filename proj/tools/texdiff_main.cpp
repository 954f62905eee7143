#include "texdiff/classify.hpp"
#include "texdiff/dataset.hpp"
#include "texdiff/descriptors.hpp"
#include "texdiff/diffusion.hpp"
#include "texdiff/error.hpp"
#include "texdiff/experiment.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace texdiff;

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2, kNumerical = 3 };

template <class T, class Parse>
std::vector<T> parse_list(const std::vector<std::string>& names, Parse parse) {
    std::vector<T> out;
    for (const auto& name : names) {
        const T value = parse(name);
        if (std::find(out.begin(), out.end(), value) == out.end()) out.push_back(value);
    }
    return out;
}

struct Options {
    std::vector<std::string> methods{"gaussian", "pm", "fbr", "nl"};
    std::vector<std::string> descriptors{"lbp", "lbpv", "clbp", "lbphf", "ltp", "cslbp"};
    std::vector<std::string> classifiers{"knn1", "nb"};
    std::string method = "pm";
    std::string dataset;
    std::string image;
    std::vector<std::string> results;
    ExperimentConfig config;
};

void add_common(CLI::App& app, Options& o) {
    auto& c = o.config;
    app.add_option("--scales", c.n_scales, "number of diffusion iterations")->capture_default_str();
    app.add_option("--kappa", c.params.kappa, "edge threshold")->capture_default_str();
    app.add_option("--delta", c.params.delta, "FBR backward weight")->capture_default_str();
    app.add_option("--p", c.params.p, "FBR exponent")->capture_default_str();
    app.add_option("--epsilon", c.params.epsilon, "fractional order offset")->capture_default_str();
    app.add_option("--dt", c.params.dt, "explicit time step")->capture_default_str();
    app.add_option("--sigma-step", c.params.sigma_step, "Gaussian sigma per iteration")->capture_default_str();
    app.add_option("--grad-floor", c.params.grad_floor, "FBR gradient floor")->capture_default_str();
    app.add_option("--folds", c.folds, "cross-validation folds")->capture_default_str();
    app.add_option("--seed", c.seed, "fold shuffling seed")->capture_default_str();
    app.add_option("--ltp-k", c.options.ltp_k, "LTP threshold in gray levels")->capture_default_str();
    app.add_option("--cslbp-t", c.options.cslbp_threshold, "CSLBP threshold")->capture_default_str();
    app.add_flag("--cslbp-median", c.options.cslbp_median, "3x3 median prefilter before CSLBP");
    app.add_option("--methods", o.methods, "gaussian,pm,fbr,nl")->delimiter(',')->capture_default_str();
    app.add_option("--descriptors", o.descriptors, "lbp,lbpv,clbp,lbphf,ltp,cslbp")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--classifiers", o.classifiers, "knn1,nb")->delimiter(',')->capture_default_str();
    app.add_option("--cache-dir", c.cache_dir, "feature cache directory");
    app.add_option("--out", c.out_dir, "output directory")->capture_default_str();
    app.add_option("--dataset", o.dataset, "dataset root (one subdirectory per class)");
}

void finalize(Options& o) {
    o.config.methods = parse_list<diffusion::Method>(o.methods, diffusion::parse_method);
    o.config.descriptors = parse_list<descriptors::Descriptor>(o.descriptors, descriptors::parse_descriptor);
    o.config.classifiers = parse_list<classify::Classifier>(o.classifiers, classify::parse_classifier);
    o.config.dataset_root = o.dataset;
    o.config.validate();
}

Dataset open_dataset(const Options& o) {
    if (o.dataset.empty()) throw ParameterError("a dataset root is required");
    Dataset ds = load_dataset(o.dataset, o.config.folds, o.config.seed);
    std::cerr << "loaded " << ds.size() << " images in " << ds.class_count() << " classes from " << o.dataset << "\n";
    return ds;
}

int run(int argc, char** argv) {
    CLI::App app{"Texture classification over diffusion scale spaces"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
    Options o;
    add_common(app, o);

    auto* diffuse = app.add_subcommand("diffuse", "write the scale stack of one image as PGM frames");
    diffuse->add_option("--method", o.method, "gaussian, pm, fbr or nl")->capture_default_str();
    diffuse->add_option("image", o.image, "input image")->required();

    auto* extract = app.add_subcommand("extract", "populate the feature cache");
    extract->add_option("dataset", o.dataset, "dataset root");

    auto* sweep = app.add_subcommand("sweep", "classify every iteration; write summary.csv and curves.csv");
    sweep->add_option("dataset", o.dataset, "dataset root");

    auto* report = app.add_subcommand("report", "compare sweep results across datasets");
    report->add_option("results", o.results, "results directories")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        finalize(o);
        if (*diffuse) {
            const auto out = run_diffuse(o.image, diffusion::parse_method(o.method), o.config.n_scales,
                                         o.config.params, o.config.out_dir);
            std::cout << "wrote " << out.frames.size() << " frames and " << out.manifest.string() << "\n";
        } else if (*extract) {
            if (o.config.cache_dir.empty()) throw ParameterError("extract needs --cache-dir");
            const Dataset ds = open_dataset(o);
            const auto stats = run_extract(o.config, ds);
            std::cout << "computed " << stats.computed << " feature tables, reused " << stats.loaded << "\n";
        } else if (*sweep) {
            const Dataset ds = open_dataset(o);
            classify::FeatureStats stats;
            const auto results = run_sweep(o.config, ds, &stats);
            write_sweep_outputs(o.config.out_dir, results);
            std::cout << summary_csv(results);
            std::cerr << "computed " << stats.computed << " feature tables, reused " << stats.loaded << "\n";
        } else if (*report) {
            std::vector<std::filesystem::path> dirs(o.results.begin(), o.results.end());
            std::cout << format_report(load_report(dirs));
        }
    } catch (const std::exception& e) {
        const int code = exit_code_for(e);
        const char* kind = code == kNumerical ? "numerical failure" : code == kIo ? "i/o error" : "error";
        std::cerr << kind << ": " << e.what() << "\n";
        return code;
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
