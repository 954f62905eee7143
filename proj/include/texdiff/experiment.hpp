#pragma once

#include "texdiff/classify.hpp"
#include "texdiff/dataset.hpp"
#include "texdiff/descriptors.hpp"
#include "texdiff/diffusion.hpp"
#include "texdiff/sweep.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace texdiff {

/// "%.6g" formatting used for every float in results files.
std::string format_float(double value);

/// Shortest round-trip representation, used for cached feature values.
std::string format_exact(double value);

/// Hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

/// Digest over class names, file names and decoded pixels of every item.
std::string dataset_digest(const Dataset& dataset);

/// Canonical text of the parameters a method actually reads, e.g.
/// "pm kappa=1 dt=0.25".
std::string method_key(diffusion::Method method, const diffusion::DiffusionParams& params);
/// Canonical text of descriptor-specific options, e.g. "ltp k=5".
std::string descriptor_key(descriptors::Descriptor d, const descriptors::DescriptorOptions& options);

/// Feature CSV: header `label,descriptor_id,it,v0,...` then one row per item.
std::string feature_table_csv(const classify::FeatureTable& table);
/// Parses a feature CSV; throws FormatError on any inconsistency.
classify::FeatureTable parse_feature_table_csv(std::string_view text);

/// On-disk FeatureStore. Layout:
///   <root>/<dataset digest>/<method>-<params digest>/<descriptor>-<options digest>/it_NNNN.csv
/// with `original` in place of the method directory for it = 0.
/// Unreadable or inconsistent files are reported and treated as missing.
class FeatureCache final : public classify::FeatureStore {
public:
    FeatureCache(std::filesystem::path root, const Dataset& dataset, diffusion::DiffusionParams params,
                 descriptors::DescriptorOptions options);

    std::filesystem::path path_for(diffusion::Method method, int it, descriptors::Descriptor d) const;
    std::optional<classify::FeatureTable> load(diffusion::Method method, int it, descriptors::Descriptor d) override;
    void store(diffusion::Method method, int it, const classify::FeatureTable& table) override;

private:
    std::filesystem::path root_;
    std::string dataset_digest_;
    diffusion::DiffusionParams params_;
    descriptors::DescriptorOptions options_;
};

struct ExperimentConfig {
    std::filesystem::path dataset_root;
    std::vector<diffusion::Method> methods{std::begin(diffusion::kAllMethods), std::end(diffusion::kAllMethods)};
    std::vector<descriptors::Descriptor> descriptors{std::begin(descriptors::kAllDescriptors),
                                                     std::end(descriptors::kAllDescriptors)};
    std::vector<classify::Classifier> classifiers{std::begin(classify::kAllClassifiers),
                                                  std::end(classify::kAllClassifiers)};
    int n_scales = 150;
    int folds = 10;
    std::uint64_t seed = 0;
    diffusion::DiffusionParams params;
    descriptors::DescriptorOptions options;
    std::filesystem::path cache_dir; // empty: no feature cache
    std::filesystem::path out_dir = ".";

    void validate() const;
};

/// Populates the feature cache for every configured method, descriptor and
/// scale. Requires cache_dir.
classify::FeatureStats run_extract(const ExperimentConfig& config, const Dataset& dataset);

/// Sweeps every (method, descriptor, classifier) cell.
std::vector<classify::SweepResult> run_sweep(const ExperimentConfig& config, const Dataset& dataset,
                                             classify::FeatureStats* stats = nullptr);

/// `method,descriptor,classifier,baseline,best,best_it`, one row per cell.
std::string summary_csv(const std::vector<classify::SweepResult>& results);
/// `method,descriptor,classifier,it,mean_acc,std_acc` with it = 0 the baseline.
std::string curves_csv(const std::vector<classify::SweepResult>& results);
/// Writes summary.csv and curves.csv into `out_dir` atomically.
void write_sweep_outputs(const std::filesystem::path& out_dir, const std::vector<classify::SweepResult>& results);

struct ReportCell {
    std::string dataset;
    std::string method;
    std::string descriptor;
    std::string classifier;
    double baseline = 0.0;
    double best = 0.0;
    int best_it = 0;
    double gain = 0.0;        // best - baseline
    int negative_points = 0;  // iterations whose accuracy fell below baseline
    double worst_delta = 0.0; // most negative per-iteration delta (0 if none)
};

/// Reads summary.csv (and curves.csv when present) from each results
/// directory; the directory name labels the dataset. Cells are sorted by
/// gain, descending.
std::vector<ReportCell> load_report(const std::vector<std::filesystem::path>& result_dirs);
std::string format_report(const std::vector<ReportCell>& cells);

struct DiffuseOutput {
    std::vector<std::filesystem::path> frames;
    std::filesystem::path manifest;
};

/// Writes `<stem>_<method>_<it>.pgm` for it = 1..n_scales plus
/// `<stem>_<method>_manifest.txt`.
DiffuseOutput run_diffuse(const std::filesystem::path& image_path, diffusion::Method method, int n_scales,
                          const diffusion::DiffusionParams& params, const std::filesystem::path& out_dir);

} // namespace texdiff
