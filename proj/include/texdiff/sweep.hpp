#pragma once

#include "texdiff/classify.hpp"
#include "texdiff/dataset.hpp"
#include "texdiff/descriptors.hpp"
#include "texdiff/diffusion.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace texdiff::classify {

struct SweepResult {
    diffusion::Method method = diffusion::Method::Gaussian;
    descriptors::Descriptor descriptor = descriptors::Descriptor::LBP;
    Classifier classifier = Classifier::Knn1;
    Accuracy baseline;                  // original features only
    std::vector<Accuracy> per_iteration; // index it - 1
    int best_it = 0;

    const Accuracy& best() const { return per_iteration.at(static_cast<std::size_t>(best_it - 1)); }
};

/// 1-based argmax of the mean accuracy; ties go to the smallest iteration.
int best_iteration(const std::vector<Accuracy>& per_iteration);

/// Source of previously computed feature tables. Scale 0 (the original
/// image) does not depend on the diffusion method.
class FeatureStore {
public:
    virtual ~FeatureStore() = default;
    virtual std::optional<FeatureTable> load(diffusion::Method method, int it, descriptors::Descriptor d) = 0;
    virtual void store(diffusion::Method method, int it, const FeatureTable& table) = 0;
};

struct SweepSpec {
    diffusion::Method method = diffusion::Method::PeronaMalik;
    std::vector<descriptors::Descriptor> descriptors;
    std::vector<Classifier> classifiers;
    int n_scales = 150;
    diffusion::DiffusionParams params;
    descriptors::DescriptorOptions options;
};

struct FeatureStats {
    std::size_t computed = 0; // tables extracted from images
    std::size_t loaded = 0;   // tables served by the store
};

/// Visits the feature tables of every descriptor for it = 0..n_scales in
/// order. Tables come from `store` when available; otherwise the diffusion
/// state is advanced lazily to `it`, features are extracted for every
/// image and written back to `store`.
FeatureStats visit_feature_tables(const Dataset& dataset, const SweepSpec& spec, FeatureStore* store,
                                  const std::function<void(int it, const std::vector<FeatureTable>&)>& visit);

/// Feature table for one descriptor over explicit images (dataset order).
FeatureTable extract_table(const Dataset& dataset, const std::vector<Image>& images, descriptors::Descriptor d,
                           int it, const descriptors::DescriptorOptions& options);

/// Baseline plus cross-validated accuracy of original | scale-it features
/// for every (descriptor, classifier) pair in `spec`, in
/// descriptor-major order.
std::vector<SweepResult> sweep_cells(const Dataset& dataset, const SweepSpec& spec, FeatureStore* store = nullptr,
                                     FeatureStats* stats = nullptr);

SweepResult sweep(const Dataset& dataset, diffusion::Method method, descriptors::Descriptor descriptor,
                  Classifier classifier, int n_scales, const diffusion::DiffusionParams& params = {},
                  const descriptors::DescriptorOptions& options = {});

} // namespace texdiff::classify
