#include "texdiff/sweep.hpp"

#include "texdiff/error.hpp"
#include "parallel.hpp"

#include <iostream>

namespace texdiff::classify {

int best_iteration(const std::vector<Accuracy>& per_iteration) {
    if (per_iteration.empty()) return 0;
    std::size_t best = 0;
    for (std::size_t i = 1; i < per_iteration.size(); ++i)
        if (per_iteration[i].mean > per_iteration[best].mean) best = i;
    return static_cast<int>(best) + 1;
}

FeatureTable extract_table(const Dataset& dataset, const std::vector<Image>& images, descriptors::Descriptor d,
                           int it, const descriptors::DescriptorOptions& options) {
    if (images.size() != dataset.size()) throw AlignmentError("image list does not match the dataset");
    std::vector<descriptors::FeatureVector> rows(images.size());
    detail::parallel_for(images.size(), [&](std::size_t i) { rows[i] = descriptors::extract(images[i], d, options); });

    FeatureTable table;
    table.descriptor = d;
    table.it = it;
    table.dim = descriptors::feature_length(d);
    table.values.reserve(table.dim * images.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        table.append_row(rows[i].values, dataset.items[i].class_id, dataset.fold_of[i]);
    return table;
}

FeatureStats visit_feature_tables(const Dataset& dataset, const SweepSpec& spec, FeatureStore* store,
                                  const std::function<void(int, const std::vector<FeatureTable>&)>& visit) {
    if (spec.n_scales < 1) throw ParameterError("n_scales must be >= 1");
    if (spec.descriptors.empty()) throw ParameterError("no descriptors requested");
    spec.params.validate();
    if (dataset.fold_of.size() != dataset.size()) throw ConfigError("dataset has no fold assignment");

    const auto labels = dataset.labels();
    std::vector<Image> sources;
    sources.reserve(dataset.size());
    for (const auto& item : dataset.items) sources.push_back(item.image);

    std::vector<Image> state;
    int state_it = 0;
    auto advance_to = [&](int target) {
        if (state.empty()) state = sources;
        if (target <= state_it) return;
        const int from = state_it;
        detail::parallel_for(state.size(), [&](std::size_t i) {
            if (spec.method == diffusion::Method::Gaussian) {
                state[i] = diffusion::advance(spec.method, sources[i], state[i], target, spec.params);
            } else {
                for (int s = from + 1; s <= target; ++s)
                    state[i] = diffusion::advance(spec.method, sources[i], state[i], s, spec.params);
            }
            if (!state[i].all_finite())
                throw NumericalError("non-finite intensity after " + std::string(diffusion::method_name(spec.method)) +
                                     " iteration " + std::to_string(target) + " of " + dataset.items[i].source_path);
        });
        state_it = target;
    };

    FeatureStats stats;
    std::vector<FeatureTable> tables(spec.descriptors.size());
    for (int it = 0; it <= spec.n_scales; ++it) {
        for (std::size_t k = 0; k < spec.descriptors.size(); ++k) {
            const auto d = spec.descriptors[k];
            std::optional<FeatureTable> cached = store ? store->load(spec.method, it, d) : std::nullopt;
            if (cached && cached->labels == labels && cached->dim == descriptors::feature_length(d)) {
                cached->folds = dataset.fold_of;
                cached->it = it;
                tables[k] = std::move(*cached);
                ++stats.loaded;
                continue;
            }
            if (cached) {
                std::cerr << "warning: cached " << descriptors::descriptor_name(d) << " features for it=" << it
                          << " do not match the dataset; recomputing\n";
            }
            advance_to(it);
            tables[k] = extract_table(dataset, it == 0 ? sources : state, d, it, spec.options);
            ++stats.computed;
            if (store) store->store(spec.method, it, tables[k]);
        }
        visit(it, tables);
    }
    return stats;
}

std::vector<SweepResult> sweep_cells(const Dataset& dataset, const SweepSpec& spec, FeatureStore* store,
                                     FeatureStats* stats) {
    if (spec.classifiers.empty()) throw ParameterError("no classifiers requested");
    const std::size_t nd = spec.descriptors.size();
    const std::size_t nc = spec.classifiers.size();
    std::vector<SweepResult> results(nd * nc);
    for (std::size_t k = 0; k < nd; ++k)
        for (std::size_t c = 0; c < nc; ++c) {
            auto& r = results[k * nc + c];
            r.method = spec.method;
            r.descriptor = spec.descriptors[k];
            r.classifier = spec.classifiers[c];
            r.per_iteration.reserve(static_cast<std::size_t>(spec.n_scales));
        }

    std::vector<FeatureTable> originals;
    const auto s = visit_feature_tables(dataset, spec, store, [&](int it, const std::vector<FeatureTable>& tables) {
        if (it == 0) {
            originals = tables;
            for (std::size_t k = 0; k < nd; ++k)
                for (std::size_t c = 0; c < nc; ++c)
                    results[k * nc + c].baseline = cross_validate(tables[k], spec.classifiers[c]).accuracy;
            return;
        }
        for (std::size_t k = 0; k < nd; ++k) {
            const FeatureTable joined = concat_features(originals[k], tables[k]);
            for (std::size_t c = 0; c < nc; ++c)
                results[k * nc + c].per_iteration.push_back(cross_validate(joined, spec.classifiers[c]).accuracy);
        }
    });
    for (auto& r : results) r.best_it = best_iteration(r.per_iteration);
    if (stats) *stats = s;
    return results;
}

SweepResult sweep(const Dataset& dataset, diffusion::Method method, descriptors::Descriptor descriptor,
                  Classifier classifier, int n_scales, const diffusion::DiffusionParams& params,
                  const descriptors::DescriptorOptions& options) {
    SweepSpec spec{method, {descriptor}, {classifier}, n_scales, params, options};
    return sweep_cells(dataset, spec).front();
}

} // namespace texdiff::classify
