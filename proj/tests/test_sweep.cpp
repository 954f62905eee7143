#include "texdiff/error.hpp"
#include "texdiff/sweep.hpp"

#include "support/synthetic.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>

using namespace texdiff;
using namespace texdiff::classify;
using diffusion::Method;
using descriptors::Descriptor;

namespace {

class MemoryStore final : public FeatureStore {
public:
    std::optional<FeatureTable> load(Method method, int it, Descriptor d) override {
        const auto found = tables.find(key(method, it, d));
        if (found == tables.end()) return std::nullopt;
        return found->second;
    }
    void store(Method method, int it, const FeatureTable& table) override {
        tables[key(method, it, table.descriptor)] = table;
    }
    std::map<std::tuple<int, int, int>, FeatureTable> tables;

private:
    static std::tuple<int, int, int> key(Method m, int it, Descriptor d) {
        return {it == 0 ? -1 : static_cast<int>(m), it, static_cast<int>(d)};
    }
};

} // namespace

TEST(BestIteration, ArgmaxWithSmallestTie) {
    EXPECT_EQ(best_iteration({{50, 1}, {70, 2}, {70, 0}, {60, 0}}), 2);
    EXPECT_EQ(best_iteration({{10, 0}}), 1);
    EXPECT_EQ(best_iteration({}), 0);
}

TEST(Sweep, ProducesOnePointPerScale) {
    const Dataset ds = synthetic::texture_dataset(3, 10, 16, 5, 1);
    const SweepResult r = sweep(ds, Method::PeronaMalik, Descriptor::LBP, Classifier::Knn1, 7);
    EXPECT_EQ(r.per_iteration.size(), 7u);
    EXPECT_GE(r.best_it, 1);
    EXPECT_LE(r.best_it, 7);
    for (const auto& a : r.per_iteration) EXPECT_LE(a.mean, r.best().mean);
    EXPECT_GT(r.baseline.mean, 50.0);
}

TEST(Sweep, ConstantDatasetStaysAtBaseline) {
    const Dataset ds = synthetic::constant_dataset(3, 10, 12, 5, 0.4);
    for (Method m : diffusion::kAllMethods) {
        const SweepResult r = sweep(ds, m, Descriptor::CLBP, Classifier::NaiveBayes, 5);
        for (const auto& a : r.per_iteration) {
            EXPECT_EQ(a, r.baseline);
            EXPECT_TRUE(std::isfinite(a.mean) && std::isfinite(a.std));
        }
        EXPECT_EQ(r.best_it, 1);
    }
}

TEST(Sweep, CellsMatchSingleSweeps) {
    const Dataset ds = synthetic::texture_dataset(3, 10, 16, 5, 2);
    SweepSpec spec{Method::ForwardBackward, {Descriptor::LBP, Descriptor::LTP}, {Classifier::Knn1, Classifier::NaiveBayes}, 3, {}, {}};
    const auto cells = sweep_cells(ds, spec);
    ASSERT_EQ(cells.size(), 4u);
    EXPECT_EQ(cells[1].descriptor, Descriptor::LBP);
    EXPECT_EQ(cells[1].classifier, Classifier::NaiveBayes);
    EXPECT_EQ(cells[2].descriptor, Descriptor::LTP);
    for (const auto& c : cells) {
        const auto single = sweep(ds, spec.method, c.descriptor, c.classifier, 3);
        EXPECT_EQ(single.baseline, c.baseline);
        EXPECT_EQ(single.per_iteration, c.per_iteration);
        EXPECT_EQ(single.best_it, c.best_it);
    }
}

TEST(Sweep, StoreIsUsedOnSecondRun) {
    const Dataset ds = synthetic::texture_dataset(3, 10, 16, 5, 3);
    SweepSpec spec{Method::Nonlocal, {Descriptor::CLBP, Descriptor::CSLBP}, {Classifier::Knn1}, 4, {}, {}};
    MemoryStore store;
    FeatureStats first, second;
    const auto a = sweep_cells(ds, spec, &store, &first);
    const auto b = sweep_cells(ds, spec, &store, &second);
    EXPECT_EQ(first.computed, 10u);
    EXPECT_EQ(first.loaded, 0u);
    EXPECT_EQ(second.computed, 0u);
    EXPECT_EQ(second.loaded, 10u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].baseline, b[i].baseline);
        EXPECT_EQ(a[i].per_iteration, b[i].per_iteration);
    }
}

TEST(Sweep, OriginalFeaturesSharedAcrossMethods) {
    const Dataset ds = synthetic::texture_dataset(2, 10, 16, 5, 4);
    MemoryStore store;
    FeatureStats stats;
    sweep_cells(ds, {Method::PeronaMalik, {Descriptor::LBP}, {Classifier::Knn1}, 2, {}, {}}, &store);
    sweep_cells(ds, {Method::Gaussian, {Descriptor::LBP}, {Classifier::Knn1}, 2, {}, {}}, &store, &stats);
    EXPECT_EQ(stats.loaded, 1u);
    EXPECT_EQ(stats.computed, 2u);
}

TEST(Sweep, MismatchedStoreEntryIsRecomputed) {
    const Dataset ds = synthetic::texture_dataset(2, 10, 16, 5, 5);
    MemoryStore store;
    SweepSpec spec{Method::PeronaMalik, {Descriptor::LBP}, {Classifier::Knn1}, 2, {}, {}};
    const auto a = sweep_cells(ds, spec, &store);
    store.tables.begin()->second.labels.back() ^= 1;
    FeatureStats stats;
    const auto b = sweep_cells(ds, spec, &store, &stats);
    EXPECT_EQ(stats.computed, 1u);
    EXPECT_EQ(a[0].baseline, b[0].baseline);
}

TEST(Sweep, NonFiniteImageRaisesNumericalError) {
    Dataset ds = synthetic::texture_dataset(2, 10, 16, 5, 6);
    ds.items[3].image.at(2, 2) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(sweep(ds, Method::PeronaMalik, Descriptor::LBP, Classifier::Knn1, 2), NumericalError);
}

TEST(Sweep, InvalidSpecRejected) {
    const Dataset ds = synthetic::texture_dataset(2, 10, 8, 5, 7);
    EXPECT_THROW(sweep(ds, Method::PeronaMalik, Descriptor::LBP, Classifier::Knn1, 0), ParameterError);
    diffusion::DiffusionParams bad;
    bad.dt = 1.0;
    EXPECT_THROW(sweep(ds, Method::PeronaMalik, Descriptor::LBP, Classifier::Knn1, 1, bad), ParameterError);
}

TEST(ExtractTable, OneRowPerImage) {
    const Dataset ds = synthetic::texture_dataset(3, 10, 16, 5, 8);
    std::vector<Image> images;
    for (const auto& item : ds.items) images.push_back(item.image);
    const FeatureTable t = extract_table(ds, images, Descriptor::LBPHF, 0, {});
    EXPECT_EQ(t.rows(), ds.size());
    EXPECT_EQ(t.dim, 38u);
    EXPECT_EQ(t.labels, ds.labels());
    EXPECT_EQ(t.folds, ds.fold_of);
    images.pop_back();
    EXPECT_THROW(extract_table(ds, images, Descriptor::LBP, 0, {}), AlignmentError);
}
