#pragma once

#include "texdiff/descriptors.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace texdiff::classify {

enum class Classifier { Knn1, NaiveBayes };
inline constexpr Classifier kAllClassifiers[] = {Classifier::Knn1, Classifier::NaiveBayes};

/// knn1 or nb.
std::string_view classifier_name(Classifier c) noexcept;
Classifier parse_classifier(std::string_view name);

/// One feature row per dataset item, in dataset order.
struct FeatureTable {
    descriptors::Descriptor descriptor = descriptors::Descriptor::LBP;
    int it = 0; // scale index, 0 = original image
    std::size_t dim = 0;
    std::vector<double> values; // row-major, rows() x dim
    std::vector<int> labels;
    std::vector<int> folds;

    std::size_t rows() const noexcept { return labels.size(); }
    std::span<const double> row(std::size_t i) const noexcept { return {values.data() + i * dim, dim}; }
    void append_row(std::span<const double> features, int label, int fold);
};

/// Row-wise concatenation original | scale. Throws AlignmentError when the
/// tables disagree on row count, labels or folds.
FeatureTable concat_features(const FeatureTable& original, const FeatureTable& scale);

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// k-nearest neighbour label over `train_rows` of `table` (Euclidean).
/// Equal distances resolve to the earlier row; for k > 1 the majority label
/// wins, ties going to the smallest label.
int knn_predict(const FeatureTable& table, std::span<const std::size_t> train_rows, std::span<const double> query,
                int k = 1);
int knn_predict(const FeatureTable& train, std::span<const double> query, int k = 1);

struct NaiveBayesModel {
    static constexpr double kVarianceFloor = 1e-9;

    std::size_t classes = 0;
    std::size_t dim = 0;
    std::vector<bool> present;
    std::vector<double> log_prior; // per class
    std::vector<double> mean;      // classes x dim
    std::vector<double> variance;  // classes x dim, floored
};

/// Gaussian naive Bayes fitted on `train_rows` (all rows when empty).
NaiveBayesModel nb_train(const FeatureTable& table, std::span<const std::size_t> train_rows = {});
/// argmax over present classes of log prior + sum of log densities; ties
/// resolve to the smallest class id.
int nb_predict(const NaiveBayesModel& model, std::span<const double> query);

struct Accuracy {
    double mean = 0.0; // percent
    double std = 0.0;  // sample standard deviation across folds, percent

    friend bool operator==(const Accuracy&, const Accuracy&) = default;
};

struct CvResult {
    Accuracy accuracy;
    std::vector<double> fold_accuracy; // percent per fold
};

/// Trains on every fold but f, tests on f, for each f. Throws ConfigError
/// if any fold in [0, max fold] is empty.
CvResult cross_validate(const FeatureTable& table, Classifier classifier);

} // namespace texdiff::classify
