#include "texdiff/classify.hpp"

#include "texdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

namespace texdiff::classify {

std::string_view classifier_name(Classifier c) noexcept {
    switch (c) {
    case Classifier::Knn1: return "knn1";
    case Classifier::NaiveBayes: return "nb";
    }
    return "unknown";
}

Classifier parse_classifier(std::string_view name) {
    for (Classifier c : kAllClassifiers)
        if (classifier_name(c) == name) return c;
    throw ParameterError("unknown classifier: " + std::string(name));
}

void FeatureTable::append_row(std::span<const double> features, int label, int fold) {
    if (labels.empty() && dim == 0) dim = features.size();
    if (features.size() != dim) throw ShapeError("feature row length mismatch");
    values.insert(values.end(), features.begin(), features.end());
    labels.push_back(label);
    folds.push_back(fold);
}

FeatureTable concat_features(const FeatureTable& original, const FeatureTable& scale) {
    if (original.rows() != scale.rows()) throw AlignmentError("feature tables have different row counts");
    if (original.labels != scale.labels) throw AlignmentError("feature tables have misaligned labels");
    if (original.folds != scale.folds) throw AlignmentError("feature tables have misaligned folds");
    FeatureTable out;
    out.descriptor = scale.descriptor;
    out.it = scale.it;
    out.dim = original.dim + scale.dim;
    out.labels = original.labels;
    out.folds = original.folds;
    out.values.reserve(out.rows() * out.dim);
    for (std::size_t i = 0; i < original.rows(); ++i) {
        const auto a = original.row(i);
        const auto b = scale.row(i);
        out.values.insert(out.values.end(), a.begin(), a.end());
        out.values.insert(out.values.end(), b.begin(), b.end());
    }
    return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

int knn_predict(const FeatureTable& table, std::span<const std::size_t> train_rows, std::span<const double> query,
                int k) {
    if (train_rows.empty()) throw ConfigError("k-NN needs a nonempty training set");
    if (query.size() != table.dim) throw ShapeError("query dimension does not match the training table");
    if (k < 1) throw ParameterError("k must be >= 1");

    if (k == 1) {
        std::size_t best = train_rows[0];
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t r : train_rows) {
            const double d = squared_distance(table.row(r), query);
            if (d < best_d || (d == best_d && r < best)) {
                best_d = d;
                best = r;
            }
        }
        return table.labels[best];
    }

    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(train_rows.size());
    for (std::size_t r : train_rows) ranked.emplace_back(squared_distance(table.row(r), query), r);
    const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(kk), ranked.end());
    std::map<int, int> votes;
    for (std::size_t i = 0; i < kk; ++i) ++votes[table.labels[ranked[i].second]];
    int best_label = votes.begin()->first;
    int best_votes = 0;
    for (const auto& [label, count] : votes)
        if (count > best_votes) {
            best_votes = count;
            best_label = label;
        }
    return best_label;
}

int knn_predict(const FeatureTable& train, std::span<const double> query, int k) {
    std::vector<std::size_t> rows(train.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return knn_predict(train, rows, query, k);
}

NaiveBayesModel nb_train(const FeatureTable& table, std::span<const std::size_t> train_rows) {
    std::vector<std::size_t> all;
    if (train_rows.empty()) {
        all.resize(table.rows());
        std::iota(all.begin(), all.end(), std::size_t{0});
        train_rows = all;
    }
    if (train_rows.empty()) throw ConfigError("naive Bayes needs a nonempty training set");

    NaiveBayesModel model;
    model.dim = table.dim;
    model.classes = static_cast<std::size_t>(*std::max_element(table.labels.begin(), table.labels.end()) + 1);
    model.present.assign(model.classes, false);
    model.log_prior.assign(model.classes, -std::numeric_limits<double>::infinity());
    model.mean.assign(model.classes * model.dim, 0.0);
    model.variance.assign(model.classes * model.dim, 0.0);

    std::vector<std::size_t> count(model.classes, 0);
    for (std::size_t r : train_rows) {
        const auto c = static_cast<std::size_t>(table.labels[r]);
        ++count[c];
        const auto row = table.row(r);
        for (std::size_t f = 0; f < model.dim; ++f) model.mean[c * model.dim + f] += row[f];
    }
    for (std::size_t c = 0; c < model.classes; ++c) {
        if (count[c] == 0) continue;
        model.present[c] = true;
        model.log_prior[c] = std::log(static_cast<double>(count[c]) / static_cast<double>(train_rows.size()));
        for (std::size_t f = 0; f < model.dim; ++f) model.mean[c * model.dim + f] /= static_cast<double>(count[c]);
    }
    for (std::size_t r : train_rows) {
        const auto c = static_cast<std::size_t>(table.labels[r]);
        const auto row = table.row(r);
        for (std::size_t f = 0; f < model.dim; ++f) {
            const double d = row[f] - model.mean[c * model.dim + f];
            model.variance[c * model.dim + f] += d * d;
        }
    }
    for (std::size_t c = 0; c < model.classes; ++c) {
        if (count[c] == 0) continue;
        for (std::size_t f = 0; f < model.dim; ++f) {
            double& v = model.variance[c * model.dim + f];
            v = std::max(v / static_cast<double>(count[c]), NaiveBayesModel::kVarianceFloor);
        }
    }
    return model;
}

int nb_predict(const NaiveBayesModel& model, std::span<const double> query) {
    if (query.size() != model.dim) throw ShapeError("query dimension does not match the model");
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.classes; ++c) {
        if (!model.present[c]) continue;
        double score = model.log_prior[c];
        for (std::size_t f = 0; f < model.dim; ++f) {
            const double var = model.variance[c * model.dim + f];
            const double d = query[f] - model.mean[c * model.dim + f];
            score += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
        }
        if (best < 0 || score > best_score) {
            best = static_cast<int>(c);
            best_score = score;
        }
    }
    if (best < 0) throw ConfigError("naive Bayes model has no classes");
    return best;
}

CvResult cross_validate(const FeatureTable& table, Classifier classifier) {
    if (table.rows() == 0) throw ConfigError("cannot cross-validate an empty table");
    const int folds = *std::max_element(table.folds.begin(), table.folds.end()) + 1;
    std::vector<std::vector<std::size_t>> train(static_cast<std::size_t>(folds));
    std::vector<std::size_t> fold_size(static_cast<std::size_t>(folds), 0);
    for (std::size_t i = 0; i < table.rows(); ++i) {
        const int f = table.folds[i];
        if (f < 0) throw ConfigError("row without a fold assignment");
        ++fold_size[static_cast<std::size_t>(f)];
        for (int g = 0; g < folds; ++g)
            if (g != f) train[static_cast<std::size_t>(g)].push_back(i);
    }
    for (int f = 0; f < folds; ++f)
        if (fold_size[static_cast<std::size_t>(f)] == 0) throw ConfigError("fold " + std::to_string(f) + " is empty");

    std::vector<NaiveBayesModel> models;
    if (classifier == Classifier::NaiveBayes) {
        models.resize(static_cast<std::size_t>(folds));
#pragma omp parallel for schedule(dynamic)
        for (int f = 0; f < folds; ++f)
            models[static_cast<std::size_t>(f)] = nb_train(table, train[static_cast<std::size_t>(f)]);
    }

    std::vector<char> correct(table.rows(), 0);
    const auto n = static_cast<std::ptrdiff_t>(table.rows());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const auto f = static_cast<std::size_t>(table.folds[i]);
        const int predicted = classifier == Classifier::Knn1 ? knn_predict(table, train[f], table.row(i), 1)
                                                              : nb_predict(models[f], table.row(i));
        correct[i] = predicted == table.labels[i];
    }

    CvResult result;
    std::vector<std::size_t> hits(static_cast<std::size_t>(folds), 0);
    for (std::size_t i = 0; i < table.rows(); ++i) hits[static_cast<std::size_t>(table.folds[i])] += correct[i];
    for (int f = 0; f < folds; ++f)
        result.fold_accuracy.push_back(100.0 * static_cast<double>(hits[static_cast<std::size_t>(f)]) /
                                       static_cast<double>(fold_size[static_cast<std::size_t>(f)]));

    const double m = std::accumulate(result.fold_accuracy.begin(), result.fold_accuracy.end(), 0.0) / folds;
    double ss = 0.0;
    for (double a : result.fold_accuracy) ss += (a - m) * (a - m);
    result.accuracy.mean = m;
    result.accuracy.std = folds > 1 ? std::sqrt(ss / (folds - 1)) : 0.0;
    return result;
}

} // namespace texdiff::classify
