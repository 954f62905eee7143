#pragma once

#include "texdiff/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace texdiff {

struct LabeledImage {
    Image image;
    int class_id = 0;
    std::string source_path;
};

struct Dataset {
    std::vector<LabeledImage> items;
    std::vector<std::string> class_names;
    std::vector<int> fold_of;
    int folds = 0;

    std::size_t size() const noexcept { return items.size(); }
    int class_count() const noexcept { return static_cast<int>(class_names.size()); }
    std::vector<int> labels() const;
};

/// Stratified fold assignment. Within each class the item order is shuffled
/// by a seeded Mersenne twister and dealt round-robin over the folds, with
/// the starting fold rotated per class so global fold sizes stay balanced.
/// Per-class fold sizes differ by at most one. Throws StratificationError
/// if any class has fewer items than folds.
std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed);

/// Loads `<root>/<class_name>/<image files>`. Classes are numbered by
/// lexicographic class name; items are ordered by (class name, file name).
/// Files with extensions other than png/pgm/ppm/pnm are ignored.
Dataset load_dataset(const std::filesystem::path& root, int folds, std::uint64_t seed = 0);

/// Builds a dataset from in-memory images (used by tests and synthetic runs).
Dataset make_dataset(std::vector<LabeledImage> items, std::vector<std::string> class_names,
                     int folds, std::uint64_t seed = 0);

} // namespace texdiff
