#include "texdiff/dataset.hpp"

#include "texdiff/error.hpp"
#include "texdiff/image_io.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace texdiff {
namespace fs = std::filesystem;

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back(item.class_id);
    return out;
}

std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed) {
    if (folds < 1) throw StratificationError("fold count must be >= 1");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

    std::mt19937_64 rng(seed);
    std::vector<int> fold_of(labels.size(), -1);
    std::size_t offset = 0;
    for (auto& [label, members] : by_class) {
        if (members.size() < static_cast<std::size_t>(folds)) {
            throw StratificationError("class " + std::to_string(label) + " has " +
                                      std::to_string(members.size()) + " items, fewer than " +
                                      std::to_string(folds) + " folds");
        }
        // Fisher-Yates with an explicit draw: std::shuffle is not specified
        // bit-exactly across standard libraries.
        for (std::size_t i = members.size() - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
            std::swap(members[i], members[j]);
        }
        for (std::size_t j = 0; j < members.size(); ++j)
            fold_of[members[j]] = static_cast<int>((offset + j) % static_cast<std::size_t>(folds));
        offset += members.size();
    }
    return fold_of;
}

Dataset make_dataset(std::vector<LabeledImage> items, std::vector<std::string> class_names,
                     int folds, std::uint64_t seed) {
    Dataset ds;
    ds.items = std::move(items);
    ds.class_names = std::move(class_names);
    ds.folds = folds;
    for (const auto& item : ds.items) {
        if (item.class_id < 0 || item.class_id >= ds.class_count())
            throw ConfigError("item " + item.source_path + " has out-of-range class id");
    }
    ds.fold_of = stratified_folds(ds.labels(), folds, seed);
    return ds;
}

Dataset load_dataset(const fs::path& root, int folds, std::uint64_t seed) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) throw IngestionError("dataset root is not a directory: " + root.string());

    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) class_dirs.push_back(entry.path());
    }
    std::sort(class_dirs.begin(), class_dirs.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    if (class_dirs.empty()) throw IngestionError("no class directories under " + root.string());

    std::vector<std::string> class_names;
    std::vector<std::pair<fs::path, int>> files;
    for (const auto& dir : class_dirs) {
        const int class_id = static_cast<int>(class_names.size());
        class_names.push_back(dir.filename().string());
        std::vector<fs::path> members;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && is_supported_image(entry.path())) members.push_back(entry.path());
        }
        if (members.empty()) throw IngestionError("class directory has no images: " + class_names.back());
        std::sort(members.begin(), members.end(),
                  [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
        for (auto& m : members) files.emplace_back(std::move(m), class_id);
    }

    std::vector<LabeledImage> items(files.size());
    detail::parallel_for(files.size(), [&](std::size_t i) {
        items[i] = LabeledImage{load_image(files[i].first), files[i].second, files[i].first.string()};
    });

    return make_dataset(std::move(items), std::move(class_names), folds, seed);
}

} // namespace texdiff
