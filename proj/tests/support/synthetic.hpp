#pragma once

#include "texdiff/dataset.hpp"
#include "texdiff/image.hpp"

#include <cstdint>
#include <filesystem>

namespace synthetic {

/// Uniform random intensities in [0, 1].
texdiff::Image random_image(std::size_t width, std::size_t height, std::uint64_t seed);

/// Random image whose pixels take only `levels` distinct values (i / (levels - 1)),
/// so neighbour ties are frequent.
texdiff::Image random_levels(std::size_t width, std::size_t height, int levels, std::uint64_t seed);

/// Procedural texture of class 0 (oriented stripes), 1 (checkerboard),
/// 2 (smoothed blobs) or 3 (radial rings), with random phase and noise.
texdiff::Image texture(int texture_class, std::size_t size, std::uint64_t seed);

/// `classes` x `per_class` procedural textures of size x size pixels.
texdiff::Dataset texture_dataset(int classes = 3, int per_class = 12, std::size_t size = 32, int folds = 10,
                                 std::uint64_t seed = 0);

/// Same layout as texture_dataset, every image constant at `value`.
texdiff::Dataset constant_dataset(int classes = 3, int per_class = 12, std::size_t size = 32, int folds = 10,
                                  double value = 0.5);

/// Writes `<root>/<class>/<index>.pgm` for every item.
void write_dataset(const std::filesystem::path& root, const texdiff::Dataset& dataset);

/// Fresh empty directory under the system temp path.
std::filesystem::path temp_dir(const std::string& tag);

} // namespace synthetic
