#pragma once

// Brute-force re-evaluation of the descriptor definitions. Nothing here
// calls into the library's descriptor code; neighbours are placed on the
// unit circle, histograms are recounted pixel by pixel.

#include <cstdint>
#include <vector>

namespace oracle {

struct Gray {
    int width = 0;
    int height = 0;
    std::vector<int> v; // row-major gray levels

    int at(int x, int y) const;      // replicate padding
};

/// round(255 * clamp(value, 0, 1)) per pixel.
Gray quantize(int width, int height, const std::vector<double>& values);

/// g_p for p = 0..7 at angle 2 pi p / 8 on a radius-1 ring (screen y down).
std::vector<int> neighbours(const Gray& g, int x, int y);

std::vector<std::int64_t> lbp(const Gray& g);
/// LBPV bins scaled by 512 so that they are integers.
std::vector<std::int64_t> lbpv_x512(const Gray& g);
/// S | M | C concatenated (514 bins).
std::vector<std::int64_t> clbp(const Gray& g);
std::vector<double> lbphf(const Gray& g);
/// upper | lower (512 bins).
std::vector<std::int64_t> ltp(const Gray& g, int k);
/// 4x4 cells x 16 codes on the min-max normalized image.
std::vector<std::int64_t> cslbp(int width, int height, const std::vector<double>& values, double t);

} // namespace oracle
