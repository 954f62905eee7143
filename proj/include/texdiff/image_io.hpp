#pragma once

#include "texdiff/image.hpp"

#include <cstdint>
#include <filesystem>
#include <span>

namespace texdiff {

/// ITU-R BT.601 luminance weights used for RGB -> gray conversion.
inline constexpr double kLumaRed = 0.299;
inline constexpr double kLumaGreen = 0.587;
inline constexpr double kLumaBlue = 0.114;

/// Gray level in [0, 1] for an RGB triple with the given maxval. Pixels with
/// equal channels map to channel / maxval exactly, so conversion is
/// idempotent on gray content.
double luminance(std::uint32_t r, std::uint32_t g, std::uint32_t b, std::uint32_t maxval) noexcept;

/// Decodes a PNG or PGM/PPM (ASCII P2/P3 or binary P5/P6) file into a
/// grayscale image scaled to [0, 1]. Throws DecodeError / FormatError.
Image load_image(const std::filesystem::path& path);

/// Decodes PGM/PPM bytes. `origin` is only used in error messages.
Image decode_pnm(std::span<const std::uint8_t> bytes, const std::string& origin);

bool is_supported_image(const std::filesystem::path& path);

/// Writes an 8-bit binary PGM. Intensities are clamped to [0, 1] and
/// rounded to 0..255. The file is written to a temporary and renamed.
void write_pgm(const std::filesystem::path& path, const Image& image);

/// Writes `contents` to `path` via write-temp-then-rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

} // namespace texdiff
