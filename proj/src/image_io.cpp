#include "texdiff/image_io.hpp"

#include "texdiff/error.hpp"

#include <png.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

namespace texdiff {
namespace fs = std::filesystem;

namespace {

std::string lower_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DecodeError("cannot open image file: " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw DecodeError("read failure: " + path.string());
    return bytes;
}

// Header tokenizer for the netpbm family; '#' starts a comment to end of line.
class PnmReader {
public:
    PnmReader(std::span<const std::uint8_t> bytes, const std::string& origin)
        : bytes_(bytes), origin_(origin) {}

    unsigned long next_uint() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
            throw DecodeError("malformed PNM header/data in " + origin_);
        unsigned long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 0xFFFFFFFFul) throw DecodeError("PNM value overflow in " + origin_);
            ++pos_;
        }
        return value;
    }

    // Binary rasters start after exactly one whitespace byte following maxval.
    void skip_single_whitespace() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
            throw DecodeError("missing raster separator in " + origin_);
        ++pos_;
    }

    std::uint32_t next_binary(bool wide) {
        const std::size_t need = wide ? 2 : 1;
        if (pos_ + need > bytes_.size()) throw DecodeError("truncated PNM raster in " + origin_);
        std::uint32_t v = bytes_[pos_];
        if (wide) v = (v << 8) | bytes_[pos_ + 1];
        pos_ += need;
        return v;
    }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::string origin_;
    std::size_t pos_ = 0;
};

Image decode_png(const fs::path& path) {
    png_image png{};
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.c_str())) {
        std::string msg = png.message;
        png_image_free(&png);
        throw DecodeError("PNG decode failed for " + path.string() + ": " + msg);
    }
    const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
    png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = png.message;
        png_image_free(&png);
        throw DecodeError("PNG decode failed for " + path.string() + ": " + msg);
    }
    const std::size_t w = png.width;
    const std::size_t h = png.height;
    std::vector<double> data(w * h);
    if (color) {
        for (std::size_t i = 0; i < w * h; ++i)
            data[i] = luminance(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2], 255);
    } else {
        for (std::size_t i = 0; i < w * h; ++i) data[i] = buffer[i] / 255.0;
    }
    return Image(w, h, std::move(data));
}

} // namespace

double luminance(std::uint32_t r, std::uint32_t g, std::uint32_t b, std::uint32_t maxval) noexcept {
    const double scale = static_cast<double>(maxval);
    if (r == g && g == b) return r / scale;
    return (kLumaRed * r + kLumaGreen * g + kLumaBlue * b) / scale;
}

bool is_supported_image(const fs::path& path) {
    const std::string ext = lower_extension(path);
    return ext == ".png" || ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

Image decode_pnm(std::span<const std::uint8_t> bytes, const std::string& origin) {
    if (bytes.size() < 2 || bytes[0] != 'P') throw FormatError("not a PGM/PPM file: " + origin);
    const char kind = static_cast<char>(bytes[1]);
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6')
        throw FormatError(std::string("unsupported netpbm variant P") + kind + ": " + origin);
    const bool ascii = kind == '2' || kind == '3';
    const bool rgb = kind == '3' || kind == '6';

    PnmReader reader(bytes.subspan(2), origin);
    const auto width = reader.next_uint();
    const auto height = reader.next_uint();
    const auto maxval = reader.next_uint();
    if (width == 0 || height == 0) throw DecodeError("empty PNM raster in " + origin);
    if (maxval == 0 || maxval > 65535) throw DecodeError("invalid PNM maxval in " + origin);
    if (!ascii) reader.skip_single_whitespace();
    const bool wide = maxval > 255;

    auto sample = [&]() -> std::uint32_t {
        const std::uint32_t v = ascii ? static_cast<std::uint32_t>(reader.next_uint()) : reader.next_binary(wide);
        if (v > maxval) throw DecodeError("PNM sample exceeds maxval in " + origin);
        return v;
    };

    std::vector<double> data(width * height);
    const auto m = static_cast<std::uint32_t>(maxval);
    for (auto& px : data) {
        if (rgb) {
            const auto r = sample();
            const auto g = sample();
            const auto b = sample();
            px = luminance(r, g, b, m);
        } else {
            px = sample() / static_cast<double>(m);
        }
    }
    return Image(width, height, std::move(data));
}

Image load_image(const fs::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") {
        if (!fs::exists(path)) throw DecodeError("cannot open image file: " + path.string());
        return decode_png(path);
    }
    if (ext == ".pgm" || ext == ".ppm" || ext == ".pnm") {
        const auto bytes = read_bytes(path);
        return decode_pnm(bytes, path.string());
    }
    throw FormatError("unsupported image format '" + ext + "': " + path.string());
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    static std::atomic<unsigned long> counter{0};
    std::ostringstream tmp_name;
    tmp_name << path.filename().string() << ".tmp." << ::getpid() << '.'
             << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.' << counter++;
    const fs::path tmp = path.parent_path() / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw IoError("write failure: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

void write_pgm(const fs::path& path, const Image& image) {
    std::string out = "P5\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
    out.reserve(out.size() + image.size());
    for (double v : image.pixels()) {
        const double c = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
        out.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(c * 255.0))));
    }
    write_file_atomic(path, out);
}

} // namespace texdiff
