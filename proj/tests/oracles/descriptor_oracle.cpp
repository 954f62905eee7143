#include "oracles/descriptor_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

int Gray::at(int x, int y) const {
    x = std::min(std::max(x, 0), width - 1);
    y = std::min(std::max(y, 0), height - 1);
    return v[static_cast<std::size_t>(y * width + x)];
}

Gray quantize(int width, int height, const std::vector<double>& values) {
    Gray g{width, height, {}};
    for (double value : values) g.v.push_back(static_cast<int>(std::lround(255.0 * std::min(1.0, std::max(0.0, value)))));
    return g;
}

static void offset(int p, int& dx, int& dy) {
    const double angle = 2.0 * std::numbers::pi * p / 8.0;
    dx = static_cast<int>(std::lround(std::cos(angle)));
    dy = -static_cast<int>(std::lround(std::sin(angle)));
}

std::vector<int> neighbours(const Gray& g, int x, int y) {
    std::vector<int> out;
    for (int p = 0; p < 8; ++p) {
        int dx = 0, dy = 0;
        offset(p, dx, dy);
        out.push_back(g.at(x + dx, y + dy));
    }
    return out;
}

static int s(int x) { return x >= 0 ? 1 : 0; }

std::vector<std::int64_t> lbp(const Gray& g) {
    std::vector<std::int64_t> h(256, 0);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            const auto n = neighbours(g, x, y);
            int code = 0;
            for (int p = 0; p < 8; ++p) code += s(n[p] - g.at(x, y)) * (1 << p);
            ++h[code];
        }
    return h;
}

std::vector<std::int64_t> lbpv_x512(const Gray& g) {
    std::vector<double> h(10, 0.0);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            const auto n = neighbours(g, x, y);
            const int c = g.at(x, y);
            int u = std::abs(s(n[7] - c) - s(n[0] - c));
            for (int p = 1; p < 8; ++p) u += std::abs(s(n[p] - c) - s(n[p - 1] - c));
            int code = 9;
            if (u < 2) {
                code = 0;
                for (int p = 0; p < 8; ++p) code += s(n[p] - c);
            }
            double mu = 0.0;
            for (int p = 0; p < 8; ++p) mu += n[p];
            mu /= 8.0;
            double var = 0.0;
            for (int p = 0; p < 8; ++p) var += (n[p] - mu) * (n[p] - mu);
            h[code] += var / 8.0;
        }
    std::vector<std::int64_t> out;
    for (double v : h) out.push_back(std::llround(v * 512.0));
    return out;
}

std::vector<std::int64_t> clbp(const Gray& g) {
    double mag_sum = 0.0;
    double gray_sum = 0.0;
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            gray_sum += g.at(x, y);
            for (int n : neighbours(g, x, y)) mag_sum += std::abs(g.at(x, y) - n);
        }
    const double pixels = static_cast<double>(g.width) * g.height;
    const double c_m = mag_sum / (8.0 * pixels);
    const double c_i = gray_sum / pixels;

    std::vector<std::int64_t> out(514, 0);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            const int c = g.at(x, y);
            const auto n = neighbours(g, x, y);
            int sign = 0, mag = 0;
            for (int p = 0; p < 8; ++p) {
                const int d = c - n[p];
                if (-d >= 0) sign |= 1 << p;
                if (std::abs(d) >= c_m) mag |= 1 << p;
            }
            ++out[sign];
            ++out[256 + mag];
            ++out[512 + (c >= c_i ? 1 : 0)];
        }
    return out;
}

static int transitions(int code) {
    int u = 0;
    for (int p = 0; p < 8; ++p) u += ((code >> p) & 1) != ((code >> ((p + 1) % 8)) & 1);
    return u;
}

std::vector<double> lbphf(const Gray& g) {
    const auto h = lbp(g);
    double misc = 0.0;
    for (int code = 0; code < 256; ++code)
        if (transitions(code) > 2) misc += static_cast<double>(h[code]);

    std::vector<double> out;
    for (int n = 1; n <= 7; ++n) {
        std::vector<double> row;
        for (int r = 0; r < 8; ++r) {
            const int base = (1 << n) - 1;
            const int rotated = ((base << r) | (base >> (8 - r))) & 0xFF;
            row.push_back(static_cast<double>(h[rotated]));
        }
        for (int u = 0; u <= 4; ++u) {
            std::complex<double> sum = 0.0;
            for (int r = 0; r < 8; ++r) sum += row[r] * std::polar(1.0, -2.0 * std::numbers::pi * u * r / 8.0);
            out.push_back(std::abs(sum));
        }
    }
    out.push_back(static_cast<double>(h[0]));
    out.push_back(static_cast<double>(h[255]));
    out.push_back(misc);
    return out;
}

std::vector<std::int64_t> ltp(const Gray& g, int k) {
    std::vector<std::int64_t> out(512, 0);
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) {
            const int c = g.at(x, y);
            const auto n = neighbours(g, x, y);
            int upper = 0, lower = 0;
            for (int p = 0; p < 8; ++p) {
                const int t = n[p] > c + k ? 1 : (n[p] < c - k ? -1 : 0);
                if (t == 1) upper += 1 << p;
                if (t == -1) lower += 1 << p;
            }
            ++out[upper];
            ++out[256 + lower];
        }
    return out;
}

std::vector<std::int64_t> cslbp(int width, int height, const std::vector<double>& values, double t) {
    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());
    auto norm = [&](int x, int y) {
        x = std::min(std::max(x, 0), width - 1);
        y = std::min(std::max(y, 0), height - 1);
        return hi > lo ? (values[static_cast<std::size_t>(y * width + x)] - lo) / (hi - lo) : 0.0;
    };
    std::vector<std::int64_t> out(256, 0);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            int code = 0;
            for (int i = 0; i < 4; ++i) {
                int ax = 0, ay = 0, bx = 0, by = 0;
                offset(i, ax, ay);
                offset(i + 4, bx, by);
                if (norm(x + ax, y + ay) - norm(x + bx, y + by) > t) code += 1 << i;
            }
            const int cell_row = static_cast<int>(std::floor(4.0 * y / height));
            const int cell_col = static_cast<int>(std::floor(4.0 * x / width));
            ++out[static_cast<std::size_t>((cell_row * 4 + cell_col) * 16 + code)];
        }
    return out;
}

} // namespace oracle
