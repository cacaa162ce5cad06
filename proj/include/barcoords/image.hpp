#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

namespace barcoords {

// Row-major grayscale image with intensities in [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    double at(int row, int col) const { return pixels[row * width + col]; }
    double& at(int row, int col) { return pixels[row * width + col]; }

    static GrayImage filled(int w, int h, double v) {
        return {w, h, std::vector<double>(static_cast<std::size_t>(w) * h, v)};
    }
};

struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> on;

    bool at(int row, int col) const { return on[row * width + col] != 0; }
    void set(int row, int col, bool v) { on[row * width + col] = v ? 1 : 0; }

    static BinaryImage filled(int w, int h, bool v) {
        return {w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h,
                                                v ? 1 : 0)};
    }
};

}  // namespace barcoords
