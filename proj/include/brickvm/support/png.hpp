#pragma once

#include <cstdint>
#include <stdexcept>

#include "brickvm/support/bytes.hpp"

namespace brickvm::png {

class PngError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 8-bit RGBA, row-major, top row first.
struct Image {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    Bytes rgba;

    Image() = default;
    Image(std::uint32_t w, std::uint32_t h) : width(w), height(h), rgba(std::size_t{w} * h * 4, 0) {}

    std::uint8_t* pixel(std::uint32_t x, std::uint32_t y) { return &rgba[(std::size_t{y} * width + x) * 4]; }
    const std::uint8_t* pixel(std::uint32_t x, std::uint32_t y) const {
        return &rgba[(std::size_t{y} * width + x) * 4];
    }
    std::uint8_t alpha(std::uint32_t x, std::uint32_t y) const { return pixel(x, y)[3]; }
    void set(std::uint32_t x, std::uint32_t y, std::uint8_t r, std::uint8_t g, std::uint8_t b, std::uint8_t a) {
        auto* p = pixel(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
        p[3] = a;
    }
};

Image decode(ByteView data);
Bytes encode(const Image& image);

}  // namespace brickvm::png
