#include "brickvm/support/png.hpp"

#include <png.h>

#include <cstring>

namespace brickvm::png {

Image decode(ByteView data) {
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&img, data.data(), data.size()))
        throw PngError(std::string("png: ") + img.message);
    img.format = PNG_FORMAT_RGBA;
    if (img.width == 0 || img.height == 0) {
        png_image_free(&img);
        throw PngError("png: empty image");
    }
    Image out(img.width, img.height);
    if (!png_image_finish_read(&img, nullptr, out.rgba.data(), 0, nullptr)) {
        std::string msg = img.message;
        png_image_free(&img);
        throw PngError("png: " + msg);
    }
    return out;
}

Bytes encode(const Image& image) {
    if (image.width == 0 || image.height == 0) throw PngError("png: empty image");
    png_image img;
    std::memset(&img, 0, sizeof img);
    img.version = PNG_IMAGE_VERSION;
    img.width = image.width;
    img.height = image.height;
    img.format = PNG_FORMAT_RGBA;
    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.rgba.data(), 0, nullptr))
        throw PngError(std::string("png: ") + img.message);
    Bytes out(size);
    if (!png_image_write_to_memory(&img, out.data(), &size, 0, image.rgba.data(), 0, nullptr))
        throw PngError(std::string("png: ") + img.message);
    out.resize(size);
    return out;
}

}  // namespace brickvm::png
