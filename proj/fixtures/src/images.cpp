#include "fixtures.hpp"

#include "brickvm/support/hash.hpp"

namespace brickvm::fixtures {

png::Image filled_rect(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    png::Image img(static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height));
    for (std::uint32_t y = 0; y < img.height; ++y) {
        for (std::uint32_t x = 0; x < img.width; ++x) img.set(x, y, r, g, b, 255);
    }
    return img;
}

png::Image disc(int diameter, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    png::Image img(static_cast<std::uint32_t>(diameter), static_cast<std::uint32_t>(diameter));
    double c = diameter / 2.0;
    for (std::uint32_t y = 0; y < img.height; ++y) {
        for (std::uint32_t x = 0; x < img.width; ++x) {
            double dx = x + 0.5 - c, dy = y + 0.5 - c;
            if (dx * dx + dy * dy <= c * c) img.set(x, y, r, g, b, 255);
        }
    }
    return img;
}

model::Look add_look(model::Project& project, const std::string& name, const png::Image& image) {
    Bytes data = png::encode(image);
    std::string file = "images/" + hex64(fnv1a64(data)) + ".png";
    project.assets[file] = std::move(data);
    return model::Look{name, file, static_cast<int>(image.width), static_cast<int>(image.height)};
}

}  // namespace brickvm::fixtures
