#include "brickvm/physics/hull.hpp"

#include <algorithm>

namespace brickvm::physics {

AlphaMask AlphaMask::from_image(const png::Image& image) {
    AlphaMask m(static_cast<int>(image.width), static_cast<int>(image.height));
    for (std::uint32_t row = 0; row < image.height; ++row) {
        for (std::uint32_t x = 0; x < image.width; ++x) {
            if (image.alpha(x, row) > 0) m.set(static_cast<int>(x), static_cast<int>(image.height - 1 - row));
        }
    }
    return m;
}

namespace {

std::int64_t turn(GridPoint o, GridPoint a, GridPoint b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

}  // namespace

std::vector<GridPoint> canonical_cycle(std::vector<GridPoint> cycle) {
    if (cycle.empty()) return cycle;
    auto first = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), first, cycle.end());
    return cycle;
}

ConvexHull compute_convex_hull(const AlphaMask& mask) {
    // Only the outermost opaque cell of each row can contribute hull corners.
    std::vector<GridPoint> pts;
    for (int y = 0; y < mask.height; ++y) {
        int lo = -1, hi = -1;
        for (int x = 0; x < mask.width; ++x) {
            if (mask.at(x, y)) {
                if (lo < 0) lo = x;
                hi = x;
            }
        }
        if (lo < 0) continue;
        pts.push_back({lo, y});
        pts.push_back({lo, y + 1});
        pts.push_back({hi + 1, y});
        pts.push_back({hi + 1, y + 1});
    }
    if (pts.empty()) return {};
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    // Andrew's monotone chain; `<= 0` drops collinear points.
    std::vector<GridPoint> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && turn(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return ConvexHull{canonical_cycle(std::move(hull))};
}

}  // namespace brickvm::physics
