#pragma once

#include <cstdint>
#include <vector>

#include "brickvm/support/png.hpp"

namespace brickvm::physics {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 o) { return *this = *this + o; }
    Vec2& operator-=(Vec2 o) { return *this = *this - o; }
    friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

struct GridPoint {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend bool operator==(GridPoint, GridPoint) = default;
    friend auto operator<=>(GridPoint, GridPoint) = default;
};

/// Opacity grid with cell (0, 0) at the bottom-left, Y up.
struct AlphaMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> cells;  // row-major from the bottom row, 1 = opaque

    AlphaMask() = default;
    AlphaMask(int w, int h) : width(w), height(h), cells(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool opaque = true) { cells[static_cast<std::size_t>(y) * width + x] = opaque ? 1 : 0; }

    /// Pixels with alpha > 0 are opaque. Image row 0 (top) becomes mask row height-1.
    static AlphaMask from_image(const png::Image& image);
};

/// Counter-clockwise vertices on pixel corners, starting at the lowest-x
/// (then lowest-y) vertex, no collinear points. Empty when nothing is opaque.
struct ConvexHull {
    std::vector<GridPoint> vertices;
    friend bool operator==(const ConvexHull&, const ConvexHull&) = default;
};

ConvexHull compute_convex_hull(const AlphaMask& mask);

/// Rotates a counter-clockwise vertex cycle to start at its smallest (x, y) vertex.
std::vector<GridPoint> canonical_cycle(std::vector<GridPoint> cycle);

}  // namespace brickvm::physics
