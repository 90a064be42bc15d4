#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "brickvm/physics/hull.hpp"
#include "brickvm/physics/world.hpp"
#include "hull_oracle.hpp"

using namespace brickvm::physics;
using brickvm::testing::oracle_hull;
using brickvm::testing::random_mask;

namespace {

AlphaMask mask_from_rows(const std::vector<std::string>& rows) {
    // rows[0] is the top row, as drawn.
    AlphaMask m(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t x = 0; x < rows[r].size(); ++x)
            if (rows[r][x] == '#') m.set(static_cast<int>(x), static_cast<int>(rows.size() - 1 - r));
    return m;
}

std::shared_ptr<const Shape> box(double w, double h) {
    return std::make_shared<Shape>(Shape{{{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}}});
}

Body make_body(MotionType type, Vec2 pos, std::shared_ptr<const Shape> shape) {
    Body b;
    b.type = type;
    b.position = pos;
    b.shape = std::move(shape);
    return b;
}

bool is_strictly_convex_ccw(const std::vector<GridPoint>& v) {
    if (v.size() < 3) return false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& o = v[i];
        const auto& a = v[(i + 1) % v.size()];
        const auto& b = v[(i + 2) % v.size()];
        if ((a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x) <= 0) return false;
    }
    return true;
}

bool inside_or_on(const std::vector<GridPoint>& hull, GridPoint p) {
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& o = hull[i];
        const auto& a = hull[(i + 1) % hull.size()];
        if ((a.x - o.x) * (p.y - o.y) - (a.y - o.y) * (p.x - o.x) < 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("hull of a fully opaque 2x2 mask is its square") {
    AlphaMask m(2, 2);
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) m.set(x, y);
    std::vector<GridPoint> want{{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    CHECK(compute_convex_hull(m).vertices == want);
    CHECK(oracle_hull(m).vertices == want);
}

TEST_CASE("hull of a single pixel is that pixel's square") {
    AlphaMask m(5, 4);
    m.set(3, 1);
    std::vector<GridPoint> want{{3, 1}, {4, 1}, {4, 2}, {3, 2}};
    CHECK(compute_convex_hull(m).vertices == want);
}

TEST_CASE("fully transparent mask has an empty hull") {
    CHECK(compute_convex_hull(AlphaMask(7, 3)).vertices.empty());
    CHECK(oracle_hull(AlphaMask(7, 3)).vertices.empty());
}

TEST_CASE("U and 8 shapes are covered ignoring their concavities") {
    auto u = mask_from_rows({
        "#....#",
        "#....#",
        "#....#",
        "######",
    });
    std::vector<GridPoint> want_u{{0, 0}, {6, 0}, {6, 4}, {0, 4}};
    CHECK(compute_convex_hull(u).vertices == want_u);
    CHECK(oracle_hull(u).vertices == want_u);

    auto eight = mask_from_rows({
        "..##..",
        ".#..#.",
        "..##..",
        ".#..#.",
        "..##..",
    });
    auto h = compute_convex_hull(eight);
    CHECK(h == oracle_hull(eight));
    std::vector<GridPoint> want_8{{1, 1}, {2, 0}, {4, 0}, {5, 1}, {5, 4}, {4, 5}, {2, 5}, {1, 4}};
    CHECK(h.vertices == want_8);
}

TEST_CASE("hull equals the gift-wrapping oracle on random masks") {
    std::mt19937_64 rng(0x4855'4c4cULL);
    for (int i = 0; i < 200; ++i) {
        auto m = random_mask(rng, 64);
        auto got = compute_convex_hull(m);
        auto want = oracle_hull(m);
        REQUIRE_MESSAGE(got == want, "mask " << i << " " << m.width << "x" << m.height);
        if (got.vertices.empty()) continue;
        CHECK(is_strictly_convex_ccw(got.vertices));
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x)
                if (m.at(x, y))
                    for (int dy = 0; dy <= 1; ++dy)
                        for (int dx = 0; dx <= 1; ++dx) REQUIRE(inside_or_on(got.vertices, {x + dx, y + dy}));
    }
}

TEST_CASE("image rows are flipped so the hull is Y up") {
    brickvm::png::Image img;
    img.width = 3;
    img.height = 2;
    img.rgba.assign(3 * 2 * 4, 0);
    img.set(0, 0, 255, 0, 0, 255);  // top-left pixel
    auto m = AlphaMask::from_image(img);
    CHECK(m.at(0, 1));
    CHECK_FALSE(m.at(0, 0));
}

TEST_CASE("free fall from rest matches the semi-implicit Euler closed form") {
    PhysicsWorld w;
    w.gravity = {0, -10};
    w.bodies[1] = make_body(MotionType::Dynamic, {0, 0}, box(10, 10));
    const int n = 60;
    const double dt = 1.0 / 60.0;
    for (int i = 0; i < n; ++i) w.step(dt);
    double expected = -10.0 * dt * dt * n * (n + 1) / 2.0;
    CHECK(std::abs(w.bodies[1].position.y - expected) <= 1e-9);
    CHECK(std::abs(expected - (-5.0833333333333333)) < 1e-12);
    CHECK(std::abs(w.bodies[1].velocity.y - -10.0) <= 1e-12);
    CHECK(w.bodies[1].position.x == 0.0);
}

TEST_CASE("rebound speed is the bounce product times the incident speed") {
    for (double wall_bounce : {1.0, 0.8, 0.25}) {
        PhysicsWorld w;
        w.bodies[1] = make_body(MotionType::Static, {0, -50}, box(400, 100));
        Body ball = make_body(MotionType::Dynamic, {0, 8.05}, box(16, 16));
        ball.bounce = 0.5;
        ball.velocity = {0, -8};
        w.bodies[2] = ball;
        w.bodies[1].bounce = wall_bounce;
        auto contacts = w.step(1.0 / 60.0);
        REQUIRE(contacts.size() == 1);
        CHECK(contacts[0].normal == Vec2{0, 1});
        CHECK(std::abs(w.bodies[2].velocity.y - 0.5 * wall_bounce * 8.0) <= 1e-6);
        CHECK(w.bodies[2].velocity.x == 0.0);
    }
}

TEST_CASE("Static bodies keep byte-identical transforms over 1000 steps") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PhysicsWorld w;
    w.gravity = {3, -25};
    w.bodies[1] = make_body(MotionType::Static, {0, -200}, box(600, 40));
    w.bodies[2] = make_body(MotionType::Static, {-0.0, 0.1}, box(40, 600));
    w.bodies[2].direction = 73.5;
    for (BodyId id = 3; id < 20; ++id) {
        w.bodies[id] = make_body(MotionType::Dynamic, {u(rng) * 250, u(rng) * 250}, box(10 + 10 * std::abs(u(rng)), 12));
        w.bodies[id].velocity = {u(rng) * 300, u(rng) * 300};
        w.bodies[id].direction = 90 + u(rng) * 180;
    }
    auto bytes = [&](BodyId id) {
        const Body& b = w.bodies[id];
        std::vector<unsigned char> out(7 * sizeof(double));
        double fields[7] = {b.position.x, b.position.y, b.velocity.x, b.velocity.y, b.direction, b.scale, b.mass};
        std::memcpy(out.data(), fields, sizeof fields);
        return out;
    };
    auto wall = bytes(1), post = bytes(2);
    std::size_t touched = 0;
    for (int i = 0; i < 1000; ++i) {
        touched += w.step(1.0 / 60.0).size();
        REQUIRE(bytes(1) == wall);
        REQUIRE(bytes(2) == post);
    }
    CHECK(touched > 0);
}

TEST_CASE("with no gravity and no contacts velocity is constant and motion linear") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-500.0, 500.0);
    for (int trial = 0; trial < 20; ++trial) {
        PhysicsWorld w;
        Vec2 v{u(rng), u(rng)};
        Vec2 p{u(rng), u(rng)};
        w.bodies[1] = make_body(MotionType::Dynamic, p, box(4, 4));
        w.bodies[1].velocity = v;
        const double dt = 1.0 / 60.0;
        for (int i = 1; i <= 300; ++i) {
            w.step(dt);
            p += v * dt;
            REQUIRE(w.bodies[1].velocity == v);
            REQUIRE(w.bodies[1].position == p);
        }
        CHECK(std::abs(w.bodies[1].position.x - (p.x)) == 0.0);
    }
}

TEST_CASE("single impacts never gain normal speed") {
    std::mt19937_64 rng(0xB0B);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int impacts = 0;
    for (int trial = 0; trial < 500; ++trial) {
        PhysicsWorld w;
        w.bodies[1] = make_body(u(rng) < 0.5 ? MotionType::Static : MotionType::Dynamic, {0, -50}, box(400, 100));
        w.bodies[2] = make_body(MotionType::Dynamic, {u(rng) * 20 - 10, 5 + u(rng) * 3}, box(8 + u(rng) * 8, 6 + u(rng) * 6));
        for (BodyId id : {BodyId{1}, BodyId{2}}) {
            w.bodies[id].bounce = u(rng);
            w.bodies[id].friction = u(rng) * 2;
            w.bodies[id].mass = 0.1 + u(rng) * 5;
        }
        w.bodies[1].velocity = w.bodies[1].type == MotionType::Dynamic ? Vec2{u(rng) * 10 - 5, u(rng) * 10 - 5} : Vec2{};
        w.bodies[2].velocity = {u(rng) * 200 - 100, -u(rng) * 200};
        Vec2 before = w.bodies[2].velocity - w.bodies[1].velocity;
        auto contacts = w.step(1.0 / 60.0);
        if (contacts.size() != 1) continue;
        ++impacts;
        Vec2 n = contacts[0].normal;
        Vec2 after = w.bodies[2].velocity - w.bodies[1].velocity;
        CHECK(std::abs(dot(after, n)) <= std::abs(dot(before, n)) + 1e-9);
    }
    CHECK(impacts > 100);
}

TEST_CASE("None bodies never produce contacts") {
    PhysicsWorld w;
    w.bodies[1] = make_body(MotionType::None, {0, 0}, box(50, 50));
    w.bodies[2] = make_body(MotionType::None, {5, 5}, box(50, 50));
    CHECK(w.step(1.0 / 60.0).empty());
    w.set_motion_type(2, MotionType::Dynamic);
    CHECK(w.step(1.0 / 60.0).empty());
    w.set_motion_type(1, MotionType::Static);
    CHECK(w.step(1.0 / 60.0).size() == 1);
}

TEST_CASE("separated bodies have no contacts; a wedged ball touches both walls") {
    PhysicsWorld w;
    w.bodies[1] = make_body(MotionType::Static, {0, -20}, box(200, 40));   // floor, top at y = 0
    w.bodies[2] = make_body(MotionType::Static, {-20, 100}, box(40, 200)); // wall, right side at x = 0
    w.bodies[3] = make_body(MotionType::Dynamic, {100, 100}, box(10, 10));
    CHECK(w.step(1.0 / 60.0).empty());
    CHECK(w.contacts_of(3).empty());

    w.bodies[3].position = {4.8, 4.8};
    w.bodies[3].velocity = {};
    w.step(1.0 / 60.0);
    auto cs = w.contacts_of(3);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].normal == Vec2{0, 1});
    CHECK(cs[1].normal == Vec2{1, 0});
}

TEST_CASE("set_motion_type zeroes velocity only for Static") {
    PhysicsWorld w;
    w.bodies[1] = make_body(MotionType::Dynamic, {3, 4}, box(2, 2));
    w.bodies[1].velocity = {1, 2};
    w.set_motion_type(1, MotionType::None);
    CHECK(w.bodies[1].velocity == Vec2{1, 2});
    w.set_motion_type(1, MotionType::Static);
    CHECK(w.bodies[1].velocity == Vec2{});
    CHECK(w.bodies[1].position == Vec2{3, 4});
}

TEST_CASE("hull rotation follows direction and scale applies first") {
    Body b = make_body(MotionType::Dynamic, {10, 20}, std::make_shared<Shape>(Shape{{{2, 0}, {0, 1}, {-1, -1}}}));
    b.scale = 2.0;
    b.direction = 0.0;  // pointing up: rotated 90 degrees counter-clockwise
    auto v = b.world_vertices();
    CHECK(v[0].x == doctest::Approx(10));
    CHECK(v[0].y == doctest::Approx(24));
    CHECK(v[1].x == doctest::Approx(8));
    CHECK(v[1].y == doctest::Approx(20));
}

TEST_CASE("hull cache computes each look once") {
    brickvm::png::Image img;
    img.width = 4;
    img.height = 4;
    img.rgba.assign(4 * 4 * 4, 255);
    HullCache cache;
    auto a = cache.build("look-a", img);
    auto b = cache.build("look-a", img);
    CHECK(a == b);
    CHECK(cache.computations() == 1);
    cache.build("look-b", img);
    CHECK(cache.computations() == 2);
    CHECK(cache.get("look-c") == nullptr);
    std::vector<Vec2> want{{-2, -2}, {2, -2}, {2, 2}, {-2, 2}};
    CHECK(a->vertices == want);
}

TEST_CASE("trace lists bodies and contacts") {
    PhysicsWorld w;
    w.bodies[1] = make_body(MotionType::Static, {0, 0}, box(2, 2));
    w.bodies[2] = make_body(MotionType::Dynamic, {1.5, 0}, box(2, 2));
    w.step(0.0);
    auto t = w.trace();
    CHECK(t.find("body 1 static pos 0 0 vel 0 0 hull (-1 -1) (1 -1) (1 1) (-1 1)\n") != std::string::npos);
    CHECK(t.find("contact 1 2 normal 1 0 depth 0.5\n") != std::string::npos);
}
