#include "fixtures.hpp"

#include "brickvm/support/text.hpp"

namespace brickvm::fixtures {

using namespace brickvm::model;

namespace {

struct WallSpec {
    const char* name;
    int x, y, width, height;
};

// 1080 x 1920 stage: a frame plus three staggered bars forming a serpentine,
// and a short post that makes a corner pocket near the start.
constexpr WallSpec kWalls[] = {
    {"Wall left", -520, 0, 40, 1920},   {"Wall right", 520, 0, 40, 1920},  {"Wall top", 0, 940, 1080, 40},
    {"Wall bottom", 0, -940, 1080, 40}, {"Bar 1", -150, 480, 780, 40},     {"Bar 2", 150, 0, 780, 40},
    {"Bar 3", -150, -480, 780, 40},     {"Post", 100, 740, 40, 360},
};

}  // namespace

Project tilt_maze_project() {
    Project p = empty_project("Tilt maze");
    p.scenes[0].objects[0].looks.push_back(add_look(p, "Wood", filled_rect(54, 96, 190, 150, 100)));

    for (const auto& w : kWalls) {
        SpriteObject& wall = p.scenes[0].objects.emplace_back();
        wall.name = w.name;
        wall.looks.push_back(add_look(p, "Wall", filled_rect(w.width, w.height, 120, 80, 40)));
        Script s;
        s.bricks = {
            make_brick(BrickKind::PlaceAt, {{"x", text::format_number(w.x)}, {"y", text::format_number(w.y)}}),
            make_brick(BrickKind::SetMotionType, {}, {{"type", std::string(kMotionStatic)}}),
        };
        wall.scripts.push_back(std::move(s));
    }

    SpriteObject& ball = p.scenes[0].objects.emplace_back();
    ball.name = "Ball";
    ball.looks.push_back(add_look(p, "Metal", disc(60, 170, 170, 180)));
    Script start;
    start.bricks = {
        make_brick(BrickKind::PlaceAt, {{"x", "-400"}, {"y", "800"}}),
        make_brick(BrickKind::SetMotionType, {}, {{"type", std::string(kMotionDynamic)}}),
        make_brick(BrickKind::Forever),
        make_brick(BrickKind::SetGravity, {{"x", "-3 × inclination_x"}, {"y", "-3 × inclination_y"}}),
        make_brick(BrickKind::EndOfLoop),
    };
    ball.scripts.push_back(std::move(start));
    Script hit;
    hit.hat = HatKind::WhenPhysicalCollision;
    hit.bricks = {make_brick(BrickKind::Vibrate, {{"seconds", "0.02"}})};
    ball.scripts.push_back(std::move(hit));
    return p;
}

std::string tilt_maze_timeline() {
    return "# one minute of steering through the tilt maze, degrees\n"
           "inclination_x 0 10 linear\n"
           "inclination_x 2 10 linear\n"
           "inclination_x 4 -40 linear\n"
           "inclination_x 7 -60 linear\n"
           "inclination_x 9 20 linear\n"
           "inclination_x 13 60 linear\n"
           "inclination_x 17 -30 linear\n"
           "inclination_x 21 -70 linear\n"
           "inclination_x 25 0 linear\n"
           "inclination_x 29 45 linear\n"
           "inclination_x 33 90 linear\n"
           "inclination_x 37 -90 linear\n"
           "inclination_x 41 -20 linear\n"
           "inclination_x 46 50 linear\n"
           "inclination_x 52 -50 linear\n"
           "inclination_x 57 10 linear\n"
           "inclination_x 60 0 linear\n"
           "inclination_y 0 0 linear\n"
           "inclination_y 2 0 linear\n"
           "inclination_y 5 30 linear\n"
           "inclination_y 8 60 linear\n"
           "inclination_y 12 10 linear\n"
           "inclination_y 16 -40 linear\n"
           "inclination_y 20 45 linear\n"
           "inclination_y 24 90 linear\n"
           "inclination_y 28 -30 linear\n"
           "inclination_y 32 -90 linear\n"
           "inclination_y 36 20 linear\n"
           "inclination_y 40 70 linear\n"
           "inclination_y 45 -60 linear\n"
           "inclination_y 50 30 linear\n"
           "inclination_y 55 80 linear\n"
           "inclination_y 60 0 linear\n";
}

std::string flat_timeline() { return "inclination_x 0 0 step\ninclination_y 0 0 step\n"; }

}  // namespace brickvm::fixtures
