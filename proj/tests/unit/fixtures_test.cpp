#include <doctest.h>

#include <filesystem>

#include "brickvm/device/timeline.hpp"
#include "brickvm/model/archive.hpp"
#include "brickvm/model/statistics.hpp"
#include "fixtures.hpp"

using namespace brickvm;
namespace fs = std::filesystem;

namespace {
const fs::path kData = BRICKVM_FIXTURE_DIR;
}

TEST_CASE("committed fixture files match the generators") {
    for (const auto& bundle : fixtures::determinism_suite()) {
        CAPTURE(bundle.name);
        Bytes saved = read_file(kData / "projects" / (bundle.name + ".catrobat"));
        CHECK(saved == model::save_project(bundle.project));
        CHECK(model::load_project(saved) == bundle.project);
        fs::path timeline = kData / "timelines" / (bundle.name + ".timeline");
        if (bundle.timeline.empty()) {
            CHECK(!fs::exists(timeline));
        } else {
            CHECK(to_string(read_file(timeline)) == bundle.timeline);
            CHECK_NOTHROW(device::parse_timeline(bundle.timeline));
        }
    }
    for (const auto& scratch : fixtures::scratch_fixtures()) {
        CAPTURE(scratch.name);
        CHECK(read_file(kData / "scratch" / (scratch.name + ".sb3")) == scratch.sb3);
    }
    CHECK(to_string(read_file(kData / "timelines" / "flat.timeline")) == fixtures::flat_timeline());
}

TEST_CASE("tilt maze carries the gravity formulas") {
    model::Project p = model::load_project(read_file(kData / "projects" / "tilt_maze.catrobat"));
    const model::SpriteObject* ball = nullptr;
    for (const auto& o : p.scenes[0].objects)
        if (o.name == "Ball") ball = &o;
    REQUIRE(ball);
    const auto& gravity = ball->scripts[0].bricks[3];
    REQUIRE(gravity.kind == model::BrickKind::SetGravity);
    CHECK(model::brick_display(gravity) == "Set gravity for all objects to X: - 3 * X_INCLINATION Y: - 3 * Y_INCLINATION steps/second²");
}
