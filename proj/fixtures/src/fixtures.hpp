#pragma once

// Projects, Scratch sources and timelines bundled with the repository.
// fixtures/data holds the same content as files; make_fixtures regenerates it.

#include <string>
#include <vector>

#include "brickvm/model/project.hpp"
#include "brickvm/support/png.hpp"

namespace brickvm::fixtures {

png::Image filled_rect(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b);
png::Image disc(int diameter, std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Adds the image to the project's assets and returns a matching look.
model::Look add_look(model::Project& project, const std::string& name, const png::Image& image);

/// Background plus "My Object" running the project-details code-view script.
model::Project edge_bouncer_project();

/// Static walls, a Dynamic ball steered by gravity = -3 × inclination, and a
/// short vibration whenever the ball touches anything.
model::Project tilt_maze_project();
/// A minute of varied tilt for the maze, in timeline file syntax.
std::string tilt_maze_timeline();
/// Inclination held at zero.
std::string flat_timeline();

model::Script script(model::HatKind hat, std::vector<model::Brick> bricks, std::string message = {});

/// A project and the sensor timeline it is meant to be run with.
struct Bundle {
    std::string name;
    model::Project project;
    std::string timeline;
};

/// Ten projects covering broadcasts, clones, pen, physics, scenes, lists,
/// sensors and looks; used by the determinism harness.
std::vector<Bundle> determinism_suite();

struct ScratchFixture {
    std::string name;
    Bytes sb3;
};

/// Scratch 3 archives: "minimal" (flag + go to 0,0), "motion" (a forever
/// loop of x/y/direction changes), "unsupported" (extension blocks, vector
/// costume, recursion) and "showcase" (broadcasts, clones, lists, custom
/// blocks, sounds).
std::vector<ScratchFixture> scratch_fixtures();

}  // namespace brickvm::fixtures
