#include "fixtures.hpp"

namespace brickvm::fixtures {

using namespace brickvm::model;

Project edge_bouncer_project() {
    Project p = empty_project("Edge bouncer");
    p.scenes[0].objects[0].looks.push_back(add_look(p, "Background", filled_rect(8, 8, 240, 240, 240)));

    SpriteObject& obj = p.scenes[0].objects.emplace_back();
    obj.name = "My Object";
    obj.looks.push_back(add_look(p, "look 1", disc(16, 200, 30, 30)));
    obj.looks.push_back(add_look(p, "look 2", disc(16, 30, 30, 200)));
    Script s;
    s.hat = HatKind::WhenProgramStarted;
    s.bricks = {
        make_brick(BrickKind::Forever),
        make_brick(BrickKind::IfOnEdgeBounce),
        make_brick(BrickKind::PlaceAt, {{"x", "X_INCLINATION * -10"}, {"y", "Y_INCLINATION * -10"}}),
        make_brick(BrickKind::EndOfLoop),
    };
    obj.scripts.push_back(std::move(s));
    return p;
}

}  // namespace brickvm::fixtures
