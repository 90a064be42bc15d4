#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "brickvm/interp/runtime.hpp"
#include "brickvm/model/archive.hpp"
#include "brickvm/support/zip.hpp"
#include "brickvm/tools/merge.hpp"
#include "brickvm/tools/scratch.hpp"
#include "fixtures.hpp"
#include "project_gen.hpp"

using namespace brickvm;
using namespace brickvm::model;
using namespace brickvm::tools;

namespace {

std::set<std::string> set_union(const std::set<std::string>& a, const std::set<std::string>& b) {
    std::set<std::string> out = a;
    out.insert(b.begin(), b.end());
    return out;
}

std::vector<std::string> object_names(const Scene& scene) {
    std::vector<std::string> out;
    for (const auto& o : scene.objects) out.push_back(o.name);
    return out;
}

SpriteObject& add(Project& p, const std::string& name, const png::Image& image) {
    SpriteObject& o = p.scenes[0].objects.emplace_back();
    o.name = name;
    o.looks.push_back(fixtures::add_look(p, "look", image));
    return o;
}

Project project_with(std::initializer_list<std::pair<std::string, int>> objects) {
    Project p = empty_project("merge");
    p.scenes[0].objects[0].looks.push_back(fixtures::add_look(p, "sky", fixtures::filled_rect(4, 4, 0, 0, 255)));
    for (const auto& [name, shade] : objects) add(p, name, fixtures::disc(6, static_cast<std::uint8_t>(shade), 0, 0));
    return p;
}

Conversion convert(const std::string& name) {
    for (const auto& f : fixtures::scratch_fixtures())
        if (f.name == name) return convert_scratch(f.sb3, name);
    FAIL("no scratch fixture " << name);
    return {};
}

}  // namespace

TEST_CASE("fingerprints ignore archive file naming but not content") {
    Project p = project_with({{"ball", 10}});
    Project renamed = p;
    std::string old_file = renamed.scenes[0].objects[1].looks[0].file;
    renamed.assets["images/elsewhere.png"] = renamed.assets.at(old_file);
    renamed.assets.erase(old_file);
    renamed.scenes[0].objects[1].looks[0].file = "images/elsewhere.png";
    CHECK(object_fingerprint(p.scenes[0].objects[1], p) == object_fingerprint(renamed.scenes[0].objects[1], renamed));

    Project other = project_with({{"ball", 11}});
    CHECK(object_fingerprint(p.scenes[0].objects[1], p) != object_fingerprint(other.scenes[0].objects[1], other));
}

TEST_CASE("merging shared backgrounds keeps one copy") {
    Project a = project_with({{"ball", 10}});
    Project b = project_with({{"paddle", 20}});
    MergeResult m = merge(a, b);
    CHECK(object_names(m.project.scenes[0]) == std::vector<std::string>{"Background", "ball", "paddle"});
    CHECK(m.shared_objects == 1);
    CHECK(m.renames.empty());
    validate(m.project);
}

TEST_CASE("merge with an empty project is the identity") {
    testing::ProjectGenerator gen(5);
    for (int i = 0; i < 20; ++i) {
        Project a = gen.project();
        Project e = empty_project("nothing");
        e.header.stage_width = a.header.stage_width;
        e.header.stage_height = a.header.stage_height;
        CHECK(merge(a, e).project == a);
        CHECK(fingerprint_set(merge(e, a).project) == fingerprint_set(a));
    }
}

TEST_CASE("merge is idempotent") {
    testing::ProjectGenerator gen(6);
    for (int i = 0; i < 20; ++i) {
        Project a = gen.project();
        MergeResult m = merge(a, a);
        CHECK(m.project == a);
        CHECK(m.renames.empty());
    }
}

TEST_CASE("name collisions between different objects suffix the second") {
    Project a = project_with({{"ball", 10}});
    Project b = project_with({{"ball", 99}});
    b.scenes[0].objects[1].scripts.push_back(fixtures::script(HatKind::WhenTapped, {make_brick(BrickKind::CreateClone, {}, {{"object", "ball"}})}));
    MergeResult m = merge(a, b);
    CHECK(object_names(m.project.scenes[0]) == std::vector<std::string>{"Background", "ball", "ball (2)"});
    REQUIRE(m.renames.size() == 1);
    CHECK(m.renames[0].to == "ball (2)");
    CHECK(m.project.scenes[0].objects[2].scripts[0].bricks[0].param("object") == "ball (2)");
    CHECK(format_merge_report(m).find("renamed Scene 1/ball -> ball (2)") != std::string::npos);

    // A third, again different ball goes to (3).
    Project c = project_with({{"ball", 77}});
    MergeResult m2 = merge(m.project, c);
    CHECK(m2.project.scenes[0].objects.back().name == "ball (3)");
}

TEST_CASE("asset path clashes with different content get a fresh path") {
    Project a = project_with({{"ball", 10}});
    Project b = project_with({{"paddle", 20}});
    std::string a_file = a.scenes[0].objects[1].looks[0].file;
    std::string b_file = b.scenes[0].objects[1].looks[0].file;
    b.assets[a_file] = b.assets.at(b_file);
    b.assets.erase(b_file);
    b.scenes[0].objects[1].looks[0].file = a_file;
    MergeResult m = merge(a, b);
    validate(m.project);
    const auto& paddle = m.project.scenes[0].objects[2];
    CHECK(paddle.looks[0].file != a_file);
    CHECK(m.project.assets.at(paddle.looks[0].file) == b.assets.at(a_file));
    CHECK(m.project.assets.at(a_file) == a.assets.at(a_file));
}

TEST_CASE("stage mismatch is a merge conflict") {
    Project a = empty_project();
    Project b = empty_project();
    b.header.stage_width = 480;
    CHECK_THROWS_AS(merge(a, b), MergeConflict);
}

TEST_CASE("merge laws hold on random project pairs") {
    testing::ProjectGenerator gen(2024);
    for (int i = 0; i < 100; ++i) {
        auto [a, b] = gen.merge_pair();
        CAPTURE(i);
        MergeResult ab = merge(a, b);
        MergeResult ba = merge(b, a);
        auto expected = set_union(fingerprint_set(a), fingerprint_set(b));
        CHECK(fingerprint_set(undo_renames(ab.project, ab.renames)) == expected);
        CHECK(fingerprint_set(undo_renames(ba.project, ba.renames)) == expected);
        CHECK_NOTHROW(validate(ab.project));
        CHECK_NOTHROW(validate(ba.project));
        CHECK(load_project(save_project(ab.project)) == ab.project);
        // a's objects come first, in a's order.
        for (std::size_t s = 0; s < a.scenes.size(); ++s) {
            const auto& merged = ab.project.scenes[s].objects;
            REQUIRE(merged.size() >= a.scenes[s].objects.size());
            for (std::size_t k = 1; k < a.scenes[s].objects.size(); ++k) CHECK(merged[k] == a.scenes[s].objects[k]);
        }
    }
}

TEST_CASE("minimal Scratch project maps flag and go-to") {
    Conversion c = convert("minimal");
    CHECK(c.report.total == 2);
    CHECK(c.report.mapped == 2);
    CHECK(c.report.unsupported.empty());
    const auto& sprite = c.project.scenes[0].objects.at(1);
    CHECK(sprite.name == "Sprite1");
    REQUIRE(sprite.scripts.size() == 1);
    CHECK(sprite.scripts[0].hat == HatKind::WhenProgramStarted);
    REQUIRE(sprite.scripts[0].bricks.size() == 1);
    CHECK(sprite.scripts[0].bricks[0] == make_brick(BrickKind::PlaceAt, {{"x", "0"}, {"y", "0"}}));
    CHECK(c.project.header.stage_width == 480);
    CHECK(c.project.header.stage_height == 360);
}

TEST_CASE("unsupported Scratch blocks become notes and report entries") {
    Conversion c = convert("unsupported");
    CHECK(c.report.mapped + static_cast<int>(c.report.unsupported.size()) == c.report.total);
    auto has = [&](const std::string& opcode) {
        return std::any_of(c.report.unsupported.begin(), c.report.unsupported.end(), [&](const UnsupportedBlock& u) { return u.opcode == opcode; });
    };
    CHECK(has("pen_penDown"));
    CHECK(has("music_playDrumForBeats"));
    CHECK(has("sensing_timer"));
    CHECK(has("event_whenkeypressed"));
    CHECK(has("procedures_call"));
    const auto& bricks = c.project.scenes[0].objects.at(1).scripts.at(0).bricks;
    CHECK(bricks[0].kind == BrickKind::Note);
    CHECK(bricks[0].param("text") == "unsupported Scratch block pen_penDown");
    CHECK(std::any_of(c.report.warnings.begin(), c.report.warnings.end(),
                      [](const std::string& w) { return w.find("vector costume") != std::string::npos; }));
    // The vector costume becomes a box of its declared size.
    CHECK(c.project.scenes[0].objects.at(1).looks.at(0).width == 30);
    CHECK(c.project.scenes[0].objects.at(1).looks.at(0).height == 20);
}

TEST_CASE("recursive custom blocks inline once and report the inner call") {
    Conversion c = convert("unsupported");
    const auto& tapped = c.project.scenes[0].objects.at(1).scripts.at(1);
    CHECK(tapped.hat == HatKind::WhenTapped);
    REQUIRE(tapped.bricks.size() == 2);
    CHECK(tapped.bricks[0] == make_brick(BrickKind::Say, {{"text", "3"}}));
    CHECK(tapped.bricks[1].kind == BrickKind::Note);
}

TEST_CASE("every bundled Scratch fixture converts with complete accounting and loads") {
    for (const auto& f : fixtures::scratch_fixtures()) {
        CAPTURE(f.name);
        Conversion c = convert_scratch(f.sb3, f.name);
        CHECK(c.report.mapped + static_cast<int>(c.report.unsupported.size()) == c.report.total);
        CHECK_NOTHROW(validate(c.project));
        CHECK(load_project(save_project(c.project)) == c.project);
        std::string text = format_conversion_report(c.report);
        CHECK(text.find("total=" + std::to_string(c.report.total) + "\n") != std::string::npos);
        CHECK(text.find("mapped=" + std::to_string(c.report.mapped) + "\n") != std::string::npos);
    }
}

TEST_CASE("showcase conversion keeps sprite state, custom blocks and data") {
    Conversion c = convert("showcase");
    CHECK(c.report.unsupported.empty());
    CHECK(c.project.global_variables.count("score"));
    CHECK(c.project.global_variables.count("answer"));
    CHECK(c.project.global_lists.count("log"));
    const auto& ball = c.project.scenes[0].objects.at(1);
    CHECK(ball.sounds.size() == 1);
    CHECK(ball.scripts.at(0).bricks.at(0) == make_brick(BrickKind::PlaceAt, {{"x", "40"}, {"y", "-30"}}));
    // The custom block body is inlined with its arguments substituted.
    const auto& started = ball.scripts.back();
    auto glide = std::find_if(started.bricks.begin(), started.bricks.end(), [](const Brick& b) { return b.kind == BrickKind::GlideTo; });
    REQUIRE(glide != started.bricks.end());
    CHECK(*glide == make_brick(BrickKind::GlideTo, {{"seconds", "0.25"}, {"x", "-100"}, {"y", "50"}}));

    interp::Runtime rt(c.project, {});
    for (int f = 0; f < 120; ++f) rt.step_frame({});
    CHECK(rt.variable("score")->as_number() >= 3);
}

TEST_CASE("converted motion fixture advances by the mapped per-frame deltas") {
    Conversion c = convert("motion");
    interp::Runtime rt(c.project, {});
    for (int n = 0; n < 100; ++n) {
        rt.step_frame({});
        const auto* cat = rt.instances_of("Cat").at(0);
        CHECK(cat->x == doctest::Approx(-200 + 3.0 * (n + 1)).epsilon(1e-12));
        CHECK(cat->y == doctest::Approx(100 - 2.0 * (n + 1)).epsilon(1e-12));
        CHECK(cat->direction == doctest::Approx(interp::normalize_direction(90 + 5.0 * (n + 1))));
    }
}

TEST_CASE("malformed Scratch sources are rejected") {
    CHECK_THROWS_AS(convert_scratch(to_bytes("not a zip"), "x"), MalformedSource);
    CHECK_THROWS_AS(convert_scratch(zip::write({{"other.json", to_bytes("{}")}}), "x"), MalformedSource);
    CHECK_THROWS_AS(convert_scratch(zip::write({{"project.json", to_bytes("{\"targets\": 3")}}), "x"), MalformedSource);
    CHECK_THROWS_AS(convert_scratch(zip::write({{"project.json", to_bytes("{\"targets\": []}")}}), "x"), MalformedSource);
}

TEST_CASE("mapping table lists each opcode once") {
    std::set<std::string_view> seen;
    for (const auto& m : scratch_mapping()) CHECK(seen.insert(m.opcode).second);
    CHECK(seen.count("motion_gotoxy"));
    CHECK(!seen.count("pen_penDown"));
}
