#include "fixtures.hpp"

#include "brickvm/support/hash.hpp"

namespace brickvm::fixtures {

using namespace brickvm::model;
using K = BrickKind;

namespace {

Brick set_var(const std::string& name, const std::string& value) {
    return make_brick(K::SetVariable, {{"value", value}}, {{"variable", name}});
}
Brick change_var(const std::string& name, const std::string& value) {
    return make_brick(K::ChangeVariable, {{"value", value}}, {{"variable", name}});
}
Brick message(K kind, const std::string& text) { return make_brick(kind, {}, {{"message", text}}); }
Brick motion(std::string_view type) { return make_brick(K::SetMotionType, {}, {{"type", std::string(type)}}); }

SpriteObject& add_object(Project& p, const std::string& name, std::size_t scene = 0) {
    SpriteObject& o = p.scenes[scene].objects.emplace_back();
    o.name = name;
    return o;
}

SoundRef add_sound(Project& p, const std::string& name) {
    Bytes data(name.begin(), name.end());
    data.insert(data.begin(), {'R', 'I', 'F', 'F'});
    std::string file = "sounds/" + hex64(fnv1a64(data)) + ".wav";
    p.assets[file] = std::move(data);
    return SoundRef{name, file};
}

Project broadcast_relay() {
    Project p = empty_project("Broadcast relay");
    p.global_variables["laps"] = 0.0;
    p.global_variables["handoffs"] = 0.0;
    const char* runners[] = {"Red", "Green", "Blue"};
    const char* next[] = {"to green", "to blue", "to red"};
    for (int i = 0; i < 3; ++i) {
        SpriteObject& o = add_object(p, runners[i]);
        o.looks.push_back(add_look(p, "body", disc(40, i == 0 ? 220 : 40, i == 1 ? 220 : 40, i == 2 ? 220 : 40)));
        o.local_variables["carried"] = 0.0;
        o.scripts.push_back(script(HatKind::WhenProgramStarted, {make_brick(K::PlaceAt, {{"x", std::to_string(-300 + 300 * i)}, {"y", "0"}})}));
        o.scripts.push_back(script(HatKind::WhenBroadcastReceived,
                                   {change_var("carried", "1"), change_var("handoffs", "1"),
                                    make_brick(K::Say, {{"text", "join('lap ', \"laps\")"}}),
                                    make_brick(K::Repeat, {{"times", std::to_string(3 + i)}}), make_brick(K::ChangeYBy, {{"dy", "10"}}),
                                    make_brick(K::EndOfLoop), make_brick(K::Wait, {{"seconds", "0.05"}}),
                                    make_brick(K::SetY, {{"y", "0"}}), message(K::Broadcast, next[i])},
                                   i == 0 ? "to red" : i == 1 ? "to green" : "to blue"));
    }
    SpriteObject& coach = add_object(p, "Coach");
    coach.scripts.push_back(script(HatKind::WhenProgramStarted,
                                   {make_brick(K::Repeat, {{"times", "4"}}), change_var("laps", "1"), message(K::BroadcastAndWait, "to red"),
                                    make_brick(K::Wait, {{"seconds", "0.5"}}), make_brick(K::EndOfLoop), make_brick(K::StopAllScripts)}));
    return p;
}

Project clone_swarm() {
    Project p = empty_project("Clone swarm");
    p.header.stage_width = 480;
    p.header.stage_height = 360;
    p.global_variables["alive"] = 0.0;
    SpriteObject& bee = add_object(p, "Bee");
    bee.looks.push_back(add_look(p, "wings up", filled_rect(12, 8, 250, 200, 0)));
    bee.looks.push_back(add_look(p, "wings down", filled_rect(12, 6, 250, 180, 0)));
    bee.local_variables["ttl"] = 0.0;
    bee.scripts.push_back(script(HatKind::WhenProgramStarted,
                                 {make_brick(K::Hide), make_brick(K::Repeat, {{"times", "25"}}),
                                  make_brick(K::CreateClone, {}, {{"object", "Bee"}}), make_brick(K::Wait, {{"seconds", "0.1"}}),
                                  make_brick(K::EndOfLoop)}));
    bee.scripts.push_back(script(
        HatKind::WhenCloned,
        {change_var("alive", "1"), make_brick(K::Show), make_brick(K::PointInDirection, {{"degrees", "random(-180, 180)"}}),
         set_var("ttl", "round(random(60, 180))"), make_brick(K::RepeatUntil, {{"condition", "\"ttl\" <= 0"}}),
         make_brick(K::MoveSteps, {{"steps", "4"}}), make_brick(K::IfOnEdgeBounce), make_brick(K::NextLook), change_var("ttl", "-1"),
         make_brick(K::EndOfLoop), change_var("alive", "-1"), make_brick(K::DeleteClone)}));
    return p;
}

Project pen_spiral() {
    Project p = empty_project("Pen spiral");
    p.global_variables["step"] = 0.0;
    SpriteObject& turtle = add_object(p, "Turtle");
    turtle.looks.push_back(add_look(p, "shell", disc(10, 20, 120, 20)));
    turtle.scripts.push_back(script(
        HatKind::WhenProgramStarted,
        {make_brick(K::PlaceAt, {{"x", "0"}, {"y", "0"}}), make_brick(K::PenDown), make_brick(K::Forever), change_var("step", "1"),
         make_brick(K::SetPenSize, {{"size", "1 + mod(\"step\", 8)"}}),
         make_brick(K::SetPenColor, {{"red", "mod(\"step\" * 3, 256)"}, {"green", "128"}, {"blue", "255 - mod(\"step\", 256)"}}),
         make_brick(K::MoveSteps, {{"steps", "\"step\" / 4"}}), make_brick(K::TurnRight, {{"degrees", "91"}}),
         make_brick(K::IfThen, {{"condition", "mod(\"step\", 50) = 0"}}), make_brick(K::Stamp), make_brick(K::EndIf),
         make_brick(K::IfThen, {{"condition", "\"step\" = 200"}}), make_brick(K::ClearPen), set_var("step", "0"),
         make_brick(K::PlaceAt, {{"x", "0"}, {"y", "0"}}), make_brick(K::EndIf), make_brick(K::EndOfLoop)}));
    return p;
}

Project ball_pit() {
    Project p = empty_project("Ball pit");
    p.global_variables["hits"] = 0.0;
    struct Wall {
        const char* name;
        int x, y, w, h;
    };
    for (Wall w : {Wall{"Floor", 0, -400, 800, 40}, Wall{"Left", -420, 0, 40, 840}, Wall{"Right", 420, 0, 40, 840},
                   Wall{"Ramp", -150, -150, 300, 30}}) {
        SpriteObject& o = add_object(p, w.name);
        o.looks.push_back(add_look(p, "slab", filled_rect(w.w, w.h, 90, 90, 90)));
        std::vector<Brick> bricks = {make_brick(K::PlaceAt, {{"x", std::to_string(w.x)}, {"y", std::to_string(w.y)}})};
        if (std::string(w.name) == "Ramp") bricks.push_back(make_brick(K::PointInDirection, {{"degrees", "75"}}));
        bricks.push_back(motion(kMotionStatic));
        o.scripts.push_back(script(HatKind::WhenProgramStarted, std::move(bricks)));
    }
    for (int i = 0; i < 6; ++i) {
        SpriteObject& ball = add_object(p, "Ball " + std::to_string(i + 1));
        ball.looks.push_back(add_look(p, "ball", disc(30 + 6 * i, static_cast<std::uint8_t>(40 * i), 90, 200)));
        ball.scripts.push_back(script(
            HatKind::WhenProgramStarted,
            {make_brick(K::PlaceAt, {{"x", "random(-350, 350)"}, {"y", std::to_string(100 + 50 * i)}}), motion(kMotionDynamic),
             make_brick(K::SetMass, {{"mass", std::to_string(1 + i)}}),
             make_brick(K::SetBounceFactor, {{"factor", "0." + std::to_string(3 + i)}}),
             make_brick(K::SetFriction, {{"friction", "0." + std::to_string(i)}}),
             make_brick(K::SetVelocity, {{"x", "random(-100, 100)"}, {"y", "0"}})}));
        ball.scripts.push_back(script(HatKind::WhenPhysicalCollision, {change_var("hits", "1")}));
    }
    SpriteObject& tilt = add_object(p, "Tilt");
    tilt.scripts.push_back(script(HatKind::WhenProgramStarted,
                                  {make_brick(K::Forever),
                                   make_brick(K::SetGravity, {{"x", "-3 × inclination_x"}, {"y", "-100 - 3 × inclination_y"}}),
                                   make_brick(K::EndOfLoop)}));
    return p;
}

Project scene_hopper() {
    Project p = empty_project("Scene hopper");
    p.scenes[0].name = "Meadow";
    p.global_variables["visits"] = 0.0;
    Scene& cave = p.scenes.emplace_back();
    cave.name = "Cave";
    cave.objects.emplace_back().name = "Background";

    SpriteObject& hare = add_object(p, "Hare");
    hare.looks.push_back(add_look(p, "hare", filled_rect(20, 30, 200, 180, 150)));
    hare.scripts.push_back(script(HatKind::WhenProgramStarted,
                                  {make_brick(K::Forever), make_brick(K::ChangeXBy, {{"dx", "5"}}),
                                   make_brick(K::IfThen, {{"condition", "position_x > 200"}}), make_brick(K::SetX, {{"x", "-200"}}),
                                   change_var("visits", "1"), make_brick(K::SwitchScene, {}, {{"scene", "Cave"}}), make_brick(K::EndIf),
                                   make_brick(K::EndOfLoop)}));

    SpriteObject& bat = add_object(p, "Bat", 1);
    bat.looks.push_back(add_look(p, "bat", filled_rect(30, 10, 40, 40, 40)));
    bat.scripts.push_back(script(HatKind::WhenProgramStarted,
                                 {make_brick(K::Forever), make_brick(K::GlideTo, {{"seconds", "0.4"}, {"x", "100"}, {"y", "100"}}),
                                  make_brick(K::GlideTo, {{"seconds", "0.3"}, {"x", "-100"}, {"y", "0"}}),
                                  make_brick(K::SwitchScene, {}, {{"scene", "Meadow"}}), make_brick(K::EndOfLoop)}));
    return p;
}

Project list_sorter() {
    Project p = empty_project("List sorter");
    p.global_lists["numbers"] = {};
    for (const char* v : {"i", "j", "swaps", "tmp", "rounds"}) p.global_variables[v] = 0.0;
    SpriteObject& sorter = add_object(p, "Sorter");
    sorter.scripts.push_back(script(
        HatKind::WhenProgramStarted,
        {make_brick(K::ShowVariable, {}, {{"variable", "swaps"}}), make_brick(K::Forever), make_brick(K::ClearList, {}, {{"list", "numbers"}}),
         make_brick(K::Repeat, {{"times", "12"}}), make_brick(K::AddToList, {{"item", "round(random(0, 99))"}}, {{"list", "numbers"}}),
         make_brick(K::EndOfLoop), set_var("swaps", "1"), make_brick(K::RepeatUntil, {{"condition", "\"swaps\" = 0"}}),
         set_var("swaps", "0"), set_var("i", "1"), make_brick(K::RepeatUntil, {{"condition", "\"i\" >= number_of_items(*numbers*)"}}),
         make_brick(K::IfThen, {{"condition", "element(\"i\", *numbers*) > element(\"i\" + 1, *numbers*)"}}),
         set_var("tmp", "element(\"i\", *numbers*)"),
         make_brick(K::ReplaceInList, {{"index", "\"i\""}, {"item", "element(\"i\" + 1, *numbers*)"}}, {{"list", "numbers"}}),
         make_brick(K::ReplaceInList, {{"index", "\"i\" + 1"}, {"item", "\"tmp\""}}, {{"list", "numbers"}}), change_var("swaps", "1"),
         make_brick(K::EndIf), change_var("i", "1"), make_brick(K::EndOfLoop), make_brick(K::EndOfLoop),
         make_brick(K::InsertIntoList, {{"item", "-1"}, {"index", "1"}}, {{"list", "numbers"}}),
         make_brick(K::DeleteFromList, {{"index", "1"}}, {{"list", "numbers"}}), change_var("rounds", "1"),
         make_brick(K::Say, {{"text", "join('smallest ', element(1, *numbers*))"}}), make_brick(K::EndOfLoop)}));
    return p;
}

Project sensor_dashboard() {
    Project p = empty_project("Sensor dashboard");
    for (const char* v : {"heading", "noise", "where", "face"}) p.global_variables[v] = 0.0;
    SpriteObject& needle = add_object(p, "Needle");
    needle.looks.push_back(add_look(p, "needle", filled_rect(6, 80, 200, 0, 0)));
    needle.scripts.push_back(script(
        HatKind::WhenProgramStarted,
        {make_brick(K::ShowVariable, {}, {{"variable", "heading"}}), make_brick(K::ShowVariable, {}, {{"variable", "where"}}),
         make_brick(K::Forever), set_var("heading", "compass_direction"), make_brick(K::PointInDirection, {{"degrees", "compass_direction"}}),
         set_var("noise", "loudness"), make_brick(K::SetSize, {{"size", "50 + loudness"}}),
         set_var("where", "join(round(latitude * 1000) / 1000, join(', ', round(longitude * 1000) / 1000))"),
         make_brick(K::PlaceAt, {{"x", "acceleration_x * 10"}, {"y", "acceleration_y * 10 + altitude / 100"}}),
         make_brick(K::IfThen, {{"condition", "face_detected = 1"}}), set_var("face", "face_size"),
         make_brick(K::SetBrightness, {{"value", "100 + face_position_x"}}),
         make_brick(K::SetTransparency, {{"value", "abs(face_position_y)"}}), make_brick(K::Think, {{"text", "'I see you'"}}),
         make_brick(K::Else), make_brick(K::Think, {{"text", "''"}}), make_brick(K::EndIf), make_brick(K::EndOfLoop)}));
    return p;
}

Project look_parade() {
    Project p = empty_project("Look parade");
    p.global_variables["beats"] = 0.0;
    for (int i = 0; i < 3; ++i) {
        SpriteObject& o = add_object(p, "Dancer " + std::to_string(i + 1));
        for (int k = 0; k < 3; ++k)
            o.looks.push_back(add_look(p, "pose " + std::to_string(k + 1),
                                       filled_rect(20 + 10 * k, 40 - 5 * k, static_cast<std::uint8_t>(80 * i), static_cast<std::uint8_t>(80 * k), 150)));
        o.sounds.push_back(add_sound(p, "clap " + std::to_string(i + 1)));
        o.scripts.push_back(script(
            HatKind::WhenProgramStarted,
            {make_brick(K::PlaceAt, {{"x", std::to_string(-20 + 20 * i)}, {"y", "0"}}), make_brick(K::SetVolume, {{"volume", "50"}}),
             make_brick(K::Forever), make_brick(K::NextLook), make_brick(K::ChangeSizeBy, {{"delta", "sin(\"beats\" * 10) * 5"}}),
             make_brick(K::ChangeTransparencyBy, {{"delta", std::to_string(i + 1)}}),
             make_brick(K::IfThen, {{"condition", "transparency >= 60"}}), make_brick(K::SetTransparency, {{"value", "0"}}),
             make_brick(K::PreviousLook), make_brick(K::EndIf), make_brick(K::ChangeBrightnessBy, {{"delta", "-1"}}),
             make_brick(K::ChangeVolumeBy, {{"delta", "1"}}), make_brick(K::Wait, {{"seconds", "0." + std::to_string(i + 1)}}),
             make_brick(K::EndOfLoop)}));
        o.scripts.push_back(script(HatKind::WhenBroadcastReceived,
                                   {make_brick(K::StartSound, {}, {{"sound", "clap " + std::to_string(i + 1)}}),
                                    make_brick(i == 1 ? K::ComeToFront : K::GoBackLayers, i == 1 ? std::initializer_list<std::pair<std::string, std::string>>{}
                                                                                              : std::initializer_list<std::pair<std::string, std::string>>{{"layers", "1"}})},
                                   "beat"));
    }
    SpriteObject& drummer = add_object(p, "Drummer");
    drummer.scripts.push_back(script(HatKind::WhenProgramStarted,
                                     {make_brick(K::Forever), make_brick(K::Wait, {{"seconds", "0.25"}}), change_var("beats", "1"),
                                      message(K::Broadcast, "beat"), make_brick(K::IfThen, {{"condition", "mod(\"beats\", 8) = 0"}}),
                                      make_brick(K::StopAllSounds), make_brick(K::EndIf), make_brick(K::EndOfLoop)}));
    return p;
}

}  // namespace

Script script(HatKind hat, std::vector<Brick> bricks, std::string message) {
    Script s;
    s.hat = hat;
    s.message = std::move(message);
    s.bricks = std::move(bricks);
    return s;
}

std::vector<Bundle> determinism_suite() {
    std::vector<Bundle> out;
    out.push_back({"edge_bouncer", edge_bouncer_project(),
                   "inclination_x 0 0 linear\ninclination_x 2 30 linear\ninclination_x 4 -30 linear\n"
                   "inclination_y 0 10 step\ninclination_y 3 -20 step\n"});
    out.push_back({"tilt_maze", tilt_maze_project(), tilt_maze_timeline()});
    out.push_back({"broadcast_relay", broadcast_relay(), ""});
    out.push_back({"clone_swarm", clone_swarm(), ""});
    out.push_back({"pen_spiral", pen_spiral(), ""});
    out.push_back({"ball_pit", ball_pit(),
                   "inclination_x 0 0 linear\ninclination_x 1 40 linear\ninclination_x 3 -40 linear\ninclination_x 5 0 linear\n"
                   "inclination_y 0 0 linear\ninclination_y 2 -30 linear\ninclination_y 5 20 linear\n"});
    out.push_back({"scene_hopper", scene_hopper(), ""});
    out.push_back({"list_sorter", list_sorter(), ""});
    out.push_back({"sensor_dashboard", sensor_dashboard(),
                   "compass_direction 0 0 linear\ncompass_direction 5 360 linear\n"
                   "loudness 0 10 step\nloudness 1 80 step\nloudness 2 35 step\nloudness 4 0 step\n"
                   "latitude 0 47.0585 linear\nlatitude 5 47.0707 linear\nlongitude 0 15.4601 linear\nlongitude 5 15.4395 linear\n"
                   "altitude 0 350 linear\naltitude 5 420 linear\n"
                   "acceleration_x 0 -2 linear\nacceleration_x 2.5 2 linear\nacceleration_x 5 -2 linear\n"
                   "acceleration_y 0 1 step\nacceleration_y 3 -1 step\n"
                   "face_detected 0 0 step\nface_detected 1.5 1 step\nface_detected 3.5 0 step\n"
                   "face_size 1.5 30 linear\nface_size 3.5 60 linear\n"
                   "face_position_x 1.5 -40 linear\nface_position_x 3.5 40 linear\n"
                   "face_position_y 1.5 -20 linear\nface_position_y 3.5 25 linear\n"});
    out.push_back({"look_parade", look_parade(), ""});
    return out;
}

}  // namespace brickvm::fixtures
