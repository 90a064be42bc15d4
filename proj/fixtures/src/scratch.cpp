#include "fixtures.hpp"

#include <nlohmann/json.hpp>

#include "brickvm/support/hash.hpp"
#include "brickvm/support/text.hpp"
#include "brickvm/support/zip.hpp"

namespace brickvm::fixtures {

using json = nlohmann::ordered_json;

namespace {

json num(double v) { return json::array({1, json::array({4, text::format_number(v)})}); }
json str(const std::string& s) { return json::array({1, json::array({10, s})}); }

/// Builds one target's block map with sequential ids.
class Blocks {
public:
    explicit Blocks(std::string prefix) : prefix_(std::move(prefix)) {}

    std::string add(const std::string& opcode, json inputs = json::object(), json fields = json::object(), bool shadow = false) {
        std::string id = prefix_ + std::to_string(++count_);
        blocks_[id] = {{"opcode", opcode}, {"next", nullptr}, {"parent", nullptr}, {"inputs", std::move(inputs)},
                       {"fields", std::move(fields)}, {"shadow", shadow}, {"topLevel", false}};
        return id;
    }

    /// Chains statements, marking the first as a top-level stack when `top`.
    std::string chain(const std::vector<std::string>& ids, bool top = false) {
        for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
            blocks_[ids[i]]["next"] = ids[i + 1];
            blocks_[ids[i + 1]]["parent"] = ids[i];
        }
        if (top && !ids.empty()) {
            blocks_[ids[0]]["topLevel"] = true;
            blocks_[ids[0]]["x"] = 0;
            blocks_[ids[0]]["y"] = 120 * stacks_++;
        }
        return ids.empty() ? std::string() : ids[0];
    }

    json sub(const std::vector<std::string>& ids) { return json::array({2, chain(ids)}); }
    json reporter(const std::string& id, json shadow = json::array({4, "0"})) { return json::array({3, id, shadow}); }
    json menu(const std::string& opcode, const std::string& field, const std::string& value) {
        return json::array({1, add(opcode, json::object(), {{field, json::array({value, nullptr})}}, true)});
    }
    json& operator[](const std::string& id) { return blocks_[id]; }
    const json& all() const { return blocks_; }

private:
    std::string prefix_;
    int count_ = 0;
    int stacks_ = 0;
    json blocks_ = json::object();
};

struct Sb3 {
    json targets = json::array();
    zip::Entries files;

    json costume(const std::string& name, const png::Image& image) {
        Bytes data = png::encode(image);
        std::string id = hex64(fnv1a64(data));
        files[id + ".png"] = data;
        return {{"name", name}, {"assetId", id}, {"md5ext", id + ".png"}, {"dataFormat", "png"}, {"bitmapResolution", 1},
                {"rotationCenterX", image.width / 2}, {"rotationCenterY", image.height / 2}};
    }
    json vector_costume(const std::string& name, int w, int h) {
        std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) +
                          "\"><rect width=\"" + std::to_string(w) + "\" height=\"" + std::to_string(h) + "\" fill=\"#f80\"/></svg>";
        std::string id = hex64(fnv1a64(to_bytes(svg)));
        files[id + ".svg"] = to_bytes(svg);
        return {{"name", name}, {"assetId", id}, {"md5ext", id + ".svg"}, {"dataFormat", "svg"}, {"rotationCenterX", w / 2},
                {"rotationCenterY", h / 2}};
    }
    json sound(const std::string& name) {
        Bytes data = to_bytes("RIFF" + name + "WAVE");
        std::string id = hex64(fnv1a64(data));
        files[id + ".wav"] = data;
        return {{"name", name}, {"assetId", id}, {"md5ext", id + ".wav"}, {"dataFormat", "wav"}, {"rate", 22050}, {"sampleCount", 1}};
    }

    void stage(const Blocks& blocks, json variables = json::object(), json lists = json::object(), json broadcasts = json::object()) {
        targets.push_back({{"isStage", true}, {"name", "Stage"}, {"variables", std::move(variables)}, {"lists", std::move(lists)},
                           {"broadcasts", std::move(broadcasts)}, {"blocks", blocks.all()}, {"comments", json::object()},
                           {"currentCostume", 0}, {"costumes", json::array({costume("backdrop1", filled_rect(48, 36, 255, 255, 255))})},
                           {"sounds", json::array()}, {"volume", 100}, {"layerOrder", 0}});
    }

    json& sprite(const std::string& name, const Blocks& blocks, json costumes, int layer) {
        targets.push_back({{"isStage", false}, {"name", name}, {"variables", json::object()}, {"lists", json::object()},
                           {"broadcasts", json::object()}, {"blocks", blocks.all()}, {"comments", json::object()},
                           {"currentCostume", 0}, {"costumes", std::move(costumes)}, {"sounds", json::array()}, {"volume", 100},
                           {"layerOrder", layer}, {"visible", true}, {"x", 0}, {"y", 0}, {"size", 100}, {"direction", 90},
                           {"draggable", false}, {"rotationStyle", "all around"}});
        return targets.back();
    }

    Bytes archive() {
        json manifest = {{"targets", targets}, {"monitors", json::array()}, {"extensions", json::array()},
                         {"meta", {{"semver", "3.0.0"}, {"vm", "0.2.0"}, {"agent", "fixture"}}}};
        files["project.json"] = to_bytes(manifest.dump());
        return zip::write(files);
    }
};

Bytes minimal() {
    Sb3 sb;
    Blocks stage("s");
    sb.stage(stage);
    Blocks b("a");
    b.chain({b.add("event_whenflagclicked"), b.add("motion_gotoxy", {{"X", num(0)}, {"Y", num(0)}})}, true);
    sb.sprite("Sprite1", b, json::array({sb.costume("costume1", disc(20, 255, 140, 0))}), 1);
    return sb.archive();
}

Bytes motion() {
    Sb3 sb;
    Blocks stage("s");
    sb.stage(stage);
    Blocks b("m");
    std::string forever = b.add("control_forever");
    b[forever]["inputs"]["SUBSTACK"] = b.sub({b.add("motion_changexby", {{"DX", num(3)}}), b.add("motion_changeyby", {{"DY", num(-2)}}),
                                              b.add("motion_turnright", {{"DEGREES", num(5)}})});
    b.chain({b.add("event_whenflagclicked"), b.add("motion_gotoxy", {{"X", num(-200)}, {"Y", num(100)}}), forever}, true);
    sb.sprite("Cat", b, json::array({sb.costume("cat", filled_rect(24, 16, 255, 170, 0))}), 1);
    return sb.archive();
}

Bytes unsupported() {
    Sb3 sb;
    Blocks stage("s");
    sb.stage(stage);
    Blocks b("u");
    std::string timer = b.add("sensing_timer");
    std::string say = b.add("looks_say", {{"MESSAGE", b.reporter(timer, json::array({10, "?"}))}});
    std::string color = b.add("looks_seteffectto", {{"VALUE", num(50)}}, {{"EFFECT", json::array({"COLOR", nullptr})}});
    b.chain({b.add("event_whenflagclicked"), b.add("pen_penDown"), b.add("motion_movesteps", {{"STEPS", num(10)}}), say, color,
             b.add("music_playDrumForBeats", {{"DRUM", num(1)}, {"BEATS", num(0.25)}})},
            true);
    b.chain({b.add("event_whenkeypressed", json::object(), {{"KEY_OPTION", json::array({"space", nullptr})}}), b.add("looks_hide")}, true);

    // A custom block that calls itself: the outer call inlines, the inner one cannot.
    std::string proto = b.add("procedures_prototype", {{"arg0", json::array({1, nullptr})}}, json::object(), true);
    b[proto]["mutation"] = {{"tagName", "mutation"}, {"children", json::array()}, {"proccode", "countdown %s"},
                            {"argumentids", "[\"arg0\"]"}, {"argumentnames", "[\"n\"]"}, {"argumentdefaults", "[\"\"]"}, {"warp", "false"}};
    std::string def = b.add("procedures_definition", {{"custom_block", json::array({1, proto})}});
    std::string arg = b.add("argument_reporter_string_number", json::object(), {{"VALUE", json::array({"n", nullptr})}});
    std::string minus = b.add("operator_subtract", {{"NUM1", b.reporter(arg)}, {"NUM2", num(1)}});
    std::string inner = b.add("procedures_call", {{"arg0", b.reporter(minus)}});
    b[inner]["mutation"] = {{"tagName", "mutation"}, {"children", json::array()}, {"proccode", "countdown %s"},
                            {"argumentids", "[\"arg0\"]"}, {"warp", "false"}};
    std::string arg2 = b.add("argument_reporter_string_number", json::object(), {{"VALUE", json::array({"n", nullptr})}});
    b.chain({def, b.add("looks_say", {{"MESSAGE", b.reporter(arg2, json::array({10, ""}))}}), inner}, true);
    std::string outer = b.add("procedures_call", {{"arg0", str("3")}});
    b[outer]["mutation"] = b[inner]["mutation"];
    b.chain({b.add("event_whenthisspriteclicked"), outer}, true);

    sb.sprite("Pen", b, json::array({sb.vector_costume("vector", 30, 20), sb.costume("bitmap", disc(12, 0, 0, 0))}), 1);
    return sb.archive();
}

Bytes showcase() {
    Sb3 sb;
    Blocks stage("s");
    std::string bcast = stage.add("event_broadcast", {{"BROADCAST_INPUT", json::array({1, json::array({11, "tick", "b1"})})}});
    std::string wait = stage.add("control_wait", {{"DURATION", num(0.5)}});
    std::string loop = stage.add("control_forever");
    stage[loop]["inputs"]["SUBSTACK"] = stage.sub({wait, bcast});
    stage.chain({stage.add("event_whenflagclicked"),
                 stage.add("data_setvariableto", {{"VALUE", num(0)}}, {{"VARIABLE", json::array({"score", "v1"})}}), loop},
                true);
    sb.stage(stage, {{"v1", json::array({"score", 0})}}, {{"l1", json::array({"log", json::array()})}}, {{"b1", "tick"}});

    Blocks b("c");
    std::string add = b.add("operator_add", {{"NUM1", json::array({3, json::array({12, "score", "v1"}), json::array({4, "0"})})}, {"NUM2", num(1)}});
    std::string join = b.add("operator_join", {{"STRING1", str("score ")}, {"STRING2", json::array({3, json::array({12, "score", "v1"}), json::array({10, ""})})}});
    std::string gt = b.add("operator_gt", {{"OPERAND1", json::array({3, json::array({12, "score", "v1"}), json::array({10, ""})})}, {"OPERAND2", num(3)}});
    std::string if_else = b.add("control_if_else", {{"CONDITION", json::array({2, gt})}});
    b[if_else]["inputs"]["SUBSTACK"] = b.sub({b.add("looks_nextcostume"),
                                              b.add("looks_seteffectto", {{"VALUE", num(30)}}, {{"EFFECT", json::array({"GHOST", nullptr})}})});
    b[if_else]["inputs"]["SUBSTACK2"] = b.sub({b.add("looks_changesizeby", {{"CHANGE", num(10)}})});
    b.chain({b.add("event_whenbroadcastreceived", json::object(), {{"BROADCAST_OPTION", json::array({"tick", "b1"})}}),
             b.add("data_setvariableto", {{"VALUE", b.reporter(add)}}, {{"VARIABLE", json::array({"score", "v1"})}}),
             b.add("looks_say", {{"MESSAGE", b.reporter(join, json::array({10, ""}))}}), if_else,
             b.add("data_addtolist", {{"ITEM", json::array({3, json::array({12, "score", "v1"}), json::array({10, ""})})}},
                   {{"LIST", json::array({"log", "l1"})}}),
             b.add("control_create_clone_of", {{"CLONE_OPTION", b.menu("control_create_clone_of_menu", "CLONE_OPTION", "_myself_")}}),
             b.add("sound_play", {{"SOUND_MENU", b.menu("sound_sounds_menu", "SOUND_MENU", "pop")}})},
            true);

    std::string rnd = b.add("operator_random", {{"FROM", num(-180)}, {"TO", num(180)}});
    std::string until = b.add("control_repeat_until", {{"CONDITION", json::array({2, b.add("operator_lt", {{"OPERAND1", b.reporter(b.add("looks_size"))}, {"OPERAND2", num(20)}})})}});
    b[until]["inputs"]["SUBSTACK"] = b.sub({b.add("motion_movesteps", {{"STEPS", num(6)}}), b.add("motion_ifonedgebounce"),
                                            b.add("looks_changesizeby", {{"CHANGE", num(-4)}})});
    b.chain({b.add("control_start_as_clone"), b.add("motion_pointindirection", {{"DIRECTION", b.reporter(rnd)}}), until,
             b.add("control_delete_this_clone")},
            true);

    // Custom block with two arguments, inlined at its call.
    std::string proto = b.add("procedures_prototype", {{"ax", json::array({1, nullptr})}, {"ay", json::array({1, nullptr})}}, json::object(), true);
    json mutation = {{"tagName", "mutation"}, {"children", json::array()}, {"proccode", "hop to %s %s"}, {"argumentids", "[\"ax\",\"ay\"]"},
                     {"argumentnames", "[\"x\",\"y\"]"}, {"argumentdefaults", "[\"\",\"\"]"}, {"warp", "false"}};
    b[proto]["mutation"] = mutation;
    std::string def = b.add("procedures_definition", {{"custom_block", json::array({1, proto})}});
    std::string ax = b.add("argument_reporter_string_number", json::object(), {{"VALUE", json::array({"x", nullptr})}});
    std::string ay = b.add("argument_reporter_string_number", json::object(), {{"VALUE", json::array({"y", nullptr})}});
    b.chain({def, b.add("motion_glidesecstoxy", {{"SECS", num(0.25)}, {"X", b.reporter(ax)}, {"Y", b.reporter(ay)}})}, true);
    std::string call = b.add("procedures_call", {{"ax", num(-100)}, {"ay", num(50)}});
    b[call]["mutation"] = mutation;
    std::string repeat = b.add("control_repeat", {{"TIMES", num(3)}});
    b[repeat]["inputs"]["SUBSTACK"] = b.sub({call, b.add("motion_gotoxy", {{"X", num(0)}, {"Y", num(0)}})});
    b.chain({b.add("event_whenflagclicked"), b.add("looks_switchcostumeto", {{"COSTUME", b.menu("looks_costume", "COSTUME", "blue")}}),
             repeat, b.add("sensing_askandwait", {{"QUESTION", str("Your name?")}}),
             b.add("looks_sayforsecs", {{"MESSAGE", b.reporter(b.add("sensing_answer"), json::array({10, ""}))}, {"SECS", num(1)}})},
            true);

    json& sprite = sb.sprite("Ball", b, json::array({sb.costume("red", disc(16, 220, 40, 40)), sb.costume("blue", disc(16, 40, 40, 220))}), 1);
    sprite["sounds"] = json::array({sb.sound("pop")});
    sprite["x"] = 40;
    sprite["y"] = -30;
    sprite["size"] = 80;
    return sb.archive();
}

}  // namespace

std::vector<ScratchFixture> scratch_fixtures() {
    return {{"minimal", minimal()}, {"motion", motion()}, {"unsupported", unsupported()}, {"showcase", showcase()}};
}

}  // namespace brickvm::fixtures
