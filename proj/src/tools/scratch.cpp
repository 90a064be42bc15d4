#include "brickvm/tools/scratch.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>

#include <nlohmann/json.hpp>

#include "brickvm/model/bricks.hpp"
#include "brickvm/support/hash.hpp"
#include "brickvm/support/png.hpp"
#include "brickvm/support/text.hpp"
#include "brickvm/support/zip.hpp"

namespace brickvm::tools {

using json = nlohmann::ordered_json;
using namespace brickvm::model;
using formula::Function;
using formula::Node;
using K = BrickKind;

const std::vector<ScratchMapping>& scratch_mapping() {
    static const std::vector<ScratchMapping> table = {
        {"event_whenflagclicked", "When program started", ""},
        {"event_whenthisspriteclicked", "When tapped", ""},
        {"event_whenstageclicked", "When tapped (background)", ""},
        {"event_whenbroadcastreceived", "When you receive", ""},
        {"control_start_as_clone", "When I start as a clone", ""},
        {"event_broadcast", "Broadcast", "message must be a literal"},
        {"event_broadcastandwait", "Broadcast and wait", "message must be a literal"},
        {"control_wait", "Wait", ""},
        {"control_wait_until", "Wait until", ""},
        {"control_repeat", "Repeat … End of loop", ""},
        {"control_forever", "Forever … End of loop", ""},
        {"control_repeat_until", "Repeat until … End of loop", ""},
        {"control_if", "If … End if", ""},
        {"control_if_else", "If … Else … End if", ""},
        {"control_stop", "Stop all scripts / Stop this script", "\"other scripts in sprite\" is unsupported"},
        {"control_create_clone_of", "Create clone of", "\"myself\" names the converted sprite"},
        {"control_delete_this_clone", "Delete this clone", ""},
        {"motion_gotoxy", "Place at", ""},
        {"motion_setx", "Set X to", ""},
        {"motion_sety", "Set Y to", ""},
        {"motion_changexby", "Change X by", "x advances by DX each time the block runs"},
        {"motion_changeyby", "Change Y by", "y advances by DY each time the block runs"},
        {"motion_movesteps", "Move steps", ""},
        {"motion_turnright", "Turn right", ""},
        {"motion_turnleft", "Turn left", ""},
        {"motion_pointindirection", "Point in direction", "same angle convention, value copied unchanged"},
        {"motion_glidesecstoxy", "Glide to", ""},
        {"motion_ifonedgebounce", "If on edge bounce", ""},
        {"motion_xposition", "position_x", ""},
        {"motion_yposition", "position_y", ""},
        {"motion_direction", "direction", ""},
        {"looks_switchcostumeto", "Switch to look", "costume must be a literal"},
        {"looks_nextcostume", "Next look", ""},
        {"looks_show", "Show", ""},
        {"looks_hide", "Hide", ""},
        {"looks_setsizeto", "Set size to", ""},
        {"looks_changesizeby", "Change size by", ""},
        {"looks_say", "Say", ""},
        {"looks_think", "Think", ""},
        {"looks_sayforsecs", "Say, Wait, Say ''", ""},
        {"looks_thinkforsecs", "Think, Wait, Think ''", ""},
        {"looks_seteffectto", "Set transparency / Set brightness", "GHOST and BRIGHTNESS only; brightness is shifted by +100"},
        {"looks_changeeffectby", "Change transparency / Change brightness", "GHOST and BRIGHTNESS only"},
        {"looks_cleargraphiceffects", "Set transparency 0, Set brightness 100", ""},
        {"looks_gotofrontback", "Go to front", "\"back\" is unsupported"},
        {"looks_goforwardbackward", "Go back layers", "forward moves are negative layer counts"},
        {"looks_size", "size", ""},
        {"looks_costumenumbername", "look_number", "\"name\" is unsupported"},
        {"sound_play", "Start sound", "sound must be a literal"},
        {"sound_playuntildone", "Start sound", "does not wait for the sound to end"},
        {"sound_stopallsounds", "Stop all sounds", ""},
        {"sound_setvolumeto", "Set volume to", ""},
        {"sound_changevolumeby", "Change volume by", ""},
        {"sensing_askandwait", "Ask … and store written answer in answer", "creates the global variable \"answer\""},
        {"sensing_answer", "\"answer\"", ""},
        {"sensing_loudness", "loudness", ""},
        {"data_variable", "variable reference", ""},
        {"data_setvariableto", "Set variable", ""},
        {"data_changevariableby", "Change variable", ""},
        {"data_showvariable", "Show variable", ""},
        {"data_hidevariable", "Hide variable", ""},
        {"data_addtolist", "Add to list", ""},
        {"data_deleteoflist", "Delete item from list", "\"all\" clears the list, \"last\" is the item count"},
        {"data_deletealloflist", "Delete all items of list", ""},
        {"data_insertatlist", "Insert into list", ""},
        {"data_replaceitemoflist", "Replace item in list", ""},
        {"data_itemoflist", "element(index, list)", ""},
        {"data_lengthoflist", "number_of_items(list)", ""},
        {"data_listcontainsitem", "contains(list, item)", ""},
        {"operator_add", "+", ""},
        {"operator_subtract", "-", ""},
        {"operator_multiply", "×", ""},
        {"operator_divide", "/", "division by zero gives 0"},
        {"operator_mod", "mod", "floored, sign of the divisor"},
        {"operator_lt", "<", ""},
        {"operator_gt", ">", ""},
        {"operator_equals", "=", ""},
        {"operator_and", "AND", ""},
        {"operator_or", "OR", ""},
        {"operator_not", "NOT", ""},
        {"operator_random", "random(a, b)", "always a real number, never rounded to integers"},
        {"operator_join", "join(a, b)", ""},
        {"operator_letter_of", "letter(i, s)", ""},
        {"operator_length", "length(s)", ""},
        {"operator_round", "round(x)", ""},
        {"operator_mathop", "abs, floor, ceil, sqrt, sin, cos, tan, arcsin, arccos, arctan, ln, log, exp, power(10, x)", ""},
        {"procedures_call", "inlined body of the custom block", "recursive calls are unsupported"},
        {"procedures_definition", "inlined at each call", ""},
        {"argument_reporter_string_number", "argument formula", ""},
        {"argument_reporter_boolean", "argument formula", ""},
    };
    return table;
}

namespace {

struct Target {
    const json* source = nullptr;
    bool stage = false;
    std::string name;         // name in the converted project
    std::string scratch_name;
    std::size_t object = 0;   // index in scene 0
};

struct InlineFrame {
    std::string proccode;
    std::map<std::string, Node> args;
};

class Converter {
public:
    Converter(ByteView sb3, const std::string& name) {
        try {
            files_ = zip::read(sb3);
        } catch (const std::exception& e) {
            throw MalformedSource(std::string("not a zip archive: ") + e.what());
        }
        auto it = files_.find("project.json");
        if (it == files_.end()) throw MalformedSource("project.json missing");
        try {
            manifest_ = json::parse(to_string(it->second));
        } catch (const json::exception& e) {
            throw MalformedSource(std::string("project.json: ") + e.what());
        }
        if (!manifest_.is_object() || !manifest_.contains("targets") || !manifest_["targets"].is_array())
            throw MalformedSource("project.json has no targets");
        out_.project = empty_project(name);
        out_.project.header.stage_width = 480;
        out_.project.header.stage_height = 360;
    }

    Conversion run() {
        try {
            collect_targets();
            for (auto& t : targets_) declare_data(t);
            for (auto& t : targets_) convert_assets(t);
            for (auto& t : targets_) convert_scripts(t);
            account();
        } catch (const json::exception& e) {
            throw MalformedSource(std::string("project.json: ") + e.what());
        }
        return std::move(out_);
    }

private:
    Project& project() { return out_.project; }
    SpriteObject& object(const Target& t) { return project().scenes[0].objects[t.object]; }
    ConversionReport& report() { return out_.report; }

    void collect_targets() {
        std::vector<const json*> sprites;
        const json* stage = nullptr;
        for (const auto& t : manifest_["targets"]) {
            if (!t.is_object()) throw MalformedSource("target is not an object");
            if (t.value("isStage", false)) {
                if (stage) throw MalformedSource("two stage targets");
                stage = &t;
            } else {
                sprites.push_back(&t);
            }
        }
        if (!stage) throw MalformedSource("no stage target");
        std::stable_sort(sprites.begin(), sprites.end(),
                         [](const json* a, const json* b) { return a->value("layerOrder", 0) < b->value("layerOrder", 0); });

        std::set<std::string> names;
        for (const json* s : sprites) names.insert(s->value("name", std::string()));
        Target st;
        st.source = stage;
        st.stage = true;
        st.scratch_name = "Stage";
        st.name = names.count("Background") ? "Stage" : "Background";
        st.object = 0;
        project().scenes[0].objects[0].name = st.name;
        targets_.push_back(st);
        names.insert(st.name);

        std::set<std::string> used = {st.name};
        for (const json* s : sprites) {
            Target t;
            t.source = s;
            t.scratch_name = s->value("name", std::string());
            t.name = t.scratch_name.empty() ? "Sprite" : t.scratch_name;
            for (int n = 2; used.count(t.name); ++n) t.name = t.scratch_name + " (" + std::to_string(n) + ")";
            if (t.name != t.scratch_name) report().warnings.push_back("sprite '" + t.scratch_name + "' renamed to '" + t.name + "'");
            used.insert(t.name);
            t.object = project().scenes[0].objects.size();
            project().scenes[0].objects.emplace_back().name = t.name;
            targets_.push_back(t);
        }
    }

    static formula::Value value_of(const json& v) {
        if (v.is_number()) return v.get<double>();
        if (v.is_boolean()) return v.get<bool>() ? std::string("true") : std::string("false");
        if (v.is_string()) return v.get<std::string>();
        return std::string();
    }

    void declare_data(const Target& t) {
        const json& src = *t.source;
        auto& vars = t.stage ? project().global_variables : object(t).local_variables;
        auto& lists = t.stage ? project().global_lists : object(t).local_lists;
        if (src.contains("variables")) {
            for (const auto& [id, v] : src["variables"].items()) {
                std::string name = v.at(0).get<std::string>();
                if (v.size() > 2 && v[2].is_boolean() && v[2].get<bool>())
                    report().warnings.push_back("cloud variable '" + name + "' converted to a plain variable");
                vars[name] = value_of(v.at(1));
                variable_names_[id] = name;
            }
        }
        if (src.contains("lists")) {
            for (const auto& [id, l] : src["lists"].items()) {
                std::string name = l.at(0).get<std::string>();
                std::vector<formula::Value> items;
                for (const auto& item : l.at(1)) items.push_back(value_of(item));
                lists[name] = std::move(items);
                list_names_[id] = name;
            }
        }
    }

    static png::Image placeholder(int width, int height) {
        png::Image img(static_cast<std::uint32_t>(std::max(1, width)), static_cast<std::uint32_t>(std::max(1, height)));
        for (std::uint32_t y = 0; y < img.height; ++y)
            for (std::uint32_t x = 0; x < img.width; ++x) img.set(x, y, 128, 128, 128, 255);
        return img;
    }

    static png::Image halve(const png::Image& src) {
        png::Image img(std::max(1u, src.width / 2), std::max(1u, src.height / 2));
        for (std::uint32_t y = 0; y < img.height; ++y) {
            for (std::uint32_t x = 0; x < img.width; ++x) {
                const auto* p = src.pixel(std::min(src.width - 1, 2 * x), std::min(src.height - 1, 2 * y));
                img.set(x, y, p[0], p[1], p[2], p[3]);
            }
        }
        return img;
    }

    void convert_assets(const Target& t) {
        const json& src = *t.source;
        SpriteObject& obj = object(t);
        std::set<std::string> look_names;
        for (const auto& c : src.value("costumes", json::array())) {
            std::string name = c.value("name", std::string("costume"));
            std::string file = c.value("md5ext", c.value("assetId", std::string()) + "." + c.value("dataFormat", std::string("png")));
            std::string format = c.value("dataFormat", std::string());
            png::Image image;
            auto it = files_.find(file);
            if (it == files_.end()) {
                report().warnings.push_back(t.scratch_name + ": costume '" + name + "' file " + file + " missing, replaced by a box");
                image = placeholder(2, 2);
            } else if (format == "png") {
                try {
                    image = png::decode(it->second);
                    if (c.value("bitmapResolution", 1) == 2) image = halve(image);
                } catch (const png::PngError& e) {
                    report().warnings.push_back(t.scratch_name + ": costume '" + name + "' is not a readable PNG, replaced by a box");
                    image = placeholder(2, 2);
                }
            } else {
                auto [w, h] = svg_size(to_string(it->second));
                report().warnings.push_back(t.scratch_name + ": vector costume '" + name + "' rasterized as a " + std::to_string(w) + "x" +
                                            std::to_string(h) + " box");
                image = placeholder(w, h);
            }
            for (int n = 2; look_names.count(name); ++n) name = c.value("name", std::string("costume")) + " (" + std::to_string(n) + ")";
            look_names.insert(name);
            Bytes data = png::encode(image);
            std::string path = "images/" + hex64(fnv1a64(data)) + ".png";
            project().assets[path] = std::move(data);
            obj.looks.push_back(Look{name, path, static_cast<int>(image.width), static_cast<int>(image.height)});
        }
        std::set<std::string> sound_names;
        for (const auto& s : src.value("sounds", json::array())) {
            std::string name = s.value("name", std::string("sound"));
            std::string file = s.value("md5ext", s.value("assetId", std::string()) + "." + s.value("dataFormat", std::string("wav")));
            auto it = files_.find(file);
            if (it == files_.end()) {
                report().warnings.push_back(t.scratch_name + ": sound '" + name + "' file " + file + " missing, sound dropped");
                continue;
            }
            if (!sound_names.insert(name).second) continue;
            std::string path = "sounds/" + file;
            project().assets[path] = it->second;
            obj.sounds.push_back(SoundRef{name, path});
        }
    }

    static std::pair<int, int> svg_size(const std::string& svg) {
        auto attribute = [&](const std::string& key) -> int {
            auto root = svg.find("<svg");
            if (root == std::string::npos) return 0;
            auto pos = svg.find(" " + key + "=\"", root);
            if (pos == std::string::npos) return 0;
            return static_cast<int>(std::lround(text::parse_leading_number(std::string_view(svg).substr(pos + key.size() + 3))));
        };
        int w = attribute("width"), h = attribute("height");
        return {w > 0 ? w : 2, h > 0 ? h : 2};
    }

    // ---- block accounting

    static std::string key(const Target& t, const std::string& id) { return std::to_string(t.object) + ":" + id; }

    void mapped(const Target& t, const std::string& id, const std::string& opcode) {
        status_.try_emplace(key(t, id), true);
        opcode_of_[key(t, id)] = opcode;
    }

    void unsupported(const Target& t, const std::string& id, const std::string& opcode, const std::string& reason) {
        auto [it, fresh] = status_.try_emplace(key(t, id), false);
        if (!fresh && !it->second) return;
        it->second = false;
        opcode_of_[key(t, id)] = opcode;
        report().unsupported.push_back({t.scratch_name, id, opcode, reason});
    }

    void account() {
        for (const auto& t : targets_) {
            const json& blocks = t.source->value("blocks", json::object());
            for (const auto& [id, b] : blocks.items()) {
                if (b.is_object() && b.value("shadow", false)) continue;
                ++report().total;
                auto it = status_.find(key(t, id));
                if (it == status_.end()) {
                    std::string opcode = b.is_object() ? b.value("opcode", std::string("?")) : "loose reporter";
                    std::string reason = b.is_object() && b.value("topLevel", false) ? "stack without a supported hat"
                                                                                     : "inside an unsupported or unreachable block";
                    report().unsupported.push_back({t.scratch_name, id, opcode, reason});
                } else if (it->second) {
                    ++report().mapped;
                    ++report().mapped_by_opcode[opcode_of_[key(t, id)]];
                }
            }
        }
    }

    // ---- block access

    const json& blocks(const Target& t) { return (*t.source)["blocks"]; }

    const json* block(const Target& t, const std::string& id) {
        const json& all = blocks(t);
        auto it = all.find(id);
        return it == all.end() || !it->is_object() ? nullptr : &*it;
    }

    static const json* input(const json& b, const std::string& name) {
        if (!b.contains("inputs")) return nullptr;
        auto it = b["inputs"].find(name);
        return it == b["inputs"].end() ? nullptr : &*it;
    }

    static std::optional<std::string> field(const json& b, const std::string& name, int index = 0) {
        if (!b.contains("fields")) return std::nullopt;
        auto it = b["fields"].find(name);
        if (it == b["fields"].end() || !it->is_array() || static_cast<int>(it->size()) <= index || !(*it)[index].is_string())
            return std::nullopt;
        return (*it)[index].get<std::string>();
    }

    /// Block id held in a SUBSTACK-style input.
    static std::optional<std::string> input_block(const json& b, const std::string& name) {
        const json* in = input(b, name);
        if (!in || !in->is_array() || in->size() < 2 || !(*in)[1].is_string()) return std::nullopt;
        return (*in)[1].get<std::string>();
    }

    /// Literal chosen in a menu input (a shadow block holding the field).
    std::optional<std::string> menu(const Target& t, const json& b, const std::string& input_name, const std::string& field_name) {
        auto id = input_block(b, input_name);
        if (!id) {
            const json* in = input(b, input_name);
            if (in && in->is_array() && in->size() >= 2 && (*in)[1].is_array() && (*in)[1].size() >= 2 && (*in)[1][1].is_string())
                return (*in)[1][1].get<std::string>();
            return std::nullopt;
        }
        const json* m = block(t, *id);
        if (!m || !m->value("shadow", false)) return std::nullopt;
        return field(*m, field_name);
    }

    std::string variable_name(const json& b, const std::string& field_name) {
        if (!b.contains("fields") || !b["fields"].contains(field_name)) return {};
        const json& f = b["fields"][field_name];
        std::string name = f.at(0).get<std::string>();
        if (f.size() > 1 && f[1].is_string()) {
            auto& table = field_name == "LIST" ? list_names_ : variable_names_;
            if (auto it = table.find(f[1].get<std::string>()); it != table.end()) return it->second;
        }
        return name;
    }

    void ensure_variable(const Target& t, const std::string& name) {
        if (name.empty() || project().global_variables.count(name) || object(t).local_variables.count(name)) return;
        project().global_variables[name] = 0.0;
        report().warnings.push_back("undeclared variable '" + name + "' created as a global");
    }

    void ensure_list(const Target& t, const std::string& name) {
        if (name.empty() || project().global_lists.count(name) || object(t).local_lists.count(name)) return;
        project().global_lists[name] = {};
        report().warnings.push_back("undeclared list '" + name + "' created as a global");
    }

    // ---- formulas

    static Node literal(const std::string& s) {
        if (auto n = text::parse_number(s); n && text::format_number(*n) == s) return Node::make_number(*n);
        return Node::make_text(s);
    }

    Node primitive(const Target& t, const json& p) {
        int type = p.at(0).get<int>();
        auto text_at = [&](std::size_t i) -> std::string {
            if (p.size() <= i) return {};
            if (p[i].is_string()) return p[i].get<std::string>();
            if (p[i].is_number()) return text::format_number(p[i].get<double>());
            return {};
        };
        switch (type) {
            case 12: {
                std::string id = text_at(2), name = text_at(1);
                if (auto it = variable_names_.find(id); it != variable_names_.end()) name = it->second;
                ensure_variable(t, name);
                return Node::make_variable(name);
            }
            case 13: {
                std::string id = text_at(2), name = text_at(1);
                if (auto it = list_names_.find(id); it != list_names_.end()) name = it->second;
                ensure_list(t, name);
                return Node::make_list(name);
            }
            default: return literal(text_at(1));
        }
    }

    /// Formula of a value input; `fallback` when the input is empty.
    Node value(const Target& t, const json& b, const std::string& name, const Node& fallback) {
        const json* in = input(b, name);
        if (!in || !in->is_array() || in->size() < 2) return fallback;
        const json& v = (*in)[1];
        if (v.is_array()) return primitive(t, v);
        if (v.is_string()) {
            std::string id = v.get<std::string>();
            if (auto n = reporter(t, id)) return *n;
            if (in->size() >= 3 && (*in)[2].is_array()) return primitive(t, (*in)[2]);
            return fallback;
        }
        return fallback;
    }

    Node number(const Target& t, const json& b, const std::string& name) { return value(t, b, name, Node::make_number(0)); }
    Node text_value(const Target& t, const json& b, const std::string& name) { return value(t, b, name, Node::make_text("")); }
    Node condition(const Target& t, const json& b, const std::string& name) {
        return value(t, b, name, Node::make_call(Function::False, {}));
    }

    std::optional<Node> reporter(const Target& t, const std::string& id) {
        const json* b = block(t, id);
        if (!b) return std::nullopt;
        std::string op = b->value("opcode", std::string());
        if (b->value("shadow", false)) {
            if (auto f = field(*b, "NUM")) return literal(*f);
            if (auto f = field(*b, "TEXT")) return literal(*f);
            return std::nullopt;
        }
        auto n = reporter_node(t, *b, op);
        if (n) {
            mapped(t, id, op);
        } else {
            unsupported(t, id, op, "reporter not in the mapping table");
            report().warnings.push_back(t.scratch_name + ": unsupported reporter " + op + " replaced by its default");
        }
        return n;
    }

    std::optional<Node> reporter_node(const Target& t, const json& b, const std::string& op) {
        using formula::BinaryOp;
        using formula::ObjectProperty;
        auto binary = [&](BinaryOp o, const char* l, const char* r) {
            return Node::make_binary(o, number(t, b, l), number(t, b, r));
        };
        auto compare = [&](BinaryOp o) {
            return Node::make_binary(o, text_value(t, b, "OPERAND1"), text_value(t, b, "OPERAND2"));
        };
        if (op == "operator_add") return binary(BinaryOp::Add, "NUM1", "NUM2");
        if (op == "operator_subtract") return binary(BinaryOp::Subtract, "NUM1", "NUM2");
        if (op == "operator_multiply") return binary(BinaryOp::Multiply, "NUM1", "NUM2");
        if (op == "operator_divide") return binary(BinaryOp::Divide, "NUM1", "NUM2");
        if (op == "operator_mod") return binary(BinaryOp::Mod, "NUM1", "NUM2");
        if (op == "operator_lt") return compare(BinaryOp::Less);
        if (op == "operator_gt") return compare(BinaryOp::Greater);
        if (op == "operator_equals") return compare(BinaryOp::Equal);
        if (op == "operator_and") return Node::make_binary(BinaryOp::And, condition(t, b, "OPERAND1"), condition(t, b, "OPERAND2"));
        if (op == "operator_or") return Node::make_binary(BinaryOp::Or, condition(t, b, "OPERAND1"), condition(t, b, "OPERAND2"));
        if (op == "operator_not") return Node::make_unary(formula::UnaryOp::Not, condition(t, b, "OPERAND"));
        if (op == "operator_random") return Node::make_call(Function::Random, {number(t, b, "FROM"), number(t, b, "TO")});
        if (op == "operator_join") return Node::make_call(Function::Join, {text_value(t, b, "STRING1"), text_value(t, b, "STRING2")});
        if (op == "operator_letter_of") return Node::make_call(Function::Letter, {number(t, b, "LETTER"), text_value(t, b, "STRING")});
        if (op == "operator_length") return Node::make_call(Function::Length, {text_value(t, b, "STRING")});
        if (op == "operator_round") return Node::make_call(Function::Round, {number(t, b, "NUM")});
        if (op == "operator_mathop") {
            static const std::map<std::string, Function> kOps = {
                {"abs", Function::Abs},     {"floor", Function::Floor},   {"ceiling", Function::Ceil}, {"sqrt", Function::Sqrt},
                {"sin", Function::Sin},     {"cos", Function::Cos},       {"tan", Function::Tan},      {"asin", Function::Arcsin},
                {"acos", Function::Arccos}, {"atan", Function::Arctan},   {"ln", Function::Ln},        {"log", Function::Log},
                {"e ^", Function::Exp},
            };
            auto which = field(b, "OPERATOR");
            if (!which) return std::nullopt;
            if (*which == "10 ^") return Node::make_call(Function::Power, {Node::make_number(10), number(t, b, "NUM")});
            auto it = kOps.find(*which);
            if (it == kOps.end()) return std::nullopt;
            return Node::make_call(it->second, {number(t, b, "NUM")});
        }
        if (op == "motion_xposition") return Node::make_property(ObjectProperty::PositionX);
        if (op == "motion_yposition") return Node::make_property(ObjectProperty::PositionY);
        if (op == "motion_direction") return Node::make_property(ObjectProperty::Direction);
        if (op == "looks_size") return Node::make_property(ObjectProperty::Size);
        if (op == "looks_costumenumbername") {
            if (field(b, "NUMBER_NAME").value_or("number") != "number") return std::nullopt;
            return Node::make_property(ObjectProperty::LookNumber);
        }
        if (op == "sensing_loudness") return Node::make_sensor(formula::Sensor::Loudness);
        if (op == "sensing_answer") {
            ensure_answer();
            return Node::make_variable("answer");
        }
        if (op == "data_variable") {
            std::string name = variable_name(b, "VARIABLE");
            ensure_variable(t, name);
            return Node::make_variable(name);
        }
        if (op == "data_itemoflist" || op == "data_lengthoflist" || op == "data_listcontainsitem") {
            std::string list = variable_name(b, "LIST");
            if (list.empty()) return std::nullopt;
            ensure_list(t, list);
            if (op == "data_itemoflist") return Node::make_call(Function::Element, {list_index(t, b, "INDEX", list), Node::make_list(list)});
            if (op == "data_lengthoflist") return Node::make_call(Function::NumberOfItems, {Node::make_list(list)});
            return Node::make_call(Function::Contains, {Node::make_list(list), text_value(t, b, "ITEM")});
        }
        if (op == "argument_reporter_string_number" || op == "argument_reporter_boolean") {
            auto name = field(b, "VALUE");
            if (!name || inline_.empty()) return std::nullopt;
            auto it = inline_.back().args.find(*name);
            if (it == inline_.back().args.end()) return std::nullopt;
            return it->second;
        }
        return std::nullopt;
    }

    /// Scratch list indices also accept "last" (and "random", unsupported).
    Node list_index(const Target& t, const json& b, const std::string& name, const std::string& list) {
        Node n = number(t, b, name);
        if (n.kind == Node::Kind::Text && n.name == "last") return Node::make_call(Function::NumberOfItems, {Node::make_list(list)});
        if (n.kind == Node::Kind::Text && (n.name == "random" || n.name == "any")) {
            report().warnings.push_back(t.scratch_name + ": random list index treated as a random position");
            return Node::make_call(Function::Round, {Node::make_call(Function::Random, {Node::make_number(1),
                                                                                         Node::make_call(Function::NumberOfItems, {Node::make_list(list)})})});
        }
        return n;
    }

    void ensure_answer() {
        if (!project().global_variables.count("answer")) project().global_variables["answer"] = std::string();
    }

    // ---- statements

    static Brick brick(K kind, std::map<std::string, Node> formulas = {}, std::map<std::string, std::string> params = {}) {
        Brick b;
        b.kind = kind;
        b.formulas = std::move(formulas);
        b.params = std::move(params);
        return b;
    }

    void stack(const Target& t, std::optional<std::string> id, std::vector<Brick>& out) {
        std::set<std::string> seen;
        while (id && !id->empty()) {
            if (!seen.insert(*id).second) throw MalformedSource("block chain loops at " + *id);
            const json* b = block(t, *id);
            if (!b) break;
            statement(t, *id, *b, out);
            const json& next = (*b)["next"];
            id = next.is_string() ? std::optional(next.get<std::string>()) : std::nullopt;
        }
    }

    void statement(const Target& t, const std::string& id, const json& b, std::vector<Brick>& out) {
        std::string op = b.value("opcode", std::string());
        std::size_t mark = out.size();
        std::string reason = "block not in the mapping table";
        bool ok = false;
        try {
            ok = convert_statement(t, id, b, op, out, reason);
        } catch (const std::invalid_argument& e) {
            reason = e.what();
        }
        if (ok) {
            mapped(t, id, op);
            return;
        }
        out.resize(mark);
        unsupported(t, id, op, reason);
        out.push_back(brick(K::Note, {}, {{"text", "unsupported Scratch block " + op}}));
    }

    bool convert_statement(const Target& t, const std::string& id, const json& b, const std::string& op, std::vector<Brick>& out,
                           std::string& reason) {
        auto one = [&](K kind, std::map<std::string, Node> formulas = {}, std::map<std::string, std::string> params = {}) {
            out.push_back(brick(kind, std::move(formulas), std::move(params)));
            return true;
        };
        auto body = [&](const char* name) { stack(t, input_block(b, name), out); };

        if (op == "motion_gotoxy") return one(K::PlaceAt, {{"x", number(t, b, "X")}, {"y", number(t, b, "Y")}});
        if (op == "motion_setx") return one(K::SetX, {{"x", number(t, b, "X")}});
        if (op == "motion_sety") return one(K::SetY, {{"y", number(t, b, "Y")}});
        if (op == "motion_changexby") return one(K::ChangeXBy, {{"dx", number(t, b, "DX")}});
        if (op == "motion_changeyby") return one(K::ChangeYBy, {{"dy", number(t, b, "DY")}});
        if (op == "motion_movesteps") return one(K::MoveSteps, {{"steps", number(t, b, "STEPS")}});
        if (op == "motion_turnright") return one(K::TurnRight, {{"degrees", number(t, b, "DEGREES")}});
        if (op == "motion_turnleft") return one(K::TurnLeft, {{"degrees", number(t, b, "DEGREES")}});
        if (op == "motion_pointindirection") return one(K::PointInDirection, {{"degrees", number(t, b, "DIRECTION")}});
        if (op == "motion_glidesecstoxy")
            return one(K::GlideTo, {{"seconds", number(t, b, "SECS")}, {"x", number(t, b, "X")}, {"y", number(t, b, "Y")}});
        if (op == "motion_ifonedgebounce") return one(K::IfOnEdgeBounce);

        if (op == "looks_switchcostumeto") {
            auto name = menu(t, b, "COSTUME", "COSTUME");
            if (!name) return reason = "costume chosen by a reporter", false;
            const auto& looks = object(t).looks;
            if (std::none_of(looks.begin(), looks.end(), [&](const Look& l) { return l.name == *name; }))
                return reason = "unknown costume '" + *name + "'", false;
            return one(K::SwitchToLook, {}, {{"look", *name}});
        }
        if (op == "looks_nextcostume") return one(K::NextLook);
        if (op == "looks_show") return one(K::Show);
        if (op == "looks_hide") return one(K::Hide);
        if (op == "looks_setsizeto") return one(K::SetSize, {{"size", number(t, b, "SIZE")}});
        if (op == "looks_changesizeby") return one(K::ChangeSizeBy, {{"delta", number(t, b, "CHANGE")}});
        if (op == "looks_say") return one(K::Say, {{"text", text_value(t, b, "MESSAGE")}});
        if (op == "looks_think") return one(K::Think, {{"text", text_value(t, b, "MESSAGE")}});
        if (op == "looks_sayforsecs" || op == "looks_thinkforsecs") {
            K kind = op == "looks_sayforsecs" ? K::Say : K::Think;
            one(kind, {{"text", text_value(t, b, "MESSAGE")}});
            one(K::Wait, {{"seconds", number(t, b, "SECS")}});
            return one(kind, {{"text", Node::make_text("")}});
        }
        if (op == "looks_seteffectto" || op == "looks_changeeffectby") {
            std::string effect = text::to_upper(field(b, "EFFECT").value_or(""));
            if (effect != "GHOST" && effect != "BRIGHTNESS") return reason = "graphic effect " + effect + " has no equivalent", false;
            bool set = op == "looks_seteffectto";
            Node amount = number(t, b, set ? "VALUE" : "CHANGE");
            if (effect == "GHOST") return one(set ? K::SetTransparency : K::ChangeTransparencyBy, {{set ? "value" : "delta", amount}});
            if (effect == "BRIGHTNESS") {
                if (set) return one(K::SetBrightness, {{"value", Node::make_binary(formula::BinaryOp::Add, amount, Node::make_number(100))}});
                return one(K::ChangeBrightnessBy, {{"delta", amount}});
            }
        }
        if (op == "looks_cleargraphiceffects") {
            one(K::SetTransparency, {{"value", Node::make_number(0)}});
            return one(K::SetBrightness, {{"value", Node::make_number(100)}});
        }
        if (op == "looks_gotofrontback") {
            if (field(b, "FRONT_BACK").value_or("front") != "front") return reason = "go to back layer has no equivalent", false;
            return one(K::ComeToFront);
        }
        if (op == "looks_goforwardbackward") {
            Node n = number(t, b, "NUM");
            if (field(b, "FORWARD_BACKWARD").value_or("forward") == "forward") n = Node::make_unary(formula::UnaryOp::Negate, n);
            return one(K::GoBackLayers, {{"layers", n}});
        }

        if (op == "sound_play" || op == "sound_playuntildone") {
            auto name = menu(t, b, "SOUND_MENU", "SOUND_MENU");
            if (!name) return reason = "sound chosen by a reporter", false;
            const auto& sounds = object(t).sounds;
            if (std::none_of(sounds.begin(), sounds.end(), [&](const SoundRef& s) { return s.name == *name; }))
                return reason = "unknown sound '" + *name + "'", false;
            if (op == "sound_playuntildone") report().warnings.push_back(t.scratch_name + ": play until done does not wait");
            return one(K::StartSound, {}, {{"sound", *name}});
        }
        if (op == "sound_stopallsounds") return one(K::StopAllSounds);
        if (op == "sound_setvolumeto") return one(K::SetVolume, {{"volume", number(t, b, "VOLUME")}});
        if (op == "sound_changevolumeby") return one(K::ChangeVolumeBy, {{"delta", number(t, b, "VOLUME")}});

        if (op == "event_broadcast" || op == "event_broadcastandwait") {
            const json* in = input(b, "BROADCAST_INPUT");
            if (!in || !in->is_array() || in->size() < 2 || !(*in)[1].is_array()) return reason = "message computed by a reporter", false;
            Node m = primitive(t, (*in)[1]);
            std::string message = m.kind == Node::Kind::Number ? text::format_number(m.number) : m.name;
            if (message.empty()) return reason = "empty message", false;
            return one(op == "event_broadcast" ? K::Broadcast : K::BroadcastAndWait, {}, {{"message", message}});
        }

        if (op == "control_wait") return one(K::Wait, {{"seconds", number(t, b, "DURATION")}});
        if (op == "control_wait_until") return one(K::WaitUntil, {{"condition", condition(t, b, "CONDITION")}});
        if (op == "control_repeat" || op == "control_forever" || op == "control_repeat_until") {
            if (op == "control_repeat") one(K::Repeat, {{"times", number(t, b, "TIMES")}});
            else if (op == "control_forever") one(K::Forever);
            else one(K::RepeatUntil, {{"condition", condition(t, b, "CONDITION")}});
            body("SUBSTACK");
            return one(K::EndOfLoop);
        }
        if (op == "control_if" || op == "control_if_else") {
            one(K::IfThen, {{"condition", condition(t, b, "CONDITION")}});
            body("SUBSTACK");
            if (op == "control_if_else") {
                one(K::Else);
                body("SUBSTACK2");
            }
            return one(K::EndIf);
        }
        if (op == "control_stop") {
            std::string which = field(b, "STOP_OPTION").value_or("all");
            if (which == "all") return one(K::StopAllScripts);
            if (which == "this script") return one(K::StopThisScript);
            return reason = "stop option '" + which + "' has no equivalent", false;
        }
        if (op == "control_create_clone_of") {
            auto which = menu(t, b, "CLONE_OPTION", "CLONE_OPTION");
            if (!which) return reason = "clone target chosen by a reporter", false;
            std::string name = *which == "_myself_" ? t.name : *which;
            auto target = std::find_if(targets_.begin(), targets_.end(), [&](const Target& x) { return !x.stage && x.scratch_name == name; });
            if (*which != "_myself_") {
                if (target == targets_.end()) return reason = "unknown sprite '" + name + "'", false;
                name = target->name;
            }
            if (t.stage && *which == "_myself_") return reason = "the stage cannot be cloned", false;
            return one(K::CreateClone, {}, {{"object", name}});
        }
        if (op == "control_delete_this_clone") return one(K::DeleteClone);

        if (op == "data_setvariableto" || op == "data_changevariableby" || op == "data_showvariable" || op == "data_hidevariable") {
            std::string name = variable_name(b, "VARIABLE");
            if (name.empty()) return reason = "variable missing", false;
            ensure_variable(t, name);
            if (op == "data_setvariableto") return one(K::SetVariable, {{"value", text_value(t, b, "VALUE")}}, {{"variable", name}});
            if (op == "data_changevariableby") return one(K::ChangeVariable, {{"value", number(t, b, "VALUE")}}, {{"variable", name}});
            return one(op == "data_showvariable" ? K::ShowVariable : K::HideVariable, {}, {{"variable", name}});
        }
        if (op.rfind("data_", 0) == 0 && (op.find("list") != std::string::npos)) {
            std::string list = variable_name(b, "LIST");
            if (list.empty()) return reason = "list missing", false;
            ensure_list(t, list);
            std::map<std::string, std::string> p = {{"list", list}};
            if (op == "data_addtolist") return one(K::AddToList, {{"item", text_value(t, b, "ITEM")}}, p);
            if (op == "data_deletealloflist") return one(K::ClearList, {}, p);
            if (op == "data_deleteoflist") {
                Node index = number(t, b, "INDEX");
                if (index.kind == Node::Kind::Text && index.name == "all") return one(K::ClearList, {}, p);
                return one(K::DeleteFromList, {{"index", list_index(t, b, "INDEX", list)}}, p);
            }
            if (op == "data_insertatlist")
                return one(K::InsertIntoList, {{"item", text_value(t, b, "ITEM")}, {"index", list_index(t, b, "INDEX", list)}}, p);
            if (op == "data_replaceitemoflist")
                return one(K::ReplaceInList, {{"index", list_index(t, b, "INDEX", list)}, {"item", text_value(t, b, "ITEM")}}, p);
            return false;
        }
        if (op == "sensing_askandwait") {
            ensure_answer();
            return one(K::Ask, {{"question", text_value(t, b, "QUESTION")}}, {{"variable", "answer"}});
        }
        if (op == "procedures_call") return inline_call(t, id, b, out, reason);
        return false;
    }

    bool inline_call(const Target& t, const std::string&, const json& call, std::vector<Brick>& out, std::string& reason) {
        const json& mutation = call.value("mutation", json::object());
        std::string proccode = mutation.value("proccode", std::string());
        for (const auto& frame : inline_)
            if (frame.proccode == proccode) return reason = "recursive custom block '" + proccode + "'", false;

        const json* definition = nullptr;
        const json* prototype = nullptr;
        std::string definition_id;
        for (const auto& [bid, b] : blocks(t).items()) {
            if (!b.is_object() || b.value("opcode", std::string()) != "procedures_definition") continue;
            auto proto_id = input_block(b, "custom_block");
            const json* proto = proto_id ? block(t, *proto_id) : nullptr;
            if (proto && proto->value("mutation", json::object()).value("proccode", std::string()) == proccode) {
                definition = &b;
                prototype = proto;
                definition_id = bid;
                break;
            }
        }
        if (!definition) return reason = "custom block '" + proccode + "' has no definition in this sprite", false;

        const json& proto_mutation = (*prototype)["mutation"];
        auto decode_list = [](const json& m, const char* key) {
            std::vector<std::string> out;
            if (!m.contains(key)) return out;
            json list = m[key].is_string() ? json::parse(m[key].get<std::string>()) : m[key];
            for (const auto& v : list) out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
            return out;
        };
        auto ids = decode_list(proto_mutation, "argumentids");
        auto names = decode_list(proto_mutation, "argumentnames");
        auto defaults = decode_list(proto_mutation, "argumentdefaults");
        InlineFrame frame;
        frame.proccode = proccode;
        for (std::size_t i = 0; i < ids.size() && i < names.size(); ++i) {
            bool boolean = i < defaults.size() && defaults[i] == "false";
            Node fallback = boolean ? Node::make_call(Function::False, {}) : Node::make_text("");
            frame.args[names[i]] = value(t, call, ids[i], fallback);
        }
        const json warp = proto_mutation.value("warp", json(false));
        if ((warp.is_string() && warp.get<std::string>() == "true") || (warp.is_boolean() && warp.get<bool>()))
            report().warnings.push_back(t.scratch_name + ": custom block '" + proccode + "' runs with screen refresh");
        mapped(t, definition_id, "procedures_definition");
        inline_.push_back(std::move(frame));
        const json& next = (*definition)["next"];
        stack(t, next.is_string() ? std::optional(next.get<std::string>()) : std::nullopt, out);
        inline_.pop_back();
        return true;
    }

    void convert_scripts(const Target& t) {
        SpriteObject& obj = object(t);
        std::vector<Script> scripts;
        const json& src = *t.source;

        std::vector<Brick> setup;
        if (!t.stage) {
            double x = src.value("x", 0.0), y = src.value("y", 0.0);
            if (x != 0.0 || y != 0.0) setup.push_back(brick(K::PlaceAt, {{"x", Node::make_number(x)}, {"y", Node::make_number(y)}}));
            double dir = src.value("direction", 90.0);
            if (dir != 90.0) setup.push_back(brick(K::PointInDirection, {{"degrees", Node::make_number(dir)}}));
            double size = src.value("size", 100.0);
            if (size != 100.0) setup.push_back(brick(K::SetSize, {{"size", Node::make_number(size)}}));
            if (!src.value("visible", true)) setup.push_back(brick(K::Hide));
        }
        double volume = src.value("volume", 100.0);
        if (volume != 100.0) setup.push_back(brick(K::SetVolume, {{"volume", Node::make_number(volume)}}));
        std::size_t costume = src.value("currentCostume", 0);
        if (costume != 0 && costume < obj.looks.size()) setup.push_back(brick(K::SwitchToLook, {}, {{"look", obj.looks[costume].name}}));
        if (!setup.empty()) {
            Script s;
            s.bricks = std::move(setup);
            scripts.push_back(std::move(s));
        }

        for (const auto& [id, b] : blocks(t).items()) {
            if (!b.is_object() || !b.value("topLevel", false)) continue;
            std::string op = b.value("opcode", std::string());
            Script s;
            if (op == "event_whenflagclicked") {
                s.hat = HatKind::WhenProgramStarted;
            } else if (op == "event_whenthisspriteclicked" || (op == "event_whenstageclicked" && t.stage)) {
                s.hat = HatKind::WhenTapped;
            } else if (op == "event_whenbroadcastreceived") {
                s.hat = HatKind::WhenBroadcastReceived;
                s.message = field(b, "BROADCAST_OPTION").value_or("");
                if (s.message.empty()) {
                    unsupported(t, id, op, "empty message");
                    continue;
                }
            } else if (op == "control_start_as_clone" && !t.stage) {
                s.hat = HatKind::WhenCloned;
            } else {
                if (op.rfind("event_when", 0) == 0 || op == "control_start_as_clone") unsupported(t, id, op, "hat not in the mapping table");
                continue;
            }
            mapped(t, id, op);
            const json& next = b["next"];
            stack(t, next.is_string() ? std::optional(next.get<std::string>()) : std::nullopt, s.bricks);
            scripts.push_back(std::move(s));
        }
        obj.scripts = std::move(scripts);
    }

    zip::Entries files_;
    json manifest_;
    Conversion out_;
    std::vector<Target> targets_;
    std::map<std::string, std::string> variable_names_;  // Scratch id -> name
    std::map<std::string, std::string> list_names_;
    std::map<std::string, bool> status_;  // block id -> mapped (true) / unsupported (false)
    std::map<std::string, std::string> opcode_of_;
    std::vector<InlineFrame> inline_;
};

}  // namespace

Conversion convert_scratch(ByteView sb3, const std::string& project_name) { return Converter(sb3, project_name).run(); }

std::string format_conversion_report(const ConversionReport& report) {
    std::string out = "Scratch blocks: " + std::to_string(report.total) + " total, " + std::to_string(report.mapped) + " mapped, " +
                      std::to_string(report.unsupported.size()) + " unsupported\n";
    for (const auto& u : report.unsupported) out += "  unsupported " + u.opcode + " in " + u.target + " (" + u.reason + ")\n";
    for (const auto& w : report.warnings) out += "  warning: " + w + "\n";
    out += "total=" + std::to_string(report.total) + "\n";
    out += "mapped=" + std::to_string(report.mapped) + "\n";
    out += "unsupported=" + std::to_string(report.unsupported.size()) + "\n";
    for (const auto& [op, n] : report.mapped_by_opcode) out += "mapped." + op + "=" + std::to_string(n) + "\n";
    for (const auto& u : report.unsupported)
        out += "unsupported.block=" + text::percent_escape(u.target) + "," + text::percent_escape(u.block_id) + "," + u.opcode + "," +
               text::percent_escape(u.reason) + "\n";
    for (const auto& w : report.warnings) out += "warning=" + text::percent_escape(w) + "\n";
    return out;
}

}  // namespace brickvm::tools
