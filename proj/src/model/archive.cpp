#include "brickvm/model/archive.hpp"

#include <charconv>

#include "brickvm/formula/syntax.hpp"
#include "brickvm/support/text.hpp"
#include "brickvm/support/zip.hpp"

namespace brickvm::model {
namespace {

constexpr const char* kCodeXml = "code.xml";

[[noreturn]] void violation(const std::string& path, const std::string& message) {
    throw ProjectError(ProjectError::Kind::SchemaViolation, path, message);
}

std::string at(const std::string& parent, std::string_view element, std::size_t index) {
    return parent + "/" + std::string(element) + "[" + std::to_string(index + 1) + "]";
}

// ---- writing ----

void put_value(xml::Element& e, const formula::Value& v) {
    e.set("type", v.type_name());
    e.set("value", v.as_text());
}

void put_variables(xml::Element& parent, const formula::VariableMap& vars, const formula::ListMap& lists) {
    auto& ve = parent.add("variables");
    for (const auto& [name, value] : vars) put_value(ve.add("variable").set("name", name), value);
    auto& le = parent.add("lists");
    for (const auto& [name, items] : lists) {
        auto& list = le.add("list").set("name", name);
        for (const auto& item : items) put_value(list.add("item"), item);
    }
}

void put_object(xml::Element& parent, const SpriteObject& object) {
    auto& oe = parent.add("object").set("name", object.name);
    auto& looks = oe.add("looks");
    for (const auto& l : object.looks) {
        looks.add("look")
            .set("name", l.name)
            .set("file", l.file)
            .set("width", std::to_string(l.width))
            .set("height", std::to_string(l.height));
    }
    auto& sounds = oe.add("sounds");
    for (const auto& s : object.sounds) sounds.add("sound").set("name", s.name).set("file", s.file);
    put_variables(oe, object.local_variables, object.local_lists);
    auto& scripts = oe.add("scripts");
    for (const auto& script : object.scripts) {
        auto& se = scripts.add("script").set("hat", std::string(hat_name(script.hat)));
        if (!script.message.empty()) se.set("message", script.message);
        for (const auto& brick : script.bricks) {
            auto& be = se.add("brick").set("kind", std::string(info(brick.kind).name));
            for (const auto& [name, value] : brick.params) be.set(name, value);
            for (const auto& [slot, tree] : brick.formulas) be.add("formula").set("slot", slot).text = formula::serialize_formula(tree);
        }
    }
}

// ---- reading ----

const std::string& required(const xml::Element& e, std::string_view key, const std::string& path) {
    const std::string* v = e.attribute(key);
    if (!v) violation(path, "missing attribute '" + std::string(key) + "'");
    return *v;
}

int read_int(const xml::Element& e, std::string_view key, const std::string& path) {
    const std::string& s = required(e, key, path);
    int v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) violation(path, "attribute '" + std::string(key) + "' is not an integer");
    return v;
}

formula::Value read_value(const xml::Element& e, const std::string& path) {
    const std::string& type = required(e, "type", path);
    const std::string& value = required(e, "value", path);
    if (type == "text") return value;
    if (type == "boolean") {
        if (value == "true") return true;
        if (value == "false") return false;
        violation(path, "boolean value must be true or false");
    }
    if (type == "number") {
        auto n = text::parse_number(value);
        if (!n) violation(path, "malformed number '" + value + "'");
        return *n;
    }
    violation(path, "unknown value type '" + type + "'");
}

void read_variables(const xml::Element& parent, const std::string& path, formula::VariableMap& vars, formula::ListMap& lists) {
    if (const auto* ve = parent.child("variables")) {
        auto items = ve->children_named("variable");
        for (std::size_t i = 0; i < items.size(); ++i) {
            std::string vpath = at(path + "/variables", "variable", i);
            const std::string& name = required(*items[i], "name", vpath);
            if (!vars.emplace(name, read_value(*items[i], vpath)).second) violation(vpath, "duplicate variable name '" + name + "'");
        }
    }
    if (const auto* le = parent.child("lists")) {
        auto items = le->children_named("list");
        for (std::size_t i = 0; i < items.size(); ++i) {
            std::string lpath = at(path + "/lists", "list", i);
            const std::string& name = required(*items[i], "name", lpath);
            std::vector<formula::Value> values;
            auto entries = items[i]->children_named("item");
            for (std::size_t k = 0; k < entries.size(); ++k) values.push_back(read_value(*entries[k], at(lpath, "item", k)));
            if (!lists.emplace(name, std::move(values)).second) violation(lpath, "duplicate list name '" + name + "'");
        }
    }
}

Brick read_brick(const xml::Element& e, const std::string& path) {
    const std::string& kind = required(e, "kind", path);
    auto k = find_brick(kind);
    if (!k) violation(path, "unknown brick kind '" + kind + "'");
    Brick b;
    b.kind = *k;
    for (const auto& [key, value] : e.attributes) {
        if (key != "kind") b.params.emplace(key, value);
    }
    auto slots = e.children_named("formula");
    for (std::size_t i = 0; i < slots.size(); ++i) {
        std::string fpath = at(path, "formula", i);
        const std::string& slot = required(*slots[i], "slot", fpath);
        try {
            if (!b.formulas.emplace(slot, formula::parse_formula(slots[i]->text)).second)
                violation(fpath, "duplicate formula slot '" + slot + "'");
        } catch (const formula::FormulaError& err) {
            violation(fpath, "formula '" + slots[i]->text + "': " + err.what());
        }
    }
    return b;
}

SpriteObject read_object(const xml::Element& e, const std::string& path) {
    SpriteObject o;
    o.name = required(e, "name", path);
    if (const auto* looks = e.child("looks")) {
        auto items = looks->children_named("look");
        for (std::size_t i = 0; i < items.size(); ++i) {
            std::string lpath = at(path + "/looks", "look", i);
            o.looks.push_back(Look{required(*items[i], "name", lpath), required(*items[i], "file", lpath),
                                   read_int(*items[i], "width", lpath), read_int(*items[i], "height", lpath)});
        }
    }
    if (const auto* sounds = e.child("sounds")) {
        auto items = sounds->children_named("sound");
        for (std::size_t i = 0; i < items.size(); ++i) {
            std::string spath = at(path + "/sounds", "sound", i);
            o.sounds.push_back(SoundRef{required(*items[i], "name", spath), required(*items[i], "file", spath)});
        }
    }
    read_variables(e, path, o.local_variables, o.local_lists);
    if (const auto* scripts = e.child("scripts")) {
        auto items = scripts->children_named("script");
        for (std::size_t i = 0; i < items.size(); ++i) {
            std::string cpath = at(path + "/scripts", "script", i);
            Script s;
            const std::string& hat = required(*items[i], "hat", cpath);
            auto h = find_hat(hat);
            if (!h) violation(cpath, "unknown hat '" + hat + "'");
            s.hat = *h;
            if (const auto* m = items[i]->attribute("message")) s.message = *m;
            auto bricks = items[i]->children_named("brick");
            for (std::size_t k = 0; k < bricks.size(); ++k) s.bricks.push_back(read_brick(*bricks[k], at(cpath, "brick", k)));
            o.scripts.push_back(std::move(s));
        }
    }
    return o;
}

}  // namespace

xml::Element to_xml(const Project& project) {
    xml::Element root;
    root.name = "program";
    root.add("header")
        .set("name", project.header.name)
        .set("stage_width", std::to_string(project.header.stage_width))
        .set("stage_height", std::to_string(project.header.stage_height))
        .set("language_version", project.header.language_version);
    put_variables(root, project.global_variables, project.global_lists);
    auto& scenes = root.add("scenes");
    for (const auto& scene : project.scenes) {
        auto& se = scenes.add("scene").set("name", scene.name);
        for (const auto& object : scene.objects) put_object(se, object);
    }
    return root;
}

Project from_xml(const xml::Element& root) {
    const std::string path = "/program";
    if (root.name != "program") violation("/" + root.name, "root element must be <program>");
    Project p;
    const auto* header = root.child("header");
    if (!header) violation(path, "missing <header>");
    p.header.name = required(*header, "name", path + "/header");
    p.header.stage_width = read_int(*header, "stage_width", path + "/header");
    p.header.stage_height = read_int(*header, "stage_height", path + "/header");
    p.header.language_version = required(*header, "language_version", path + "/header");
    read_variables(root, path, p.global_variables, p.global_lists);
    const auto* scenes = root.child("scenes");
    if (!scenes) violation(path, "missing <scenes>");
    auto items = scenes->children_named("scene");
    for (std::size_t i = 0; i < items.size(); ++i) {
        std::string spath = at(path + "/scenes", "scene", i);
        Scene scene;
        scene.name = required(*items[i], "name", spath);
        auto objects = items[i]->children_named("object");
        for (std::size_t k = 0; k < objects.size(); ++k) scene.objects.push_back(read_object(*objects[k], at(spath, "object", k)));
        p.scenes.push_back(std::move(scene));
    }
    return p;
}

Project load_project(ByteView archive, std::vector<std::string>* notes) {
    zip::Entries entries;
    try {
        entries = zip::read(archive);
    } catch (const zip::ZipError& e) {
        throw ProjectError(ProjectError::Kind::MalformedArchive, "<archive>", e.what());
    }
    auto code = entries.find(kCodeXml);
    if (code == entries.end()) throw ProjectError(ProjectError::Kind::MalformedArchive, kCodeXml, "archive has no code.xml");

    xml::Element root;
    try {
        root = xml::parse(to_string(code->second));
    } catch (const xml::XmlError& e) {
        throw ProjectError(ProjectError::Kind::MalformedXml, std::string(kCodeXml) + ":" + std::to_string(e.line()), e.what());
    }
    Project p = from_xml(root);
    entries.erase(code);
    p.assets = std::move(entries);
    validate(p, notes);
    return p;
}

Bytes save_project(const Project& project) {
    zip::Entries entries = project.assets;
    entries[kCodeXml] = to_bytes(xml::write(to_xml(project)));
    return zip::write(entries);
}

std::string canonical_object_xml(const SpriteObject& object) {
    xml::Element holder;
    holder.name = "objects";
    put_object(holder, object);
    return xml::write(holder.children.front());
}

}  // namespace brickvm::model
