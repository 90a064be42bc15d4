#include "brickvm/model/project.hpp"

#include <set>

#include "brickvm/formula/syntax.hpp"
#include "brickvm/support/png.hpp"

namespace brickvm::model {

Brick make_brick(BrickKind kind, std::initializer_list<std::pair<std::string, std::string>> formulas,
                 std::initializer_list<std::pair<std::string, std::string>> params) {
    Brick b;
    b.kind = kind;
    for (const auto& [slot, text] : formulas) b.formulas.emplace(slot, formula::parse_formula(text));
    for (const auto& [name, value] : params) b.params.emplace(name, value);
    return b;
}

Project empty_project(std::string name) {
    Project p;
    p.header.name = std::move(name);
    Scene scene;
    scene.name = "Scene 1";
    scene.objects.emplace_back().name = "Background";
    p.scenes.push_back(std::move(scene));
    return p;
}

ProjectError::ProjectError(Kind kind, std::string path, const std::string& message)
    : std::runtime_error(std::string(kind_name(kind)) + " at " + path + ": " + message), kind_(kind), path_(std::move(path)) {}

const char* kind_name(ProjectError::Kind kind) {
    switch (kind) {
        case ProjectError::Kind::MalformedArchive: return "MalformedArchive";
        case ProjectError::Kind::MalformedXml: return "MalformedXml";
        case ProjectError::Kind::SchemaViolation: return "SchemaViolation";
        case ProjectError::Kind::MissingAsset: return "MissingAsset";
    }
    return "?";
}

namespace {

[[noreturn]] void violation(const std::string& path, const std::string& message) {
    throw ProjectError(ProjectError::Kind::SchemaViolation, path, message);
}

std::string at(const std::string& parent, std::string_view element, std::size_t index) {
    return parent + "/" + std::string(element) + "[" + std::to_string(index + 1) + "]";
}

template <typename T>
void require_unique_names(const std::vector<T>& items, const std::string& path, std::string_view what) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].name.empty()) violation(at(path, what, i), std::string(what) + " without a name");
        if (!seen.insert(items[i].name).second)
            violation(at(path, what, i), "duplicate " + std::string(what) + " name '" + items[i].name + "'");
    }
}

void validate_bricks(const Script& script, const SpriteObject& object, const Project& project, const std::string& path) {
    std::vector<Nesting> open;  // OpenLoop / OpenIf / Else
    for (std::size_t i = 0; i < script.bricks.size(); ++i) {
        const Brick& b = script.bricks[i];
        const BrickInfo& bi = info(b.kind);
        std::string where = at(path, "brick", i) + " (" + std::string(bi.name) + ")";

        if (b.formulas.size() != bi.formula_slots.size()) violation(where, "wrong number of formula slots");
        for (auto slot : bi.formula_slots) {
            if (!b.formulas.count(std::string(slot))) violation(where, "missing formula slot '" + std::string(slot) + "'");
        }
        if (b.params.size() != bi.params.size()) violation(where, "wrong number of parameters");
        for (const auto& spec : bi.params) {
            auto it = b.params.find(std::string(spec.name));
            if (it == b.params.end()) violation(where, "missing parameter '" + std::string(spec.name) + "'");
            const std::string& v = it->second;
            switch (spec.kind) {
                case ParamKind::Text:
                    if (v.empty() && spec.name != "text") violation(where, "empty parameter '" + std::string(spec.name) + "'");
                    break;
                case ParamKind::Variable:
                    if (!object.local_variables.count(v) && !project.global_variables.count(v))
                        violation(where, "undeclared variable '" + v + "'");
                    break;
                case ParamKind::List:
                    if (!object.local_lists.count(v) && !project.global_lists.count(v))
                        violation(where, "undeclared list '" + v + "'");
                    break;
                case ParamKind::MotionType:
                    if (v != kMotionNone && v != kMotionStatic && v != kMotionDynamic)
                        violation(where, "unknown motion type '" + v + "'");
                    break;
            }
        }

        switch (bi.nesting) {
            case Nesting::None: break;
            case Nesting::OpenLoop:
            case Nesting::OpenIf: open.push_back(bi.nesting); break;
            case Nesting::CloseLoop:
                if (open.empty() || open.back() != Nesting::OpenLoop) violation(where, "loop end without a matching loop");
                open.pop_back();
                break;
            case Nesting::Else:
                if (open.empty() || open.back() != Nesting::OpenIf) violation(where, "else without a matching if");
                open.back() = Nesting::Else;
                break;
            case Nesting::CloseIf:
                if (open.empty() || (open.back() != Nesting::OpenIf && open.back() != Nesting::Else))
                    violation(where, "end if without a matching if");
                open.pop_back();
                break;
        }
    }
    if (!open.empty()) violation(path, "unclosed " + std::string(open.back() == Nesting::OpenLoop ? "loop" : "if") + " block");
}

}  // namespace

void validate(const Project& project, std::vector<std::string>* notes) {
    const std::string root = "/program";
    if (project.header.stage_width <= 0 || project.header.stage_height <= 0)
        violation(root + "/header", "stage dimensions must be positive");
    if (project.scenes.empty()) violation(root + "/scenes", "a project needs at least one scene");
    require_unique_names(project.scenes, root + "/scenes", "scene");
    for (const auto& [name, _] : project.global_variables) {
        if (name.empty()) violation(root + "/variables", "variable without a name");
    }
    for (const auto& [name, _] : project.global_lists) {
        if (name.empty()) violation(root + "/lists", "list without a name");
    }

    std::set<std::string> referenced;
    for (std::size_t s = 0; s < project.scenes.size(); ++s) {
        const Scene& scene = project.scenes[s];
        std::string spath = at(root + "/scenes", "scene", s);
        if (scene.objects.empty()) violation(spath, "a scene needs at least a background object");
        require_unique_names(scene.objects, spath, "object");

        for (std::size_t o = 0; o < scene.objects.size(); ++o) {
            const SpriteObject& object = scene.objects[o];
            std::string opath = at(spath, "object", o);
            require_unique_names(object.looks, opath + "/looks", "look");
            require_unique_names(object.sounds, opath + "/sounds", "sound");
            for (const auto& [name, _] : object.local_variables) {
                if (name.empty()) violation(opath + "/variables", "variable without a name");
            }
            for (const auto& [name, _] : object.local_lists) {
                if (name.empty()) violation(opath + "/lists", "list without a name");
            }

            for (std::size_t l = 0; l < object.looks.size(); ++l) {
                const Look& look = object.looks[l];
                std::string lpath = at(opath + "/looks", "look", l);
                if (look.file.rfind("images/", 0) != 0) violation(lpath, "look files live under images/");
                auto asset = project.assets.find(look.file);
                if (asset == project.assets.end())
                    throw ProjectError(ProjectError::Kind::MissingAsset, look.file, "look '" + look.name + "' has no image");
                referenced.insert(look.file);
                png::Image image;
                try {
                    image = png::decode(asset->second);
                } catch (const png::PngError& e) {
                    violation(lpath, "image " + look.file + " is not a decodable PNG: " + e.what());
                }
                if (image.width < 1 || image.height < 1) violation(lpath, "image has no pixels");
                if (static_cast<int>(image.width) != look.width || static_cast<int>(image.height) != look.height)
                    violation(lpath, "declared size " + std::to_string(look.width) + "x" + std::to_string(look.height) +
                                         " differs from the image");
            }
            for (std::size_t k = 0; k < object.sounds.size(); ++k) {
                const SoundRef& sound = object.sounds[k];
                if (sound.file.rfind("sounds/", 0) != 0)
                    violation(at(opath + "/sounds", "sound", k), "sound files live under sounds/");
                if (!project.assets.count(sound.file))
                    throw ProjectError(ProjectError::Kind::MissingAsset, sound.file, "sound '" + sound.name + "' has no file");
                referenced.insert(sound.file);
            }

            for (std::size_t i = 0; i < object.scripts.size(); ++i) {
                const Script& script = object.scripts[i];
                std::string cpath = at(opath + "/scripts", "script", i);
                bool wants_message = script.hat == HatKind::WhenBroadcastReceived;
                if (wants_message && script.message.empty()) violation(cpath, "broadcast receiver without a message");
                if (!wants_message && !script.message.empty()) violation(cpath, "only broadcast receivers carry a message");
                validate_bricks(script, object, project, cpath);
            }
        }
    }

    if (notes) {
        for (const auto& [path, _] : project.assets) {
            if (!referenced.count(path)) notes->push_back("unused asset " + path);
        }
    }
}

}  // namespace brickvm::model
