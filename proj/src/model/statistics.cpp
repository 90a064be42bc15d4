#include "brickvm/model/statistics.hpp"

#include <algorithm>
#include <set>

#include "brickvm/formula/syntax.hpp"

namespace brickvm::model {

CodeStatistics compute_statistics(const Project& project) {
    CodeStatistics s;
    std::array<std::set<BrickKind>, kCategoryCount> kinds;
    s.scenes = static_cast<int>(project.scenes.size());
    s.globals = static_cast<int>(project.global_variables.size() + project.global_lists.size());
    for (const auto& scene : project.scenes) {
        for (const auto& object : scene.objects) {
            ++s.objects;
            s.looks += static_cast<int>(object.looks.size());
            s.sounds += static_cast<int>(object.sounds.size());
            s.locals += static_cast<int>(object.local_variables.size() + object.local_lists.size());
            for (const auto& script : object.scripts) {
                ++s.scripts;
                for (const auto& brick : script.bricks) {
                    auto c = static_cast<std::size_t>(category_of(brick.kind));
                    ++s.bricks;
                    ++s.categories[c].total;
                    kinds[c].insert(brick.kind);
                }
            }
        }
    }
    for (std::size_t c = 0; c < kCategoryCount; ++c) s.categories[c].distinct = static_cast<int>(kinds[c].size());
    return s;
}

namespace {

void object_summary(std::string& out, const SpriteObject& object) {
    out += "Object:\t" + object.name + "\n";
    out += "Looks:\t" + std::to_string(object.looks.size()) + "\n";
    out += "Sounds:\t" + std::to_string(object.sounds.size()) + "\n";
    out += "Scripts:\t" + std::to_string(object.scripts.size()) + "\n";
}

void category_line(std::string& out, const CodeStatistics& s, Category c) {
    const auto& cc = s[c];
    out += std::string(category_label(c)) + " BRICKS: Total: " + std::to_string(cc.total) +
           " Different: " + std::to_string(cc.distinct) + "\n";
}

}  // namespace

std::string format_statistics(const Project& project, const CodeStatistics& s) {
    std::string out;
    auto total = [&](const char* label, int n) { out += std::string("Total number of ") + label + ":\t" + std::to_string(n) + "\n"; };
    total("SCENES", s.scenes);
    total("SCRIPTS", s.scripts);
    total("BRICKS", s.bricks);
    total("OBJECTS", s.objects);
    total("LOOKS", s.looks);
    total("SOUNDS", s.sounds);
    total("GLOBALS", s.globals);
    total("LOCALS", s.locals);
    out += "\n";
    category_line(out, s, Category::Event);
    category_line(out, s, Category::Control);
    category_line(out, s, Category::Motion);
    out += "\n";
    category_line(out, s, Category::Sound);
    category_line(out, s, Category::Looks);
    category_line(out, s, Category::Pen);
    category_line(out, s, Category::Data);

    out += "\nBACKGROUND\n";
    for (const auto& scene : project.scenes) {
        out += "\n";
        object_summary(out, scene.objects.front());
    }
    out += "\nOBJECTS\n";
    for (const auto& scene : project.scenes) {
        for (std::size_t i = 1; i < scene.objects.size(); ++i) {
            out += "\n";
            object_summary(out, scene.objects[i]);
        }
    }
    return out;
}

std::string brick_display(const Brick& brick) {
    const BrickInfo& bi = info(brick.kind);
    std::string out;
    std::string_view t = bi.display;
    for (std::size_t i = 0; i < t.size();) {
        if (t[i] != '{') {
            out += t[i++];
            continue;
        }
        auto close = t.find('}', i);
        std::string name(t.substr(i + 1, close - i - 1));
        if (auto f = brick.formulas.find(name); f != brick.formulas.end()) {
            out += formula::serialize_formula(f->second, formula::Notation::Display);
        } else if (auto p = brick.params.find(name); p != brick.params.end()) {
            out += brick.kind == BrickKind::SetMotionType ? std::string(motion_type_display(p->second)) : p->second;
        }
        i = close + 1;
    }
    return out;
}

std::string render_script(const Script& script) {
    std::string out = hat_display(script.hat, script.message) + "\n";
    int depth = 0;
    for (const auto& brick : script.bricks) {
        Nesting n = info(brick.kind).nesting;
        if (n == Nesting::CloseLoop || n == Nesting::CloseIf || n == Nesting::Else) depth = std::max(0, depth - 1);
        out += std::string(static_cast<std::size_t>(depth) * 2, ' ') + brick_display(brick) + "\n";
        if (n == Nesting::OpenLoop || n == Nesting::OpenIf || n == Nesting::Else) ++depth;
    }
    return out;
}

std::string render_code_view(const SpriteObject& object) {
    std::string out;
    for (const auto& script : object.scripts) {
        if (!out.empty()) out += "\n";
        out += render_script(script);
    }
    return out;
}

std::string render_code_view(const Project& project) {
    std::string out;
    for (const auto& scene : project.scenes) {
        for (const auto& object : scene.objects) {
            auto text = render_code_view(object);
            if (text.empty()) continue;
            if (!out.empty()) out += "\n";
            out += text;
        }
    }
    return out;
}

}  // namespace brickvm::model
