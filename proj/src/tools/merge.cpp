#include "brickvm/tools/merge.hpp"

#include <algorithm>

#include "brickvm/model/archive.hpp"
#include "brickvm/support/hash.hpp"

namespace brickvm::tools {

using namespace brickvm::model;

namespace {

std::string content_name(const std::string& file, const Project& owner) {
    auto it = owner.assets.find(file);
    return it == owner.assets.end() ? "missing:" + file : hex64(fnv1a64(it->second));
}

/// Asset path in the merged project for a file of b: kept when free or
/// identical, otherwise a content-derived name.
std::string place_asset(Project& out, const std::string& file, const Bytes& data) {
    auto it = out.assets.find(file);
    if (it == out.assets.end() || it->second == data) {
        out.assets[file] = data;
        return file;
    }
    auto slash = file.find('/');
    auto dot = file.rfind('.');
    std::string ext = dot == std::string::npos || dot < slash ? "" : file.substr(dot);
    std::string base = file.substr(0, slash + 1) + hex64(fnv1a64(data));
    std::string path = base + ext;
    for (int n = 2; out.assets.count(path) && out.assets[path] != data; ++n) path = base + "-" + std::to_string(n) + ext;
    out.assets[path] = data;
    return path;
}

void rename_self_references(SpriteObject& object, const std::string& from, const std::string& to) {
    for (auto& script : object.scripts) {
        for (auto& brick : script.bricks) {
            if (brick.kind != BrickKind::CreateClone) continue;
            auto it = brick.params.find("object");
            if (it != brick.params.end() && it->second == from) it->second = to;
        }
    }
}

bool is_blank(const SpriteObject& o) {
    return o.looks.empty() && o.sounds.empty() && o.scripts.empty() && o.local_variables.empty() && o.local_lists.empty();
}

bool has_object(const Scene& scene, const std::string& name) {
    return std::any_of(scene.objects.begin(), scene.objects.end(), [&](const SpriteObject& o) { return o.name == name; });
}

}  // namespace

std::uint64_t object_fingerprint(const SpriteObject& object, const Project& owner) {
    SpriteObject copy = object;
    for (auto& look : copy.looks) look.file = content_name(look.file, owner);
    for (auto& sound : copy.sounds) sound.file = content_name(sound.file, owner);
    for (auto& look : copy.looks) look.width = look.height = 0;
    Fnv1a64 h;
    h.str(canonical_object_xml(copy));
    return h.value();
}

std::set<std::string> fingerprint_set(const Project& project) {
    std::set<std::string> out;
    for (const auto& scene : project.scenes) {
        for (std::size_t i = 0; i < scene.objects.size(); ++i) {
            const auto& object = scene.objects[i];
            if (i == 0 && is_blank(object)) continue;  // a blank background carries nothing
            out.insert("object " + scene.name + " " + hex64(object_fingerprint(object, project)));
        }
    }
    for (const auto& [name, value] : project.global_variables) out.insert("variable global " + name);
    for (const auto& [name, items] : project.global_lists) out.insert("list global " + name);
    return out;
}

MergeResult merge(const Project& a, const Project& b) {
    if (a.header.stage_width != b.header.stage_width || a.header.stage_height != b.header.stage_height) {
        throw MergeConflict("stage sizes differ: " + std::to_string(a.header.stage_width) + "x" + std::to_string(a.header.stage_height) +
                            " vs " + std::to_string(b.header.stage_width) + "x" + std::to_string(b.header.stage_height));
    }
    MergeResult result;
    Project& out = result.project;
    out = a;

    for (const auto& [name, value] : b.global_variables) out.global_variables.try_emplace(name, value);
    for (const auto& [name, items] : b.global_lists) out.global_lists.try_emplace(name, items);

    for (const auto& scene_b : b.scenes) {
        bool blank = scene_b.objects.size() == 1 && is_blank(scene_b.objects[0]);
        auto scene_it = std::find_if(out.scenes.begin(), out.scenes.end(), [&](const Scene& s) { return s.name == scene_b.name; });
        if (scene_it == out.scenes.end()) {
            if (blank) continue;
            Scene& fresh = out.scenes.emplace_back();
            fresh.name = scene_b.name;
            scene_it = std::prev(out.scenes.end());
        }
        std::size_t scene_index = static_cast<std::size_t>(scene_it - out.scenes.begin());

        std::set<std::uint64_t> present;
        for (const auto& object : out.scenes[scene_index].objects) present.insert(object_fingerprint(object, out));

        for (std::size_t i = 0; i < scene_b.objects.size(); ++i) {
            const SpriteObject& object_b = scene_b.objects[i];
            bool background = i == 0 && !out.scenes[scene_index].objects.empty();
            if (background && is_blank(object_b)) continue;
            if (present.count(object_fingerprint(object_b, b))) {
                ++result.shared_objects;
                continue;
            }
            SpriteObject copy = object_b;
            for (auto& look : copy.looks) look.file = place_asset(out, look.file, b.assets.at(look.file));
            for (auto& sound : copy.sounds) sound.file = place_asset(out, sound.file, b.assets.at(sound.file));
            Scene& scene = out.scenes[scene_index];
            // b's background takes over a blank background slot.
            bool takeover = background && is_blank(scene.objects[0]);
            if (takeover) scene.objects.erase(scene.objects.begin());
            if (has_object(scene, copy.name)) {
                std::string name;
                for (int n = 2;; ++n) {
                    name = object_b.name + " (" + std::to_string(n) + ")";
                    if (!has_object(scene, name)) break;
                }
                rename_self_references(copy, object_b.name, name);
                copy.name = name;
                result.renames.push_back({scene_b.name, object_b.name, name});
            }
            present.insert(object_fingerprint(copy, out));
            if (takeover) scene.objects.insert(scene.objects.begin(), std::move(copy));
            else scene.objects.push_back(std::move(copy));
        }
    }
    return result;
}

Project undo_renames(Project merged, const std::vector<Rename>& renames) {
    for (const auto& r : renames) {
        for (auto& scene : merged.scenes) {
            if (scene.name != r.scene) continue;
            for (auto& object : scene.objects) {
                if (object.name != r.to) continue;
                rename_self_references(object, r.to, r.from);
                object.name = r.from;
            }
        }
    }
    return merged;
}

std::string format_merge_report(const MergeResult& result) {
    std::string out;
    for (const auto& r : result.renames) out += "renamed " + r.scene + "/" + r.from + " -> " + r.to + "\n";
    std::size_t objects = 0;
    for (const auto& scene : result.project.scenes) objects += scene.objects.size();
    out += "scenes " + std::to_string(result.project.scenes.size()) + "\n";
    out += "objects " + std::to_string(objects) + "\n";
    out += "shared " + std::to_string(result.shared_objects) + "\n";
    out += "renames " + std::to_string(result.renames.size()) + "\n";
    return out;
}

}  // namespace brickvm::tools
