#pragma once

#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "brickvm/formula/evaluator.hpp"
#include "brickvm/formula/tree.hpp"
#include "brickvm/model/bricks.hpp"
#include "brickvm/support/bytes.hpp"

namespace brickvm::model {

struct Brick {
    BrickKind kind = BrickKind::Note;
    std::map<std::string, formula::FormulaTree> formulas;
    std::map<std::string, std::string> params;

    /// Throws std::out_of_range for a slot the brick does not have.
    const formula::FormulaTree& formula(const std::string& slot) const { return formulas.at(slot); }
    const std::string& param(const std::string& name) const { return params.at(name); }

    friend bool operator==(const Brick&, const Brick&) = default;
};

/// Builds a brick from formula text; throws formula::FormulaError on bad text.
Brick make_brick(BrickKind kind, std::initializer_list<std::pair<std::string, std::string>> formulas = {},
                 std::initializer_list<std::pair<std::string, std::string>> params = {});

struct Script {
    HatKind hat = HatKind::WhenProgramStarted;
    std::string message;  // WhenBroadcastReceived only
    std::vector<Brick> bricks;

    friend bool operator==(const Script&, const Script&) = default;
};

struct Look {
    std::string name;
    std::string file;  // archive path, "images/…png"
    int width = 0;     // filled from the image on load
    int height = 0;

    friend bool operator==(const Look&, const Look&) = default;
};

struct SoundRef {
    std::string name;
    std::string file;  // archive path, "sounds/…"

    friend bool operator==(const SoundRef&, const SoundRef&) = default;
};

struct SpriteObject {
    std::string name;
    std::vector<Look> looks;
    std::vector<SoundRef> sounds;
    std::vector<Script> scripts;
    formula::VariableMap local_variables;
    formula::ListMap local_lists;

    friend bool operator==(const SpriteObject&, const SpriteObject&) = default;
};

struct Scene {
    std::string name;
    std::vector<SpriteObject> objects;  // objects[0] is the background

    friend bool operator==(const Scene&, const Scene&) = default;
};

struct ProjectHeader {
    std::string name;
    int stage_width = 1080;
    int stage_height = 1920;
    std::string language_version = "1.0";

    friend bool operator==(const ProjectHeader&, const ProjectHeader&) = default;
};

struct Project {
    ProjectHeader header;
    std::vector<Scene> scenes;
    formula::VariableMap global_variables;
    formula::ListMap global_lists;
    std::map<std::string, Bytes> assets;  // archive path -> content, code.xml excluded

    friend bool operator==(const Project&, const Project&) = default;
};

/// A project with one scene holding only an empty background object.
Project empty_project(std::string name = "Untitled");

class ProjectError : public std::runtime_error {
public:
    enum class Kind { MalformedArchive, MalformedXml, SchemaViolation, MissingAsset };

    ProjectError(Kind kind, std::string path, const std::string& message);

    Kind kind() const noexcept { return kind_; }
    /// Location of the problem: an element path inside code.xml or an archive path.
    const std::string& path() const noexcept { return path_; }

private:
    Kind kind_;
    std::string path_;
};

const char* kind_name(ProjectError::Kind kind);

/// Checks every structural invariant; throws ProjectError naming the first
/// offending element. Non-fatal findings (unused assets) go to `notes`.
void validate(const Project& project, std::vector<std::string>* notes = nullptr);

}  // namespace brickvm::model
