#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "brickvm/model/project.hpp"

namespace brickvm::tools {

class MergeConflict : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Content fingerprint of an object: its canonical XML with every asset path
/// replaced by the hash of the asset's bytes, so archive naming never matters.
std::uint64_t object_fingerprint(const model::SpriteObject& object, const model::Project& owner);

/// Fingerprints of every element: objects (scoped by scene name), global
/// variables and global lists (by name).
std::set<std::string> fingerprint_set(const model::Project& project);

struct Rename {
    std::string scene;
    std::string from;  // name in the second project
    std::string to;    // name in the merged project
};

struct MergeResult {
    model::Project project;
    std::vector<Rename> renames;
    int shared_objects = 0;  // objects of b already present in a
};

/// Union of two projects with the same stage size. a's elements keep their
/// order; b's novel elements follow in b's order. A novel b object whose
/// name is taken is suffixed " (2)", " (3)", ... and its clone bricks that
/// name itself follow the rename. Throws MergeConflict on a stage mismatch.
MergeResult merge(const model::Project& a, const model::Project& b);

/// Undoes the renames of a merge, so fingerprints can be compared with the inputs'.
model::Project undo_renames(model::Project merged, const std::vector<Rename>& renames);

/// Text report: one line per rename plus totals.
std::string format_merge_report(const MergeResult& result);

}  // namespace brickvm::tools
