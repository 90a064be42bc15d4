#pragma once

#include <array>
#include <string>

#include "brickvm/model/bricks.hpp"
#include "brickvm/model/project.hpp"

namespace brickvm::model {

struct CategoryCount {
    int total = 0;
    int distinct = 0;

    friend bool operator==(const CategoryCount&, const CategoryCount&) = default;
};

/// Counting rule: a hat counts as a script, not a brick; loop/if end markers
/// are Control bricks; the background counts as an object; globals/locals
/// count variables and lists together.
struct CodeStatistics {
    int scenes = 0;
    int scripts = 0;
    int bricks = 0;
    int objects = 0;
    int looks = 0;
    int sounds = 0;
    int globals = 0;
    int locals = 0;
    std::array<CategoryCount, kCategoryCount> categories{};

    const CategoryCount& operator[](Category c) const { return categories[static_cast<std::size_t>(c)]; }

    friend bool operator==(const CodeStatistics&, const CodeStatistics&) = default;
};

CodeStatistics compute_statistics(const Project& project);

/// Key/value text block with the project-details field names, followed by
/// per-object summaries.
std::string format_statistics(const Project& project, const CodeStatistics& stats);

/// One line per hat and brick, nested blocks indented by two spaces, scripts
/// separated by a blank line. Objects without scripts contribute nothing.
std::string render_code_view(const Project& project);
std::string render_code_view(const SpriteObject& object);
std::string render_script(const Script& script);
std::string brick_display(const Brick& brick);

}  // namespace brickvm::model
