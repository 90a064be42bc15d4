#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "brickvm/model/project.hpp"
#include "brickvm/support/bytes.hpp"

namespace brickvm::tools {

class MalformedSource : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One row of the Scratch mapping table.
struct ScratchMapping {
    std::string_view opcode;
    std::string_view target;  // Catrobat hat, brick(s) or formula
    std::string_view note;    // behavioral difference, if any
};

/// Every Scratch opcode the converter understands.
const std::vector<ScratchMapping>& scratch_mapping();

struct UnsupportedBlock {
    std::string target;    // sprite name, or "Stage"
    std::string block_id;
    std::string opcode;
    std::string reason;
};

struct ConversionReport {
    int total = 0;   // non-shadow source blocks
    int mapped = 0;  // converted according to the mapping table
    std::vector<UnsupportedBlock> unsupported;
    std::vector<std::string> warnings;
    std::map<std::string, int> mapped_by_opcode;
};

struct Conversion {
    model::Project project;
    ConversionReport report;
};

/// Converts a Scratch 3 archive (project.json plus assets). Throws
/// MalformedSource when the archive or manifest cannot be read; anything
/// merely unsupported is reported and replaced by Note bricks.
Conversion convert_scratch(ByteView sb3, const std::string& project_name = "Scratch project");

/// Human-readable summary followed by machine-readable `key=value` lines.
std::string format_conversion_report(const ConversionReport& report);

}  // namespace brickvm::tools
