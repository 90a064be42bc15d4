#pragma once

// Brute-force statistics: walks the saved code.xml text with its own
// category table instead of the model's brick table.

#include <string>

#include "brickvm/model/statistics.hpp"

namespace brickvm::testing {

model::CodeStatistics oracle_statistics(const std::string& code_xml);

}  // namespace brickvm::testing
