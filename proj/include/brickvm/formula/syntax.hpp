#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "brickvm/formula/tree.hpp"

namespace brickvm::formula {

class FormulaError : public std::runtime_error {
public:
    enum class Kind { Syntax, UnknownIdentifier, Arity };

    FormulaError(Kind kind, std::size_t position, const std::string& message);

    Kind kind() const noexcept { return kind_; }
    /// Byte offset into the source text.
    std::size_t position() const noexcept { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

/// Parses the calculator-style formula syntax (see docs/formula-grammar.md).
FormulaTree parse_formula(std::string_view text);

enum class Notation {
    Canonical,  // × ≠ ≤ ≥ operators, stored in code.xml
    Ascii,      // * != <= >= operators
    Display,    // Ascii, plus negative literals spaced as "- 10"; used by the code view
};

/// Minimal parenthesization; parse_formula(serialize_formula(t)) == t.
std::string serialize_formula(const FormulaTree& tree, Notation notation = Notation::Canonical);

}  // namespace brickvm::formula
