#pragma once

#include <string>
#include <variant>

namespace brickvm::formula {

/// Result of evaluating a formula: a number, a text or a boolean.
class Value {
public:
    Value() : v_(0.0) {}
    Value(double n) : v_(n) {}  // NOLINT(google-explicit-constructor)
    Value(int n) : v_(static_cast<double>(n)) {}  // NOLINT(google-explicit-constructor)
    Value(bool b) : v_(b) {}  // NOLINT(google-explicit-constructor)
    Value(std::string s) : v_(std::move(s)) {}  // NOLINT(google-explicit-constructor)
    Value(const char* s) : v_(std::string(s)) {}  // NOLINT(google-explicit-constructor)

    bool is_number() const { return std::holds_alternative<double>(v_); }
    bool is_text() const { return std::holds_alternative<std::string>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }

    double number() const { return std::get<double>(v_); }
    const std::string& text() const { return std::get<std::string>(v_); }
    bool boolean() const { return std::get<bool>(v_); }

    /// Numeric view: text parses its leading decimal literal (else 0), true = 1.
    double as_number() const;
    /// Text view: numbers in shortest round-trip form, booleans as "true"/"false".
    std::string as_text() const;
    /// Truth view: nonzero numbers, "true" (any case) or text with a nonzero leading number.
    bool as_bool() const;

    /// "number", "text" or "boolean".
    const char* type_name() const;

    friend bool operator==(const Value&, const Value&) = default;

private:
    std::variant<double, std::string, bool> v_;
};

/// Equality used by the `=` operator and list `contains`: numeric when both
/// sides are numeric-like (numbers, booleans, fully numeric text), otherwise
/// case-insensitive text comparison.
bool loosely_equal(const Value& a, const Value& b);

/// Ordering used by `<`/`>`: numeric when both are numeric-like, else
/// case-insensitive lexicographic. Returns -1, 0 or 1.
int loosely_compare(const Value& a, const Value& b);

}  // namespace brickvm::formula
