#include "brickvm/formula/value.hpp"

#include <optional>

#include "brickvm/support/text.hpp"

namespace brickvm::formula {

double Value::as_number() const {
    if (is_number()) return number();
    if (is_bool()) return boolean() ? 1.0 : 0.0;
    return text::parse_leading_number(text());
}

std::string Value::as_text() const {
    if (is_text()) return text();
    if (is_bool()) return boolean() ? "true" : "false";
    return text::format_number(number());
}

bool Value::as_bool() const {
    if (is_bool()) return boolean();
    if (is_number()) return number() != 0.0;
    if (text::iequals(text::trim(text()), "true")) return true;
    return text::parse_leading_number(text()) != 0.0;
}

const char* Value::type_name() const {
    if (is_number()) return "number";
    if (is_bool()) return "boolean";
    return "text";
}

namespace {

std::optional<double> numeric_like(const Value& v) {
    if (v.is_number()) return v.number();
    if (v.is_bool()) return v.boolean() ? 1.0 : 0.0;
    return text::parse_number(v.text());
}

}  // namespace

bool loosely_equal(const Value& a, const Value& b) { return loosely_compare(a, b) == 0; }

int loosely_compare(const Value& a, const Value& b) {
    auto x = numeric_like(a);
    auto y = numeric_like(b);
    if (x && y) return *x < *y ? -1 : (*x > *y ? 1 : 0);
    auto s = text::to_lower(a.as_text());
    auto t = text::to_lower(b.as_text());
    return s < t ? -1 : (s > t ? 1 : 0);
}

}  // namespace brickvm::formula
