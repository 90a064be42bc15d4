#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace brickvm::xml {

class XmlError : public std::runtime_error {
public:
    XmlError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct Element {
    std::string name;
    std::map<std::string, std::string> attributes;  // sorted: canonical order for free
    std::vector<Element> children;
    std::string text;  // only kept for leaf elements
    int line = 0;

    const std::string* attribute(std::string_view key) const;
    std::vector<const Element*> children_named(std::string_view child) const;
    const Element* child(std::string_view child) const;

    Element& add(std::string child_name);
    Element& set(std::string key, std::string value) {
        attributes.insert_or_assign(std::move(key), std::move(value));
        return *this;
    }
};

Element parse(std::string_view document);

/// Canonical form: XML declaration, two-space indent, LF endings,
/// alphabetized attributes, self-closing empty elements.
std::string write(const Element& root);

}  // namespace brickvm::xml
