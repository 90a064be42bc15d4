#include "brickvm/support/xml.hpp"

#include <expat.h>

#include <memory>

#include "brickvm/support/text.hpp"

namespace brickvm::xml {

const std::string* Element::attribute(std::string_view key) const {
    auto it = attributes.find(std::string(key));
    return it == attributes.end() ? nullptr : &it->second;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
    std::vector<const Element*> out;
    for (const auto& c : children)
        if (c.name == child_name) out.push_back(&c);
    return out;
}

const Element* Element::child(std::string_view child_name) const {
    for (const auto& c : children)
        if (c.name == child_name) return &c;
    return nullptr;
}

Element& Element::add(std::string child_name) {
    auto& c = children.emplace_back();
    c.name = std::move(child_name);
    return c;
}

namespace {

struct ParseState {
    XML_Parser parser = nullptr;
    std::vector<Element*> stack;
    Element root;
    bool have_root = false;
};

void on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* st = static_cast<ParseState*>(user);
    Element* e = nullptr;
    if (st->stack.empty()) {
        st->have_root = true;
        e = &st->root;
        e->name = name;
    } else {
        e = &st->stack.back()->add(name);
    }
    e->line = static_cast<int>(XML_GetCurrentLineNumber(st->parser));
    for (int i = 0; attrs[i]; i += 2) e->attributes.insert_or_assign(attrs[i], attrs[i + 1]);
    st->stack.push_back(e);
}

void on_end(void* user, const XML_Char*) {
    auto* st = static_cast<ParseState*>(user);
    Element* e = st->stack.back();
    if (!e->children.empty()) e->text.clear();
    st->stack.pop_back();
}

void on_text(void* user, const XML_Char* s, int len) {
    auto* st = static_cast<ParseState*>(user);
    if (!st->stack.empty()) st->stack.back()->text.append(s, static_cast<std::size_t>(len));
}

void escape_into(std::string& out, std::string_view s, bool attribute) {
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"':
                if (attribute) out += "&quot;";
                else out += c;
                break;
            case '\n':
                if (attribute) out += "&#10;";
                else out += c;
                break;
            case '\t':
                if (attribute) out += "&#9;";
                else out += c;
                break;
            case '\r': out += "&#13;"; break;
            default: out += c;
        }
    }
}

void write_element(std::string& out, const Element& e, int depth) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
    out += '<';
    out += e.name;
    for (const auto& [k, v] : e.attributes) {
        out += ' ';
        out += k;
        out += "=\"";
        escape_into(out, v, true);
        out += '"';
    }
    if (e.children.empty() && e.text.empty()) {
        out += "/>\n";
        return;
    }
    out += '>';
    if (e.children.empty()) {
        escape_into(out, e.text, false);
    } else {
        out += '\n';
        for (const auto& c : e.children) write_element(out, c, depth + 1);
        out.append(static_cast<std::size_t>(depth) * 2, ' ');
    }
    out += "</";
    out += e.name;
    out += ">\n";
}

}  // namespace

Element parse(std::string_view document) {
    ParseState st;
    std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
        XML_ParserCreate("UTF-8"), &XML_ParserFree);
    if (!parser) throw XmlError(0, "cannot create parser");
    st.parser = parser.get();
    XML_SetUserData(parser.get(), &st);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetCharacterDataHandler(parser.get(), on_text);
    if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE) == XML_STATUS_ERROR) {
        throw XmlError(static_cast<int>(XML_GetCurrentLineNumber(parser.get())),
                       XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    if (!st.have_root) throw XmlError(0, "no root element");
    return std::move(st.root);
}

std::string write(const Element& root) {
    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    write_element(out, root, 0);
    return out;
}

}  // namespace brickvm::xml
