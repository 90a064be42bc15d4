#include "brickvm/formula/tree.hpp"

#include <algorithm>

#include "brickvm/support/text.hpp"

namespace brickvm::formula {
namespace {

const std::vector<FunctionInfo> kFunctions = {
    {Function::Sin, "sin", 1, -1},
    {Function::Cos, "cos", 1, -1},
    {Function::Tan, "tan", 1, -1},
    {Function::Arcsin, "arcsin", 1, -1},
    {Function::Arccos, "arccos", 1, -1},
    {Function::Arctan, "arctan", 1, -1},
    {Function::Ln, "ln", 1, -1},
    {Function::Log, "log", 1, -1},
    {Function::Abs, "abs", 1, -1},
    {Function::Round, "round", 1, -1},
    {Function::Floor, "floor", 1, -1},
    {Function::Ceil, "ceil", 1, -1},
    {Function::Sqrt, "sqrt", 1, -1},
    {Function::Power, "power", 2, -1},
    {Function::Mod, "mod", 2, -1},
    {Function::Min, "min", 2, -1},
    {Function::Max, "max", 2, -1},
    {Function::Exp, "exp", 1, -1},
    {Function::Random, "random", 2, -1},
    {Function::Length, "length", 1, -1},
    {Function::Letter, "letter", 2, -1},
    {Function::Join, "join", 2, -1},
    {Function::Element, "element", 2, 1},
    {Function::Contains, "contains", 2, 0},
    {Function::NumberOfItems, "number_of_items", 1, 0},
    {Function::True, "TRUE", 0, -1},
    {Function::False, "FALSE", 0, -1},
    {Function::Pi, "PI", 0, -1},
};

}  // namespace

const FunctionInfo& info(Function f) { return kFunctions[static_cast<std::size_t>(f)]; }

const std::vector<FunctionInfo>& all_functions() { return kFunctions; }

std::optional<Function> find_function(std::string_view name) {
    for (const auto& f : kFunctions)
        if (text::iequals(f.name, name)) return f.function;
    return std::nullopt;
}

Node Node::make_number(double v) {
    Node n;
    n.kind = Kind::Number;
    n.number = v;
    return n;
}

Node Node::make_text(std::string s) {
    Node n;
    n.kind = Kind::Text;
    n.name = std::move(s);
    return n;
}

Node Node::make_binary(BinaryOp op, Node lhs, Node rhs) {
    Node n;
    n.kind = Kind::Binary;
    n.binary_op = op;
    n.children.reserve(2);
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    return n;
}

Node Node::make_unary(UnaryOp op, Node operand) {
    Node n;
    n.kind = Kind::Unary;
    n.unary_op = op;
    n.children.push_back(std::move(operand));
    return n;
}

Node Node::make_call(Function f, std::vector<Node> args) {
    Node n;
    n.kind = Kind::Call;
    n.function = f;
    n.children = std::move(args);
    return n;
}

Node Node::make_sensor(formula::Sensor s) {
    Node n;
    n.kind = Kind::Sensor;
    n.sensor = s;
    return n;
}

Node Node::make_property(ObjectProperty p) {
    Node n;
    n.kind = Kind::Property;
    n.property = p;
    return n;
}

Node Node::make_variable(std::string name) {
    Node n;
    n.kind = Kind::Variable;
    n.name = std::move(name);
    return n;
}

Node Node::make_list(std::string name) {
    Node n;
    n.kind = Kind::List;
    n.name = std::move(name);
    return n;
}

std::size_t Node::depth() const {
    std::size_t d = 0;
    for (const auto& c : children) d = std::max(d, c.depth());
    return d + 1;
}

std::size_t Node::size() const {
    std::size_t s = 1;
    for (const auto& c : children) s += c.size();
    return s;
}

bool operator==(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Node::Kind::Number: return a.number == b.number;
        case Node::Kind::Text:
        case Node::Kind::Variable:
        case Node::Kind::List: return a.name == b.name;
        case Node::Kind::Binary: return a.binary_op == b.binary_op && a.children == b.children;
        case Node::Kind::Unary: return a.unary_op == b.unary_op && a.children == b.children;
        case Node::Kind::Call: return a.function == b.function && a.children == b.children;
        case Node::Kind::Sensor: return a.sensor == b.sensor;
        case Node::Kind::Property: return a.property == b.property;
    }
    return false;
}

void collect_references(const Node& node, std::vector<std::string>& variables, std::vector<std::string>& lists) {
    if (node.kind == Node::Kind::Variable) variables.push_back(node.name);
    if (node.kind == Node::Kind::List) lists.push_back(node.name);
    for (const auto& c : node.children) collect_references(c, variables, lists);
}

}  // namespace brickvm::formula
