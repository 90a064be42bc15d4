#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "brickvm/formula/vocabulary.hpp"

namespace brickvm::formula {

enum class BinaryOp : std::uint8_t {
    Add,
    Subtract,
    Multiply,
    Divide,
    Mod,
    Equal,
    NotEqual,
    Less,
    LessEqual,
    Greater,
    GreaterEqual,
    And,
    Or,
};

enum class UnaryOp : std::uint8_t { Negate, Not };

enum class Function : std::uint8_t {
    Sin,
    Cos,
    Tan,
    Arcsin,
    Arccos,
    Arctan,
    Ln,
    Log,
    Abs,
    Round,
    Floor,
    Ceil,
    Sqrt,
    Power,
    Mod,
    Min,
    Max,
    Exp,
    Random,
    Length,
    Letter,
    Join,
    Element,
    Contains,
    NumberOfItems,
    True,
    False,
    Pi,
};

struct FunctionInfo {
    Function function;
    std::string_view name;  // canonical spelling
    int arity;
    int list_argument;  // index of the argument that must be a list reference, or -1
};

const FunctionInfo& info(Function f);
std::optional<Function> find_function(std::string_view name);
const std::vector<FunctionInfo>& all_functions();

/// One node of a formula expression tree. Children are owned by value.
struct Node {
    enum class Kind : std::uint8_t { Number, Text, Binary, Unary, Call, Sensor, Property, Variable, List };

    Kind kind = Kind::Number;
    double number = 0.0;
    std::string name;  // text literal, variable name or list name
    BinaryOp binary_op = BinaryOp::Add;
    UnaryOp unary_op = UnaryOp::Negate;
    Function function = Function::Sin;
    formula::Sensor sensor = formula::Sensor::InclinationX;
    ObjectProperty property = ObjectProperty::PositionX;
    std::vector<Node> children;

    static Node make_number(double v);
    static Node make_text(std::string s);
    static Node make_binary(BinaryOp op, Node lhs, Node rhs);
    static Node make_unary(UnaryOp op, Node operand);
    static Node make_call(Function f, std::vector<Node> args);
    static Node make_sensor(formula::Sensor s);
    static Node make_property(ObjectProperty p);
    static Node make_variable(std::string n);
    static Node make_list(std::string n);

    std::size_t depth() const;
    std::size_t size() const;

    friend bool operator==(const Node& a, const Node& b);
};

using FormulaTree = Node;

/// Names of variables / lists referenced anywhere in the tree.
void collect_references(const Node& node, std::vector<std::string>& variables, std::vector<std::string>& lists);

}  // namespace brickvm::formula
