#include "brickvm/formula/syntax.hpp"

#include <cctype>
#include <cmath>
#include <optional>

#include "brickvm/support/text.hpp"

namespace brickvm::formula {

FormulaError::FormulaError(Kind kind, std::size_t position, const std::string& message)
    : std::runtime_error(message + " at position " + std::to_string(position)), kind_(kind), position_(position) {}

namespace {

constexpr int kPrecOr = 1;
constexpr int kPrecAnd = 2;
constexpr int kPrecNot = 3;
constexpr int kPrecCompare = 4;
constexpr int kPrecAdd = 5;
constexpr int kPrecMultiply = 6;
constexpr int kPrecNegate = 7;
constexpr int kPrecAtom = 8;

int precedence(BinaryOp op) {
    switch (op) {
        case BinaryOp::Or: return kPrecOr;
        case BinaryOp::And: return kPrecAnd;
        case BinaryOp::Equal:
        case BinaryOp::NotEqual:
        case BinaryOp::Less:
        case BinaryOp::LessEqual:
        case BinaryOp::Greater:
        case BinaryOp::GreaterEqual: return kPrecCompare;
        case BinaryOp::Add:
        case BinaryOp::Subtract: return kPrecAdd;
        case BinaryOp::Multiply:
        case BinaryOp::Divide:
        case BinaryOp::Mod: return kPrecMultiply;
    }
    return kPrecAtom;
}

int precedence(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Binary: return precedence(n.binary_op);
        case Node::Kind::Unary: return n.unary_op == UnaryOp::Not ? kPrecNot : kPrecNegate;
        default: return kPrecAtom;
    }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Node parse() {
        Node n = parse_or();
        skip_space();
        if (pos_ != src_.size()) fail("unexpected input");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw FormulaError(FormulaError::Kind::Syntax, pos_, what);
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool at_end() {
        skip_space();
        return pos_ >= src_.size();
    }

    bool match(std::string_view tok) {
        skip_space();
        if (src_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    // Keyword match (case-insensitive, must not continue as an identifier).
    bool match_keyword(std::string_view kw) {
        skip_space();
        if (pos_ + kw.size() > src_.size()) return false;
        if (!text::iequals(src_.substr(pos_, kw.size()), kw)) return false;
        if (pos_ + kw.size() < src_.size() && ident_char(src_[pos_ + kw.size()])) return false;
        pos_ += kw.size();
        return true;
    }

    Node parse_or() {
        Node lhs = parse_and();
        while (match_keyword("OR")) lhs = Node::make_binary(BinaryOp::Or, std::move(lhs), parse_and());
        return lhs;
    }

    Node parse_and() {
        Node lhs = parse_not();
        while (match_keyword("AND")) lhs = Node::make_binary(BinaryOp::And, std::move(lhs), parse_not());
        return lhs;
    }

    Node parse_not() {
        if (match_keyword("NOT")) return Node::make_unary(UnaryOp::Not, parse_not());
        return parse_compare();
    }

    std::optional<BinaryOp> compare_op() {
        // Two-character spellings first.
        if (match("<=") || match("≤")) return BinaryOp::LessEqual;
        if (match(">=") || match("≥")) return BinaryOp::GreaterEqual;
        if (match("!=") || match("≠") || match("<>")) return BinaryOp::NotEqual;
        if (match("=")) return BinaryOp::Equal;
        if (match("<")) return BinaryOp::Less;
        if (match(">")) return BinaryOp::Greater;
        return std::nullopt;
    }

    Node parse_compare() {
        Node lhs = parse_add();
        while (auto op = compare_op()) lhs = Node::make_binary(*op, std::move(lhs), parse_add());
        return lhs;
    }

    Node parse_add() {
        Node lhs = parse_multiply();
        while (true) {
            if (match("+")) lhs = Node::make_binary(BinaryOp::Add, std::move(lhs), parse_multiply());
            else if (match("-") || match("−")) lhs = Node::make_binary(BinaryOp::Subtract, std::move(lhs), parse_multiply());
            else return lhs;
        }
    }

    Node parse_multiply() {
        Node lhs = parse_unary();
        while (true) {
            if (match("*") || match("×")) lhs = Node::make_binary(BinaryOp::Multiply, std::move(lhs), parse_unary());
            else if (match("/") || match("÷")) lhs = Node::make_binary(BinaryOp::Divide, std::move(lhs), parse_unary());
            else if (match_keyword("MOD")) lhs = Node::make_binary(BinaryOp::Mod, std::move(lhs), parse_unary());
            else return lhs;
        }
    }

    bool number_ahead() {
        skip_space();
        return pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
                (src_[pos_] == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))));
    }

    Node parse_unary() {
        if (match("-") || match("−")) {
            // A minus directly in front of a numeric literal folds into the literal.
            if (number_ahead()) return Node::make_number(-parse_number_literal());
            return Node::make_unary(UnaryOp::Negate, parse_unary());
        }
        return parse_primary();
    }

    double parse_number_literal() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = save;
            }
        }
        auto value = text::parse_number(src_.substr(start, pos_ - start));
        if (!value) {
            pos_ = start;
            fail("malformed number");
        }
        if (!std::isfinite(*value)) {
            pos_ = start;
            fail("number out of range");
        }
        return *value;
    }

    // Reads a delimited name where the delimiter is escaped by doubling it.
    std::string parse_quoted(char delim) {
        std::size_t start = pos_;
        ++pos_;  // opening delimiter
        std::string out;
        while (true) {
            if (pos_ >= src_.size()) {
                pos_ = start;
                fail("unterminated quote");
            }
            char c = src_[pos_++];
            if (c == delim) {
                if (pos_ < src_.size() && src_[pos_] == delim) {
                    out += delim;
                    ++pos_;
                    continue;
                }
                return out;
            }
            out += c;
        }
    }

    Node parse_primary() {
        skip_space();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        char c = src_[pos_];
        if (number_ahead()) return Node::make_number(parse_number_literal());
        if (c == '\'') return Node::make_text(parse_quoted('\''));
        if (c == '"') {
            std::size_t start = pos_;
            auto name = parse_quoted('"');
            if (name.empty()) {
                pos_ = start;
                fail("empty variable name");
            }
            return Node::make_variable(std::move(name));
        }
        if (c == '*') {
            std::size_t start = pos_;
            auto name = parse_quoted('*');
            if (name.empty()) {
                pos_ = start;
                fail("empty list name");
            }
            return Node::make_list(std::move(name));
        }
        if (c == '(') {
            ++pos_;
            Node inner = parse_or();
            if (!match(")")) fail("expected ')'");
            return inner;
        }
        if (ident_start(c)) return parse_identifier();
        fail("unexpected character");
    }

    Node parse_identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);

        skip_space();
        bool call = pos_ < src_.size() && src_[pos_] == '(';
        if (call) {
            auto fn = find_function(name);
            if (!fn) throw FormulaError(FormulaError::Kind::UnknownIdentifier, start, "unknown function '" + std::string(name) + "'");
            ++pos_;
            std::vector<Node> args;
            if (!match(")")) {
                do {
                    args.push_back(parse_or());
                } while (match(","));
                if (!match(")")) fail("expected ')' or ','");
            }
            const auto& fi = info(*fn);
            if (static_cast<int>(args.size()) != fi.arity)
                throw FormulaError(FormulaError::Kind::Arity, start,
                                   std::string(fi.name) + " takes " + std::to_string(fi.arity) + " argument(s)");
            if (fi.list_argument >= 0 && args[static_cast<std::size_t>(fi.list_argument)].kind != Node::Kind::List)
                throw FormulaError(FormulaError::Kind::Arity, start,
                                   std::string(fi.name) + " expects a list reference as argument " +
                                       std::to_string(fi.list_argument + 1));
            return Node::make_call(*fn, std::move(args));
        }

        if (auto fn = find_function(name); fn && info(*fn).arity == 0) return Node::make_call(*fn, {});
        if (auto s = find_sensor(name)) return Node::make_sensor(*s);
        if (auto p = find_object_property(name)) return Node::make_property(*p);
        if (find_function(name))
            throw FormulaError(FormulaError::Kind::Arity, start, "function '" + std::string(name) + "' needs arguments");
        throw FormulaError(FormulaError::Kind::UnknownIdentifier, start, "unknown identifier '" + std::string(name) + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

std::string_view op_token(BinaryOp op, Notation notation) {
    bool ascii = notation != Notation::Canonical;
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Subtract: return "-";
        case BinaryOp::Multiply: return ascii ? "*" : "×";
        case BinaryOp::Divide: return "/";
        case BinaryOp::Mod: return "MOD";
        case BinaryOp::Equal: return "=";
        case BinaryOp::NotEqual: return ascii ? "!=" : "≠";
        case BinaryOp::Less: return "<";
        case BinaryOp::LessEqual: return ascii ? "<=" : "≤";
        case BinaryOp::Greater: return ">";
        case BinaryOp::GreaterEqual: return ascii ? ">=" : "≥";
        case BinaryOp::And: return "AND";
        case BinaryOp::Or: return "OR";
    }
    return "?";
}

std::string quote(std::string_view s, char delim) {
    std::string out(1, delim);
    for (char c : s) {
        out += c;
        if (c == delim) out += delim;
    }
    out += delim;
    return out;
}

void write(std::string& out, const Node& n, Notation notation);

void write_child(std::string& out, const Node& child, int required, Notation notation) {
    if (precedence(child) < required) {
        out += '(';
        write(out, child, notation);
        out += ')';
    } else {
        write(out, child, notation);
    }
}

void write(std::string& out, const Node& n, Notation notation) {
    switch (n.kind) {
        case Node::Kind::Number:
            if (notation == Notation::Display && std::signbit(n.number)) {
                out += "- ";
                out += text::format_number(-n.number);
            } else {
                out += text::format_number(n.number);
            }
            return;
        case Node::Kind::Text: out += quote(n.name, '\''); return;
        case Node::Kind::Variable: out += quote(n.name, '"'); return;
        case Node::Kind::List: out += quote(n.name, '*'); return;
        case Node::Kind::Sensor: out += canonical_name(n.sensor); return;
        case Node::Kind::Property: out += canonical_name(n.property); return;
        case Node::Kind::Binary: {
            int p = precedence(n.binary_op);
            write_child(out, n.children[0], p, notation);
            out += ' ';
            out += op_token(n.binary_op, notation);
            out += ' ';
            // Left-associative: an equal-precedence right operand needs parentheses.
            write_child(out, n.children[1], p + 1, notation);
            return;
        }
        case Node::Kind::Unary: {
            const Node& operand = n.children[0];
            if (n.unary_op == UnaryOp::Not) {
                out += "NOT ";
                write_child(out, operand, kPrecNot, notation);
            } else {
                out += '-';
                // "-(5)" keeps negation distinct from the literal -5.
                if (operand.kind == Node::Kind::Number) {
                    out += '(';
                    write(out, operand, notation);
                    out += ')';
                } else {
                    write_child(out, operand, kPrecNegate, notation);
                }
            }
            return;
        }
        case Node::Kind::Call: {
            const auto& fi = info(n.function);
            out += fi.name;
            if (fi.arity == 0) return;
            out += '(';
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                if (i) out += ", ";
                write(out, n.children[i], notation);
            }
            out += ')';
            return;
        }
    }
}

}  // namespace

FormulaTree parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string serialize_formula(const FormulaTree& tree, Notation notation) {
    std::string out;
    write(out, tree, notation);
    return out;
}

}  // namespace brickvm::formula
