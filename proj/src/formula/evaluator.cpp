#include "brickvm/formula/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "brickvm/support/text.hpp"

namespace brickvm::formula {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double clean(double v) { return std::isnan(v) ? 0.0 : v; }

double floored_mod(double a, double b) {
    if (b == 0.0) return 0.0;
    return clean(a - b * std::floor(a / b));
}

void note(EvalContext& ctx, const std::string& message) {
    if (ctx.diagnostic) ctx.diagnostic(message);
}

const std::vector<Value>* find_list(const EvalContext& ctx, const std::string& name) {
    if (ctx.local_lists) {
        if (auto it = ctx.local_lists->find(name); it != ctx.local_lists->end()) return &it->second;
    }
    if (ctx.global_lists) {
        if (auto it = ctx.global_lists->find(name); it != ctx.global_lists->end()) return &it->second;
    }
    return nullptr;
}

Value lookup_variable(EvalContext& ctx, const std::string& name) {
    if (ctx.local_variables) {
        if (auto it = ctx.local_variables->find(name); it != ctx.local_variables->end()) return it->second;
    }
    if (ctx.global_variables) {
        if (auto it = ctx.global_variables->find(name); it != ctx.global_variables->end()) return it->second;
    }
    note(ctx, "unknown variable '" + name + "'");
    return Value(0.0);
}

// 1-based index; anything outside [1, size] is invalid.
std::optional<std::size_t> one_based(double index, std::size_t size) {
    double i = std::floor(index);
    if (!(i >= 1.0) || i > static_cast<double>(size)) return std::nullopt;
    return static_cast<std::size_t>(i) - 1;
}

Value call(const Node& n, EvalContext& ctx) {
    static const std::vector<Value> kEmpty;
    auto num = [&](std::size_t i) { return evaluate(n.children[i], ctx).as_number(); };
    auto list_arg = [&](std::size_t i) -> const std::vector<Value>& {
        const auto* l = find_list(ctx, n.children[i].name);
        if (!l) {
            note(ctx, "unknown list '" + n.children[i].name + "'");
            return kEmpty;
        }
        return *l;
    };

    switch (n.function) {
        case Function::Sin: return clean(std::sin(num(0) * kDegToRad));
        case Function::Cos: return clean(std::cos(num(0) * kDegToRad));
        case Function::Tan: return clean(std::tan(num(0) * kDegToRad));
        case Function::Arcsin: return clean(std::asin(std::clamp(num(0), -1.0, 1.0)) * kRadToDeg);
        case Function::Arccos: return clean(std::acos(std::clamp(num(0), -1.0, 1.0)) * kRadToDeg);
        case Function::Arctan: return clean(std::atan(num(0)) * kRadToDeg);
        case Function::Ln: {
            double x = num(0);
            return x > 0.0 ? clean(std::log(x)) : 0.0;
        }
        case Function::Log: {
            double x = num(0);
            return x > 0.0 ? clean(std::log10(x)) : 0.0;
        }
        case Function::Abs: return std::fabs(num(0));
        case Function::Round: return clean(std::round(num(0)));
        case Function::Floor: return clean(std::floor(num(0)));
        case Function::Ceil: return clean(std::ceil(num(0)));
        case Function::Sqrt: {
            double x = num(0);
            return x >= 0.0 ? std::sqrt(x) : 0.0;
        }
        case Function::Power: {
            double a = num(0);
            double b = num(1);
            return clean(std::pow(a, b));
        }
        case Function::Mod: {
            double a = num(0);
            double b = num(1);
            return floored_mod(a, b);
        }
        case Function::Min: {
            double a = num(0);
            double b = num(1);
            return std::min(a, b);
        }
        case Function::Max: {
            double a = num(0);
            double b = num(1);
            return std::max(a, b);
        }
        case Function::Exp: return clean(std::exp(num(0)));
        case Function::Random: {
            double a = num(0);
            double b = num(1);
            double lo = std::min(a, b);
            double hi = std::max(a, b);
            if (!ctx.random) return lo;
            return clean(lo + (hi - lo) * ctx.random->uniform01());
        }
        case Function::Length: {
            return static_cast<double>(text::utf8_chars(evaluate(n.children[0], ctx).as_text()).size());
        }
        case Function::Letter: {
            double i = num(0);
            auto chars = text::utf8_chars(evaluate(n.children[1], ctx).as_text());
            auto idx = one_based(i, chars.size());
            return idx ? Value(chars[*idx]) : Value(std::string());
        }
        case Function::Join: {
            auto a = evaluate(n.children[0], ctx).as_text();
            auto b = evaluate(n.children[1], ctx).as_text();
            return a + b;
        }
        case Function::Element: {
            double i = num(0);
            const auto& list = list_arg(1);
            auto idx = one_based(i, list.size());
            return idx ? list[*idx] : Value(std::string());
        }
        case Function::Contains: {
            const auto& list = list_arg(0);
            Value needle = evaluate(n.children[1], ctx);
            return std::any_of(list.begin(), list.end(), [&](const Value& v) { return loosely_equal(v, needle); });
        }
        case Function::NumberOfItems: return static_cast<double>(list_arg(0).size());
        case Function::True: return true;
        case Function::False: return false;
        case Function::Pi: return std::numbers::pi;
    }
    return 0.0;
}

Value binary(const Node& n, EvalContext& ctx) {
    // Both operands are always evaluated, left first: random draws stay in a fixed order.
    Value a = evaluate(n.children[0], ctx);
    Value b = evaluate(n.children[1], ctx);
    switch (n.binary_op) {
        case BinaryOp::Add: return clean(a.as_number() + b.as_number());
        case BinaryOp::Subtract: return clean(a.as_number() - b.as_number());
        case BinaryOp::Multiply: return clean(a.as_number() * b.as_number());
        case BinaryOp::Divide: {
            double d = b.as_number();
            if (d == 0.0) {
                note(ctx, "division by zero");
                return 0.0;
            }
            return clean(a.as_number() / d);
        }
        case BinaryOp::Mod: return floored_mod(a.as_number(), b.as_number());
        case BinaryOp::Equal: return loosely_equal(a, b);
        case BinaryOp::NotEqual: return !loosely_equal(a, b);
        case BinaryOp::Less: return loosely_compare(a, b) < 0;
        case BinaryOp::LessEqual: return loosely_compare(a, b) <= 0;
        case BinaryOp::Greater: return loosely_compare(a, b) > 0;
        case BinaryOp::GreaterEqual: return loosely_compare(a, b) >= 0;
        case BinaryOp::And: return a.as_bool() && b.as_bool();
        case BinaryOp::Or: return a.as_bool() || b.as_bool();
    }
    return 0.0;
}

}  // namespace

Value evaluate(const FormulaTree& n, EvalContext& ctx) {
    switch (n.kind) {
        case Node::Kind::Number: return n.number;
        case Node::Kind::Text: return n.name;
        case Node::Kind::Sensor: return ctx.sensors[static_cast<std::size_t>(n.sensor)];
        case Node::Kind::Property: return ctx.object[static_cast<std::size_t>(n.property)];
        case Node::Kind::Variable: return lookup_variable(ctx, n.name);
        case Node::Kind::List: {
            // A bare list reference reads as its items joined by spaces.
            const auto* l = find_list(ctx, n.name);
            if (!l) return std::string();
            std::string joined;
            for (std::size_t i = 0; i < l->size(); ++i) {
                if (i) joined += ' ';
                joined += (*l)[i].as_text();
            }
            return joined;
        }
        case Node::Kind::Binary: return binary(n, ctx);
        case Node::Kind::Unary: {
            Value v = evaluate(n.children[0], ctx);
            if (n.unary_op == UnaryOp::Not) return !v.as_bool();
            return -v.as_number();
        }
        case Node::Kind::Call: return call(n, ctx);
    }
    return 0.0;
}

}  // namespace brickvm::formula
