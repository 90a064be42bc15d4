#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "brickvm/formula/evaluator.hpp"
#include "brickvm/formula/syntax.hpp"
#include "formula_oracle.hpp"

using namespace brickvm::formula;

namespace {

EvalContext context_with_inclination(double ix, double iy = 0.0) {
    EvalContext ctx;
    ctx.sensors[static_cast<std::size_t>(Sensor::InclinationX)] = ix;
    ctx.sensors[static_cast<std::size_t>(Sensor::InclinationY)] = iy;
    return ctx;
}

Value eval_text(const std::string& text, EvalContext ctx = {}) { return evaluate(parse_formula(text), ctx); }

}  // namespace

TEST_CASE("code view formula parses into multiply of sensor and negative literal") {
    auto tree = parse_formula("X_INCLINATION * -10");
    auto expected = Node::make_binary(BinaryOp::Multiply, Node::make_sensor(Sensor::InclinationX), Node::make_number(-10));
    CHECK(tree == expected);
    CHECK(serialize_formula(tree, Notation::Ascii) == "X_INCLINATION * -10");
    CHECK(serialize_formula(tree) == "X_INCLINATION × -10");
    CHECK(serialize_formula(tree, Notation::Display) == "X_INCLINATION * - 10");
    CHECK(parse_formula("X_INCLINATION * - 10") == tree);
}

TEST_CASE("multiplication sign and asterisk are synonyms") {
    auto a = parse_formula("-3 × inclination_x");
    auto b = parse_formula("-3 * inclination_x");
    CHECK(a == b);
    CHECK(a == Node::make_binary(BinaryOp::Multiply, Node::make_number(-3), Node::make_sensor(Sensor::InclinationX)));
}

TEST_CASE("identifiers are case-insensitive and serialize uppercase") {
    CHECK(serialize_formula(parse_formula("object_x + Inclination_Y")) == "OBJECT_X + Y_INCLINATION");
    CHECK(serialize_formula(parse_formula("SIN(pi)")) == "sin(PI)");
}

TEST_CASE("syntax errors carry the failing position") {
    try {
        parse_formula("1 +");
        FAIL("expected an error");
    } catch (const FormulaError& e) {
        CHECK(e.kind() == FormulaError::Kind::Syntax);
        CHECK(e.position() == 3);
    }
    CHECK_THROWS_AS(parse_formula("(1 + 2"), FormulaError);
    CHECK_THROWS_AS(parse_formula("1 2"), FormulaError);
    CHECK_THROWS_AS(parse_formula("'open"), FormulaError);
    CHECK_THROWS_AS(parse_formula("1e999"), FormulaError);
}

TEST_CASE("unknown identifiers and arity mismatches are distinct errors") {
    auto kind_of = [](const char* text) {
        try {
            parse_formula(text);
        } catch (const FormulaError& e) {
            return e.kind();
        }
        FAIL("no error for " << text);
        return FormulaError::Kind::Syntax;
    };
    CHECK(kind_of("SPEED_OF_LIGHT") == FormulaError::Kind::UnknownIdentifier);
    CHECK(kind_of("frobnicate(1)") == FormulaError::Kind::UnknownIdentifier);
    CHECK(kind_of("sin(1, 2)") == FormulaError::Kind::Arity);
    CHECK(kind_of("power(2)") == FormulaError::Kind::Arity);
    CHECK(kind_of("number_of_items(3)") == FormulaError::Kind::Arity);
    CHECK(kind_of("sqrt") == FormulaError::Kind::Arity);
}

TEST_CASE("serializer uses minimal parentheses") {
    auto add = Node::make_binary(BinaryOp::Add, Node::make_number(1), Node::make_number(2));
    CHECK(serialize_formula(Node::make_number(42)) == "42");
    CHECK(serialize_formula(Node::make_binary(BinaryOp::Multiply, add, Node::make_number(3))) == "(1 + 2) × 3");
    CHECK(serialize_formula(Node::make_binary(BinaryOp::Add, Node::make_number(3), add)) == "3 + (1 + 2)");
    CHECK(serialize_formula(Node::make_binary(BinaryOp::Add, add, Node::make_number(3))) == "1 + 2 + 3");
    CHECK(serialize_formula(Node::make_unary(UnaryOp::Negate, Node::make_number(5))) == "-(5)");
    CHECK(serialize_formula(Node::make_unary(UnaryOp::Not, Node::make_binary(BinaryOp::And, Node::make_call(Function::True, {}),
                                                                               Node::make_call(Function::False, {})))) ==
          "NOT (TRUE AND FALSE)");
}

TEST_CASE("quoted names double their delimiter") {
    auto tree = Node::make_binary(BinaryOp::Add, Node::make_variable("say \"hi\""),
                                  Node::make_call(Function::NumberOfItems, {Node::make_list("a*b")}));
    auto text = serialize_formula(tree);
    CHECK(text == R"("say ""hi""" + number_of_items(*a**b*))");
    CHECK(parse_formula(text) == tree);
    CHECK(parse_formula("'it''s'") == Node::make_text("it's"));
}

TEST_CASE("paper formulas evaluate with sensor input") {
    CHECK(eval_text("X_INCLINATION * -10", context_with_inclination(2)).as_number() == -20.0);
    CHECK(eval_text("-3 × inclination_x", context_with_inclination(10)).as_number() == -30.0);
    CHECK(eval_text("-3 × inclination_y", context_with_inclination(10, -5)).as_number() == 15.0);
}

TEST_CASE("trigonometry works in degrees") {
    CHECK(eval_text("sin(90)").as_number() == doctest::Approx(1.0));
    CHECK(eval_text("cos(180)").as_number() == doctest::Approx(-1.0));
    CHECK(eval_text("arctan(1)").as_number() == doctest::Approx(45.0));
    CHECK(eval_text("arcsin(2)").as_number() == doctest::Approx(90.0));
}

TEST_CASE("degenerate math yields defined values") {
    std::vector<std::string> notes;
    EvalContext ctx;
    ctx.diagnostic = [&](const std::string& m) { notes.push_back(m); };
    CHECK(evaluate(parse_formula("7 / 0"), ctx).as_number() == 0.0);
    REQUIRE(notes.size() == 1);
    CHECK(notes[0] == "division by zero");
    CHECK(eval_text("sqrt(-4)").as_number() == 0.0);
    CHECK(eval_text("ln(0)").as_number() == 0.0);
    CHECK(eval_text("log(-1)").as_number() == 0.0);
    CHECK(eval_text("5 MOD 0").as_number() == 0.0);
    CHECK(eval_text("power(-8, 0.5)").as_number() == 0.0);
    CHECK(eval_text("-7 MOD 3").as_number() == 2.0);
    CHECK(eval_text("mod(7, -3)").as_number() == -2.0);
}

TEST_CASE("coercions follow the declared conventions") {
    CHECK(eval_text("'12abc' + 1").as_number() == 13.0);
    CHECK(eval_text("'abc' + 1").as_number() == 1.0);
    CHECK(eval_text("TRUE + 1").as_number() == 2.0);
    CHECK(eval_text("join(1.5, 'x')").as_text() == "1.5x");
    CHECK(eval_text("join(3, '')").as_text() == "3");
    CHECK(eval_text("'10' = 10").boolean());
    CHECK(eval_text("'Hello' = 'hello'").boolean());
    CHECK(eval_text("'b' > 'A'").boolean());
    CHECK(eval_text("length('héllo')").as_number() == 5.0);
    CHECK(eval_text("letter(2, 'héllo')").as_text() == "é");
    CHECK(eval_text("letter(9, 'abc')").as_text().empty());
}

TEST_CASE("lists resolve locally before globally") {
    ListMap globals{{"items", {Value(1.0), Value("two")}}};
    ListMap locals{{"items", {Value(9.0)}}};
    EvalContext ctx;
    ctx.global_lists = &globals;
    CHECK(evaluate(parse_formula("element(2, *items*)"), ctx).as_text() == "two");
    CHECK(evaluate(parse_formula("contains(*items*, 'TWO')"), ctx).boolean());
    ctx.local_lists = &locals;
    CHECK(evaluate(parse_formula("number_of_items(*items*)"), ctx).as_number() == 1.0);
    CHECK(evaluate(parse_formula("*items*"), ctx).as_text() == "9");
}

TEST_CASE("random draws are reproducible from the seed") {
    auto tree = parse_formula("random(1, 6) + random(-1, 1)");
    Random r1(42), r2(42);
    EvalContext a, b;
    a.random = &r1;
    b.random = &r2;
    for (int i = 0; i < 50; ++i) {
        double x = evaluate(tree, a).as_number();
        CHECK(x == evaluate(tree, b).as_number());
        CHECK(x >= 0.0);
        CHECK(x < 7.0);
    }
    CHECK(r1.draws() == 100);
}

TEST_CASE("random trees round-trip through text in every notation") {
    brickvm::testing::TreeGenerator gen(7);
    for (int i = 0; i < 500; ++i) {
        auto tree = gen.tree(6);
        for (auto notation : {Notation::Canonical, Notation::Ascii, Notation::Display}) {
            auto text = serialize_formula(tree, notation);
            INFO(text);
            auto reparsed = parse_formula(text);
            CHECK(reparsed == tree);
            // serialize∘parse is a canonicalization: applying it twice changes nothing.
            CHECK(serialize_formula(reparsed, notation) == text);
        }
    }
}

TEST_CASE("evaluation agrees with the reference oracle") {
    brickvm::testing::TreeGenerator gen(1234);
    for (int i = 0; i < 300; ++i) {
        auto tree = gen.tree(6);
        auto octx = gen.context();
        std::uint64_t seed = gen.rng()();
        Random random(seed);
        EvalContext ctx;
        ctx.object = octx.object;
        ctx.sensors = octx.sensors;
        ctx.local_variables = &octx.locals;
        ctx.global_variables = &octx.globals;
        ctx.local_lists = &octx.local_lists;
        ctx.global_lists = &octx.global_lists;
        ctx.random = &random;
        std::mt19937_64 oracle_rng(seed);
        Value got = evaluate(tree, ctx);
        Value want = brickvm::testing::oracle_evaluate(tree, octx, oracle_rng);
        INFO(serialize_formula(tree));
        REQUIRE(std::string(got.type_name()) == want.type_name());
        if (got.is_number()) {
            double a = got.number(), b = want.number();
            CHECK((a == b || std::fabs(a - b) <= 1e-12 * std::max(std::fabs(a), std::fabs(b))));
        } else {
            CHECK(got == want);
        }
    }
}
