#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "geo/error.hpp"
#include "geo/expr.hpp"
#include "geo/validation.hpp"
#include "oracle.hpp"

using namespace geo;

namespace {

const std::vector<std::string> kUV{"u", "v"};

Expr parse(std::string_view s) { return parse_expression(s, kUV); }

Jet eval_at(const Expr& e, double u, double v) {
    const std::array<Jet, 2> slots{Jet::variable(Var::u, u), Jet::variable(Var::v, v)};
    return evaluate_on_jets(e, slots);
}

}  // namespace

TEST(Parse, Precedence) {
    const Expr e = parse("u^2 - v^2");
    ASSERT_EQ(e.kind(), Expr::Kind::binary);
    EXPECT_EQ(e.op(), Expr::Op::sub);
    EXPECT_EQ(e.children()[0].op(), Expr::Op::pow);
    EXPECT_EQ(e.children()[1].op(), Expr::Op::pow);
    EXPECT_EQ(e.to_string(), "((u^2) - (v^2))");
}

TEST(Parse, LeftAssociativeProducts) {
    const Expr e = parse("2*u*v");
    EXPECT_TRUE(e.structurally_equal(Expr::make_binary(
        Expr::Op::mul, Expr::make_binary(Expr::Op::mul, Expr::make_constant(2), Expr::make_variable("u", 0)),
        Expr::make_variable("v", 1))));
}

TEST(Parse, PowerIsRightAssociativeAndBindsTighterThanUnaryMinus) {
    EXPECT_EQ(evaluate(parse("2^3^2"), std::array<double, 2>{0, 0}), 512.0);
    EXPECT_EQ(evaluate(parse("-2^2"), std::array<double, 2>{0, 0}), -4.0);
    EXPECT_EQ(evaluate(parse("2^-1"), std::array<double, 2>{0, 0}), 0.5);
}

TEST(Parse, UnknownIdentifier) {
    try {
        (void)parse("sin(u)*cos(w)");
        FAIL() << "expected an error";
    } catch (const UnknownIdentifierError& e) {
        EXPECT_EQ(e.name(), "w");
        EXPECT_EQ(e.offset(), 11u);
    }
}

TEST(Parse, SyntaxErrors) {
    for (const char* bad : {"", "u +", "(u", "u)", "2u", "sin u", "1..2", "u ** 2", "sin()", "3e", "u,v", "@"}) {
        EXPECT_THROW((void)parse(bad), ParseError) << bad;
    }
}

TEST(Parse, NumberForms) {
    EXPECT_DOUBLE_EQ(evaluate(parse("1.5e-3"), std::array<double, 2>{}), 1.5e-3);
    EXPECT_DOUBLE_EQ(evaluate(parse(".5 + 4."), std::array<double, 2>{}), 4.5);
    EXPECT_DOUBLE_EQ(evaluate(parse("2E2"), std::array<double, 2>{}), 200.0);
}

TEST(Parse, DeepNestingIsRejectedNotOverflowed) {
    std::string s(5000, '(');
    s += "u";
    s += std::string(5000, ')');
    EXPECT_THROW((void)parse(s), ParseError);
}

TEST(Evaluate, PolynomialJets) {
    const Jet a = eval_at(parse("u^2 - v^2"), 0, 0);
    for (std::size_t k = 0; k < Jet::kSize; ++k) {
        const double want = k == Jet::index(2, 0) ? 2.0 : k == Jet::index(0, 2) ? -2.0 : 0.0;
        EXPECT_EQ(a[k], want) << k;
    }
    const Jet b = eval_at(parse("2*u*v"), 0, 0);
    for (std::size_t k = 0; k < Jet::kSize; ++k) EXPECT_EQ(b[k], k == Jet::index(1, 1) ? 2.0 : 0.0) << k;
}

TEST(Evaluate, SqrtOfQuadratic) {
    const Expr e = parse("sqrt(u^2+v^2+1)");
    const Jet j = eval_at(e, 0, 0);
    EXPECT_DOUBLE_EQ(j.value(), 1.0);
    EXPECT_EQ(j.du(), 0.0);
    EXPECT_EQ(j.dv(), 0.0);
    EXPECT_DOUBLE_EQ(j.duu(), 1.0);
    EXPECT_DOUBLE_EQ(j.dvv(), 1.0);
    EXPECT_EQ(j.duv(), 0.0);
    const auto f = [&](double u, double v) { return evaluate(e, std::array<double, 2>{u, v}); };
    EXPECT_NEAR(j.duu(), oracle::partial(f, 0, 0, 2, 0), 1e-7);
}

TEST(Evaluate, NameBindings) {
    const Expr e = parse("u - 2*v");
    const std::map<std::string, double, std::less<>> b{{"u", 1.0}, {"v", 3.0}};
    EXPECT_EQ(evaluate(e, b), -5.0);
}

TEST(Evaluate, DomainErrorsCarryLocation) {
    const Expr e = parse("1 + log(u - 1)");
    try {
        (void)eval_at(e, 0.5, 0.0);
        FAIL() << "expected an evaluation error";
    } catch (const EvaluationError& err) {
        EXPECT_NE(std::string(err.what()).find("log"), std::string::npos);
    }
    EXPECT_THROW((void)evaluate(parse("u/v"), std::array<double, 2>{1, 0}), EvaluationError);
}

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(-2.5e-10), "-2.5e-10");
    for (double x : {M_PI, 1.0 / 3.0, 6.02214076e23, 5e-324}) EXPECT_EQ(std::strtod(format_double(x).c_str(), nullptr), x);
}

TEST(ExprProperty, RoundTripReparsesIdentically) {
    std::mt19937_64 rng(42);
    std::vector<std::string> corpus{"-(u + v)*3", "u*-v", "- - u", "sin(cos(u))^2", "1e10 - 1E-10", "u/v/2"};
    for (int k = 0; k < 200; ++k) corpus.push_back(random_composite_expression(rng, 4));
    for (const auto& s : corpus) {
        const Expr e = parse(s);
        const Expr again = parse(e.to_string());
        EXPECT_TRUE(again.structurally_equal(e)) << s;
        EXPECT_EQ(again.to_string(), e.to_string());
    }
}

TEST(ExprProperty, ConstantJetsMatchPlainEvaluation) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-0.9, 0.9);
    for (int k = 0; k < 200; ++k) {
        const Expr e = parse(random_composite_expression(rng, 3));
        const double u = d(rng), v = d(rng);
        const double plain = evaluate(e, std::array<double, 2>{u, v});
        const std::array<Jet, 2> slots{Jet::constant(u), Jet::constant(v)};
        const Jet j = evaluate_on_jets(e, slots);
        EXPECT_LE(std::abs(j.value() - plain), 1e-14 * std::abs(plain)) << e.to_string();
        for (std::size_t c = 1; c < Jet::kSize; ++c) EXPECT_EQ(j[c], 0.0);
    }
}

TEST(ExprProperty, FuzzBytesAreRejectedCleanly) {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> byte(0, 255), len(0, 40);
    int rejected = 0;
    for (int k = 0; k < 10000; ++k) {
        std::string s(static_cast<std::size_t>(len(rng)), '\0');
        for (char& c : s) c = static_cast<char>(byte(rng));
        try {
            (void)parse(s);
        } catch (const ParseError&) {
            ++rejected;
        }
    }
    EXPECT_GT(rejected, 9900);
}

TEST(ExprProperty, FuzzGrammarTokens) {
    std::mt19937_64 rng(3);
    const std::vector<std::string> tokens{"u", "v", "1", "2.5", "(", ")", "+", "-", "*", "/", "^", "sin(", "sqrt(", " "};
    std::uniform_int_distribution<std::size_t> pick(0, tokens.size() - 1);
    std::uniform_int_distribution<int> len(1, 20);
    for (int k = 0; k < 10000; ++k) {
        std::string s;
        for (int t = len(rng); t > 0; --t) s += tokens[pick(rng)];
        try {
            const Expr e = parse(s);
            EXPECT_TRUE(parse(e.to_string()).structurally_equal(e)) << s;
        } catch (const ParseError&) {
        }
    }
}
