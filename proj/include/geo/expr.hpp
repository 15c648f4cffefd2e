#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geo/jet.hpp"

namespace geo {

/// Immutable expression tree. Copies share nodes; safe to share across threads.
///
/// Grammar (whitespace insignificant):
///
///   expr    := term { ("+" | "-") term }
///   term    := unary { ("*" | "/") unary }
///   unary   := "-" unary | power
///   power   := primary [ "^" unary ]          (right-associative)
///   primary := number | variable | function "(" expr ")" | "(" expr ")"
///   function:= "sin" | "cos" | "exp" | "log" | "sqrt"
///   number  := digits [ "." digits ] [ ("e"|"E") ["+"|"-"] digits ]
///            | "." digits [ exponent ]
class Expr {
public:
    enum class Kind { constant, variable, unary, binary, call };
    enum class Op { add, sub, mul, div, pow, neg };
    enum class Function { sin, cos, exp, log, sqrt };

    static Expr make_constant(double value, std::size_t offset = 0);
    static Expr make_variable(std::string name, int slot, std::size_t offset = 0);
    static Expr make_unary(Op op, Expr child, std::size_t offset = 0);
    static Expr make_binary(Op op, Expr lhs, Expr rhs, std::size_t offset = 0);
    static Expr make_call(Function fn, Expr arg, std::size_t offset = 0);

    Kind kind() const;
    Op op() const;
    Function function() const;
    double constant_value() const;
    const std::string& name() const;
    /// Position of a variable in the declared variable list of the parse.
    int slot() const;
    /// Byte offset of the node's token in the source text.
    std::size_t offset() const;
    std::span<const Expr> children() const;

    /// True when no variable occurs in the tree.
    bool is_constant() const;

    bool structurally_equal(const Expr& other) const;

    /// Fully parenthesized text that reparses to the same tree.
    std::string to_string() const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

const char* function_name(Expr::Function fn);

/// Parses `source`; every identifier that is not a function must be in
/// `variables`. Throws ParseError / UnknownIdentifierError.
Expr parse_expression(std::string_view source, std::span<const std::string> variables);
Expr parse_expression(std::string_view source, std::initializer_list<std::string> variables);

/// Evaluates with values given in declared-variable order (slot order).
Jet evaluate_on_jets(const Expr& e, std::span<const Jet> slots);
double evaluate(const Expr& e, std::span<const double> slots);

/// Name-keyed variants. Every variable of `e` must be bound.
Jet evaluate_on_jets(const Expr& e, const std::map<std::string, Jet, std::less<>>& bindings);
double evaluate(const Expr& e, const std::map<std::string, double, std::less<>>& bindings);

/// Shortest round-trip decimal text of a double.
std::string format_double(double x);

}  // namespace geo
