#include "geo/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <system_error>

#include "geo/error.hpp"

namespace geo {

struct Expr::Node {
    Kind kind{};
    Op op{};
    Function fn{};
    double value = 0.0;
    std::string name;
    int slot = -1;
    std::size_t offset = 0;
    std::vector<Expr> children;
    bool constant = true;
};

Expr Expr::make_constant(double value, std::size_t offset) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = value;
    n->offset = offset;
    return Expr(std::move(n));
}

Expr Expr::make_variable(std::string name, int slot, std::size_t offset) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->name = std::move(name);
    n->slot = slot;
    n->offset = offset;
    n->constant = false;
    return Expr(std::move(n));
}

Expr Expr::make_unary(Op op, Expr child, std::size_t offset) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::unary;
    n->op = op;
    n->offset = offset;
    n->constant = child.is_constant();
    n->children.push_back(std::move(child));
    return Expr(std::move(n));
}

Expr Expr::make_binary(Op op, Expr lhs, Expr rhs, std::size_t offset) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::binary;
    n->op = op;
    n->offset = offset;
    n->constant = lhs.is_constant() && rhs.is_constant();
    n->children.push_back(std::move(lhs));
    n->children.push_back(std::move(rhs));
    return Expr(std::move(n));
}

Expr Expr::make_call(Function fn, Expr arg, std::size_t offset) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::call;
    n->fn = fn;
    n->offset = offset;
    n->constant = arg.is_constant();
    n->children.push_back(std::move(arg));
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
Expr::Op Expr::op() const { return node_->op; }
Expr::Function Expr::function() const { return node_->fn; }
double Expr::constant_value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
int Expr::slot() const { return node_->slot; }
std::size_t Expr::offset() const { return node_->offset; }
std::span<const Expr> Expr::children() const { return node_->children; }
bool Expr::is_constant() const { return node_->constant; }

bool Expr::structurally_equal(const Expr& other) const {
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::constant:
            if (a.value != b.value) return false;
            break;
        case Kind::variable:
            if (a.name != b.name) return false;
            break;
        case Kind::unary:
        case Kind::binary:
            if (a.op != b.op) return false;
            break;
        case Kind::call:
            if (a.fn != b.fn) return false;
            break;
    }
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!a.children[i].structurally_equal(b.children[i])) return false;
    }
    return true;
}

const char* function_name(Expr::Function fn) {
    switch (fn) {
        case Expr::Function::sin: return "sin";
        case Expr::Function::cos: return "cos";
        case Expr::Function::exp: return "exp";
        case Expr::Function::log: return "log";
        case Expr::Function::sqrt: return "sqrt";
    }
    return "?";
}

namespace {

const char* op_symbol(Expr::Op op) {
    switch (op) {
        case Expr::Op::add: return " + ";
        case Expr::Op::sub: return " - ";
        case Expr::Op::mul: return " * ";
        case Expr::Op::div: return " / ";
        case Expr::Op::pow: return "^";
        case Expr::Op::neg: return "-";
    }
    return "?";
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

std::string Expr::to_string() const {
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::constant: return format_double(n.value);
        case Kind::variable: return n.name;
        case Kind::unary: return "(-" + n.children[0].to_string() + ")";
        case Kind::binary:
            return "(" + n.children[0].to_string() + op_symbol(n.op) + n.children[1].to_string() + ")";
        case Kind::call: return std::string(function_name(n.fn)) + "(" + n.children[0].to_string() + ")";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    Tok kind = Tok::end;
    std::size_t offset = 0;
    std::string_view text;
    double number = 0.0;
};

const char* describe(Tok t) {
    switch (t) {
        case Tok::number: return "number";
        case Tok::ident: return "identifier";
        case Tok::plus: return "'+'";
        case Tok::minus: return "'-'";
        case Tok::star: return "'*'";
        case Tok::slash: return "'/'";
        case Tok::caret: return "'^'";
        case Tok::lparen: return "'('";
        case Tok::rparen: return "')'";
        case Tok::end: return "end of input";
    }
    return "?";
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() &&
               (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r')) {
            ++pos_;
        }
        Token t;
        t.offset = pos_;
        if (pos_ >= src_.size()) return t;
        const char c = src_[pos_];
        if (is_digit(c) || c == '.') return lex_number();
        if (is_ident_start(c)) {
            std::size_t end = pos_;
            while (end < src_.size() && is_ident_char(src_[end])) ++end;
            t.kind = Tok::ident;
            t.text = src_.substr(pos_, end - pos_);
            pos_ = end;
            return t;
        }
        switch (c) {
            case '+': t.kind = Tok::plus; break;
            case '-': t.kind = Tok::minus; break;
            case '*': t.kind = Tok::star; break;
            case '/': t.kind = Tok::slash; break;
            case '^': t.kind = Tok::caret; break;
            case '(': t.kind = Tok::lparen; break;
            case ')': t.kind = Tok::rparen; break;
            default: throw ParseError(pos_, "unexpected character");
        }
        t.text = src_.substr(pos_, 1);
        ++pos_;
        return t;
    }

private:
    Token lex_number() {
        const std::size_t start = pos_;
        std::size_t p = pos_;
        std::size_t mantissa_digits = 0;
        while (p < src_.size() && is_digit(src_[p])) ++p, ++mantissa_digits;
        if (p < src_.size() && src_[p] == '.') {
            ++p;
            while (p < src_.size() && is_digit(src_[p])) ++p, ++mantissa_digits;
        }
        if (mantissa_digits == 0) throw ParseError(start, "expected digits in number");
        if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
            ++p;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            std::size_t exp_digits = 0;
            while (p < src_.size() && is_digit(src_[p])) ++p, ++exp_digits;
            if (exp_digits == 0) throw ParseError(p, "expected digits in exponent");
        }
        Token t;
        t.kind = Tok::number;
        t.offset = start;
        t.text = src_.substr(start, p - start);
        // from_chars does not accept a leading '+' but the lexeme never has one.
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
        if (ec == std::errc::result_out_of_range) throw ParseError(start, "number out of range");
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
            throw ParseError(start, "malformed number");
        }
        pos_ = p;
        return t;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

constexpr int kMaxDepth = 200;
constexpr int kPrefixNegPower = 30;

struct InfixPower {
    int left;
    int right;
};

bool infix_power(Tok t, InfixPower& out) {
    switch (t) {
        case Tok::plus:
        case Tok::minus: out = {10, 11}; return true;
        case Tok::star:
        case Tok::slash: out = {20, 21}; return true;
        case Tok::caret: out = {40, 39}; return true;
        default: return false;
    }
}

class Parser {
public:
    Parser(std::string_view src, std::span<const std::string> vars) : lexer_(src), vars_(vars) {
        advance();
    }

    Expr parse() {
        Expr e = expression(0, 0);
        if (cur_.kind != Tok::end) {
            throw ParseError(cur_.offset, std::string("expected operator or end of input, found ") +
                                              describe(cur_.kind));
        }
        return e;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    void expect(Tok kind) {
        if (cur_.kind != kind) {
            throw ParseError(cur_.offset,
                             std::string("expected ") + describe(kind) + ", found " + describe(cur_.kind));
        }
        advance();
    }

    Expr expression(int min_power, int depth) {
        if (depth > kMaxDepth) throw ParseError(cur_.offset, "expression nested too deeply");
        Expr lhs = prefix(depth);
        InfixPower p{};
        while (infix_power(cur_.kind, p) && p.left >= min_power) {
            const Tok op = cur_.kind;
            const std::size_t at = cur_.offset;
            advance();
            Expr rhs = expression(p.right, depth + 1);
            lhs = Expr::make_binary(to_op(op), std::move(lhs), std::move(rhs), at);
        }
        return lhs;
    }

    static Expr::Op to_op(Tok t) {
        switch (t) {
            case Tok::plus: return Expr::Op::add;
            case Tok::minus: return Expr::Op::sub;
            case Tok::star: return Expr::Op::mul;
            case Tok::slash: return Expr::Op::div;
            default: return Expr::Op::pow;
        }
    }

    Expr prefix(int depth) {
        const Token t = cur_;
        switch (t.kind) {
            case Tok::number:
                advance();
                return Expr::make_constant(t.number, t.offset);
            case Tok::minus: {
                advance();
                Expr operand = expression(kPrefixNegPower, depth + 1);
                return Expr::make_unary(Expr::Op::neg, std::move(operand), t.offset);
            }
            case Tok::lparen: {
                advance();
                Expr inner = expression(0, depth + 1);
                expect(Tok::rparen);
                return inner;
            }
            case Tok::ident: return identifier(depth);
            default:
                throw ParseError(t.offset, std::string("expected number, identifier, '-' or '(', found ") +
                                               describe(t.kind));
        }
    }

    Expr identifier(int depth) {
        const Token t = cur_;
        advance();
        static constexpr Expr::Function kFunctions[] = {Expr::Function::sin, Expr::Function::cos,
                                                        Expr::Function::exp, Expr::Function::log,
                                                        Expr::Function::sqrt};
        for (Expr::Function fn : kFunctions) {
            if (t.text == function_name(fn)) {
                expect(Tok::lparen);
                Expr arg = expression(0, depth + 1);
                expect(Tok::rparen);
                return Expr::make_call(fn, std::move(arg), t.offset);
            }
        }
        for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == t.text) return Expr::make_variable(std::string(t.text), static_cast<int>(i), t.offset);
        }
        throw UnknownIdentifierError(t.offset, std::string(t.text));
    }

    Lexer lexer_;
    std::span<const std::string> vars_;
    Token cur_;
};

// ---------------------------------------------------------------------------
// Evaluation

double checked_plain(Expr::Function fn, double x) {
    switch (fn) {
        case Expr::Function::sin: return std::sin(x);
        case Expr::Function::cos: return std::cos(x);
        case Expr::Function::exp: return std::exp(x);
        case Expr::Function::log:
            if (!(x > 0.0)) throw DomainError("log", x);
            return std::log(x);
        case Expr::Function::sqrt:
            if (!(x >= 0.0)) throw DomainError("sqrt", x);
            return std::sqrt(x);
    }
    return 0.0;
}

Jet apply(Expr::Function fn, const Jet& x) {
    switch (fn) {
        case Expr::Function::sin: return sin(x);
        case Expr::Function::cos: return cos(x);
        case Expr::Function::exp: return exp(x);
        case Expr::Function::log: return log(x);
        case Expr::Function::sqrt: return sqrt(x);
    }
    return x;
}

double plain_pow(double base, double e) {
    if (std::nearbyint(e) == e && std::abs(e) <= 1 << 20) {
        if (base == 0.0 && e < 0) throw DomainError("pow", base);
        // Same multiplication sequence as the jet power, so values agree.
        unsigned n = static_cast<unsigned>(std::abs(e));
        double result = 1.0, b = base;
        while (n != 0) {
            if (n & 1u) result *= b;
            n >>= 1;
            if (n != 0) b *= b;
        }
        return e < 0 ? 1.0 / result : result;
    }
    if (!(base > 0.0)) throw DomainError("pow", base);
    return std::pow(base, e);
}

double plain_op(Expr::Op op, double a, double b) {
    switch (op) {
        case Expr::Op::add: return a + b;
        case Expr::Op::sub: return a - b;
        case Expr::Op::mul: return a * b;
        case Expr::Op::div:
            if (b == 0.0) throw DomainError("division", b);
            return a / b;
        case Expr::Op::pow: return plain_pow(a, b);
        case Expr::Op::neg: return -a;
    }
    return 0.0;
}

[[noreturn]] void rethrow_located(const Expr& e, const DomainError& err) {
    throw EvaluationError(std::string(err.what()) + " (expression offset " + std::to_string(e.offset()) + ")");
}

template <class Lookup>
double eval_plain(const Expr& e, const Lookup& lookup) {
    switch (e.kind()) {
        case Expr::Kind::constant: return e.constant_value();
        case Expr::Kind::variable: return lookup(e);
        case Expr::Kind::unary: return -eval_plain(e.children()[0], lookup);
        case Expr::Kind::binary: {
            const double a = eval_plain(e.children()[0], lookup);
            const double b = eval_plain(e.children()[1], lookup);
            try {
                return plain_op(e.op(), a, b);
            } catch (const DomainError& err) {
                rethrow_located(e, err);
            }
        }
        case Expr::Kind::call: {
            const double a = eval_plain(e.children()[0], lookup);
            try {
                return checked_plain(e.function(), a);
            } catch (const DomainError& err) {
                rethrow_located(e, err);
            }
        }
    }
    return 0.0;
}

template <class Lookup>
Jet eval_jet(const Expr& e, const Lookup& lookup) {
    switch (e.kind()) {
        case Expr::Kind::constant: return Jet::constant(e.constant_value());
        case Expr::Kind::variable: return lookup(e);
        case Expr::Kind::unary: return -eval_jet(e.children()[0], lookup);
        case Expr::Kind::binary: {
            const Expr& lhs = e.children()[0];
            const Expr& rhs = e.children()[1];
            Jet a = eval_jet(lhs, lookup);
            try {
                if (e.op() == Expr::Op::pow) {
                    // Constant exponents (integer ones in particular) stay exact.
                    if (rhs.is_constant()) return pow(a, eval_plain(rhs, [](const Expr&) { return 0.0; }));
                    Jet b = eval_jet(rhs, lookup);
                    if (!(a.value() > 0.0)) throw DomainError("pow", a.value());
                    return exp(b * log(a));
                }
                Jet b = eval_jet(rhs, lookup);
                switch (e.op()) {
                    case Expr::Op::add: return a + b;
                    case Expr::Op::sub: return a - b;
                    case Expr::Op::mul: return a * b;
                    case Expr::Op::div: return a / b;
                    default: break;
                }
            } catch (const DomainError& err) {
                rethrow_located(e, err);
            }
            return a;
        }
        case Expr::Kind::call: {
            Jet a = eval_jet(e.children()[0], lookup);
            try {
                return apply(e.function(), a);
            } catch (const DomainError& err) {
                rethrow_located(e, err);
            }
        }
    }
    return Jet{};
}

template <class T>
auto by_slot(std::span<const T> slots) {
    return [slots](const Expr& v) -> T {
        const auto i = static_cast<std::size_t>(v.slot());
        if (v.slot() < 0 || i >= slots.size()) throw EvaluationError("unbound variable '" + v.name() + "'");
        return slots[i];
    };
}

template <class T>
auto by_name(const std::map<std::string, T, std::less<>>& bindings) {
    return [&bindings](const Expr& v) -> T {
        auto it = bindings.find(v.name());
        if (it == bindings.end()) throw EvaluationError("unbound variable '" + v.name() + "'");
        return it->second;
    };
}

}  // namespace

Expr parse_expression(std::string_view source, std::span<const std::string> variables) {
    if (source.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw ParseError(0, "empty expression");
    }
    return Parser(source, variables).parse();
}

Expr parse_expression(std::string_view source, std::initializer_list<std::string> variables) {
    std::vector<std::string> vars(variables);
    return parse_expression(source, std::span<const std::string>(vars));
}

Jet evaluate_on_jets(const Expr& e, std::span<const Jet> slots) { return eval_jet(e, by_slot(slots)); }

double evaluate(const Expr& e, std::span<const double> slots) { return eval_plain(e, by_slot(slots)); }

Jet evaluate_on_jets(const Expr& e, const std::map<std::string, Jet, std::less<>>& bindings) {
    return eval_jet(e, by_name(bindings));
}

double evaluate(const Expr& e, const std::map<std::string, double, std::less<>>& bindings) {
    return eval_plain(e, by_name(bindings));
}

}  // namespace geo
