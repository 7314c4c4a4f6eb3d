#pragma once

// Small expression language for user-defined profiles and fields.
//
//   expr    := literal | variable | constant | func '(' expr ')' | '(' expr ')'
//            | '-' expr | expr op expr
//   op      := '+' '-' (lowest) < '*' '/' < unary '-' < '^' (right associative)
//   func    := sin cos tan ln exp sqrt abs
//   constant:= pi e
//
// There is no implicit multiplication. Parsing is single-pass Pratt style.

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annulus_lab/core.hpp"

namespace annulus_lab {

class ParseError : public Error {
  public:
    ParseError(std::size_t position, std::vector<std::string> expected, const std::string& detail)
        : Error(format(position, expected, detail)), position_(position), expected_(std::move(expected)) {}

    std::size_t position() const { return position_; }
    const std::vector<std::string>& expected() const { return expected_; }

  private:
    static std::string format(std::size_t pos, const std::vector<std::string>& expected, const std::string& detail) {
        std::string msg = "syntax error at position " + std::to_string(pos) + ": " + detail;
        if (!expected.empty()) {
            msg += " (expected one of:";
            for (const auto& e : expected) msg += " " + e;
            msg += ")";
        }
        return msg;
    }
    std::size_t position_;
    std::vector<std::string> expected_;
};

/// Raised at evaluation time, e.g. ln of a non-positive value.
class EvalError : public Error {
  public:
    using Error::Error;
};

class Expression {
  public:
    /// Parses text over the given variable names (e.g. {"r"} or {"r", "theta"}).
    static Expression parse(std::string_view text, std::vector<std::string> variables = {"r"}) {
        Expression e;
        e.source_ = std::string(text);
        e.variables_ = std::move(variables);
        Parser p{e, text};
        e.root_ = p.parse_all();
        return e;
    }

    /// Evaluates with values given in the order of variables().
    double eval(std::span<const double> values) const {
        if (values.size() != variables_.size()) throw EvalError("expression: wrong number of variable values");
        return eval_node(root_, values);
    }
    double operator()(double v) const { return eval(std::span<const double>(&v, 1)); }
    double operator()(std::initializer_list<double> vs) const {
        return eval(std::span<const double>(vs.begin(), vs.size()));
    }

    const std::vector<std::string>& variables() const { return variables_; }
    const std::string& source() const { return source_; }
    bool uses_variable(std::size_t index) const {
        for (const auto& n : nodes_)
            if (n.kind == Kind::variable && n.index == index) return true;
        return false;
    }

    /// Canonical fully parenthesised text; parsing it back evaluates identically.
    std::string print() const { return print_node(root_); }

  private:
    enum class Kind { number, variable, negate, add, sub, mul, div, pow, call };
    enum class Func { sin, cos, tan, ln, exp, sqrt, abs };

    struct Node {
        Kind kind;
        double value = 0.0;
        std::size_t index = 0;  // variable index or function id
        int lhs = -1, rhs = -1;
    };

    std::string source_;
    std::vector<std::string> variables_;
    std::vector<Node> nodes_;
    int root_ = -1;

    static constexpr std::string_view kFuncNames[] = {"sin", "cos", "tan", "ln", "exp", "sqrt", "abs"};

    int add_node(Node n) {
        nodes_.push_back(n);
        return static_cast<int>(nodes_.size()) - 1;
    }

    std::string describe(std::span<const double> values) const {
        std::string s;
        for (std::size_t i = 0; i < variables_.size(); ++i) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%s%s=%.17g", i ? ", " : "", variables_[i].c_str(), values[i]);
            s += buf;
        }
        return s;
    }

    double eval_node(int id, std::span<const double> values) const {
        const Node& n = nodes_[id];
        switch (n.kind) {
            case Kind::number: return n.value;
            case Kind::variable: return values[n.index];
            case Kind::negate: return -eval_node(n.lhs, values);
            case Kind::add: return eval_node(n.lhs, values) + eval_node(n.rhs, values);
            case Kind::sub: return eval_node(n.lhs, values) - eval_node(n.rhs, values);
            case Kind::mul: return eval_node(n.lhs, values) * eval_node(n.rhs, values);
            case Kind::div: {
                double den = eval_node(n.rhs, values);
                if (den == 0.0) throw EvalError("division by zero in '" + source_ + "' at " + describe(values));
                return eval_node(n.lhs, values) / den;
            }
            case Kind::pow: {
                double b = eval_node(n.lhs, values), x = eval_node(n.rhs, values);
                double out = std::pow(b, x);
                if (std::isnan(out) && !std::isnan(b) && !std::isnan(x))
                    throw EvalError("non-real power in '" + source_ + "' at " + describe(values));
                return out;
            }
            case Kind::call: {
                double a = eval_node(n.lhs, values);
                switch (static_cast<Func>(n.index)) {
                    case Func::sin: return std::sin(a);
                    case Func::cos: return std::cos(a);
                    case Func::tan: return std::tan(a);
                    case Func::exp: return std::exp(a);
                    case Func::abs: return std::abs(a);
                    case Func::ln:
                        if (!(a > 0.0)) throw EvalError("ln of non-positive value in '" + source_ + "' at " + describe(values));
                        return std::log(a);
                    case Func::sqrt:
                        if (a < 0.0) throw EvalError("sqrt of negative value in '" + source_ + "' at " + describe(values));
                        return std::sqrt(a);
                }
            }
        }
        return 0.0;
    }

    std::string print_node(int id) const {
        const Node& n = nodes_[id];
        auto bin = [&](const char* op) { return "(" + print_node(n.lhs) + op + print_node(n.rhs) + ")"; };
        switch (n.kind) {
            case Kind::number: {
                char buf[40];
                std::snprintf(buf, sizeof buf, "%.17g", n.value);
                return buf;
            }
            case Kind::variable: return variables_[n.index];
            case Kind::negate: return "(-" + print_node(n.lhs) + ")";
            case Kind::add: return bin("+");
            case Kind::sub: return bin("-");
            case Kind::mul: return bin("*");
            case Kind::div: return bin("/");
            case Kind::pow: return bin("^");
            case Kind::call: return std::string(kFuncNames[n.index]) + "(" + print_node(n.lhs) + ")";
        }
        return {};
    }

    struct Token {
        enum Type { number, ident, op, lparen, rparen, end } type;
        std::size_t pos;
        std::string text;
        double value = 0.0;
    };

    struct Parser {
        Expression& expr;
        std::string_view text;
        std::vector<Token> tokens{};
        std::size_t cur = 0;
        int depth = 0;

        static constexpr int kAdditive = 10, kMultiplicative = 20, kUnary = 30, kPower = 40;

        std::vector<std::string> operand_expected() const {
            std::vector<std::string> e{"number", "variable", "function", "constant", "'('", "'-'"};
            return e;
        }
        std::vector<std::string> operator_expected() const {
            std::vector<std::string> e{"'+'", "'-'", "'*'", "'/'", "'^'"};
            e.push_back(depth > 0 ? "')'" : "end of input");
            return e;
        }

        void tokenize() {
            std::size_t i = 0;
            while (i < text.size()) {
                char c = text[i];
                if (std::isspace(static_cast<unsigned char>(c))) {
                    ++i;
                } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                    std::size_t start = i;
                    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) ++i;
                    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
                        std::size_t j = i + 1;
                        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
                        if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
                            i = j;
                            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
                        }
                    }
                    std::string lit(text.substr(start, i - start));
                    char* endp = nullptr;
                    double v = std::strtod(lit.c_str(), &endp);
                    if (endp != lit.c_str() + lit.size() || std::count(lit.begin(), lit.end(), '.') > 1)
                        throw ParseError(start, {"number"}, "malformed numeric literal '" + lit + "'");
                    tokens.push_back({Token::number, start, lit, v});
                } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                    std::size_t start = i;
                    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
                    tokens.push_back({Token::ident, start, std::string(text.substr(start, i - start))});
                } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
                    tokens.push_back({Token::op, i, std::string(1, c)});
                    ++i;
                } else if (c == '(') {
                    tokens.push_back({Token::lparen, i, "("});
                    ++i;
                } else if (c == ')') {
                    tokens.push_back({Token::rparen, i, ")"});
                    ++i;
                } else {
                    throw ParseError(i, {}, std::string("unexpected character '") + c + "'");
                }
            }
            tokens.push_back({Token::end, text.size(), ""});
        }

        const Token& peek() const { return tokens[cur]; }
        const Token& next() { return tokens[cur++]; }

        int parse_all() {
            tokenize();
            int root = parse_expr(0);
            if (peek().type != Token::end) {
                throw ParseError(peek().pos, operator_expected(),
                                 peek().type == Token::rparen ? "unbalanced ')'" : "unexpected token '" + peek().text + "'");
            }
            return root;
        }

        static int infix_power(const Token& t) {
            if (t.type != Token::op) return -1;
            switch (t.text[0]) {
                case '+': case '-': return kAdditive;
                case '*': case '/': return kMultiplicative;
                case '^': return kPower;
            }
            return -1;
        }

        int parse_expr(int min_power) {
            int lhs = parse_prefix();
            for (;;) {
                const Token& t = peek();
                int power = infix_power(t);
                if (power < 0) {
                    if (t.type == Token::end || (t.type == Token::rparen && depth > 0)) break;
                    throw ParseError(t.pos, operator_expected(), "unexpected token '" + t.text + "'");
                }
                if (power <= min_power) break;
                next();
                // '^' is right associative: its right operand may contain another '^'.
                int rhs = parse_expr(t.text[0] == '^' ? power - 1 : power);
                Kind k = t.text[0] == '+' ? Kind::add
                       : t.text[0] == '-' ? Kind::sub
                       : t.text[0] == '*' ? Kind::mul
                       : t.text[0] == '/' ? Kind::div
                                          : Kind::pow;
                lhs = expr.add_node({k, 0.0, 0, lhs, rhs});
            }
            return lhs;
        }

        int parse_prefix() {
            const Token t = next();
            switch (t.type) {
                case Token::number: return expr.add_node({Kind::number, t.value});
                case Token::op:
                    if (t.text == "-") {
                        int operand = parse_expr(kUnary);
                        return expr.add_node({Kind::negate, 0.0, 0, operand});
                    }
                    break;
                case Token::lparen: {
                    ++depth;
                    int inner = parse_expr(0);
                    expect_rparen(t.pos);
                    --depth;
                    return inner;
                }
                case Token::ident: return parse_identifier(t);
                default: break;
            }
            throw ParseError(t.pos, operand_expected(),
                             t.type == Token::end ? "unexpected end of input" : "unexpected token '" + t.text + "'");
        }

        void expect_rparen(std::size_t open_pos) {
            if (peek().type != Token::rparen)
                throw ParseError(peek().pos, operator_expected(),
                                 "missing ')' for '(' at position " + std::to_string(open_pos));
            next();
        }

        int parse_identifier(const Token& t) {
            for (std::size_t v = 0; v < expr.variables_.size(); ++v)
                if (t.text == expr.variables_[v]) return expr.add_node({Kind::variable, 0.0, v});
            if (t.text == "pi") return expr.add_node({Kind::number, kPi});
            if (t.text == "e") return expr.add_node({Kind::number, std::numbers::e});
            for (std::size_t f = 0; f < std::size(kFuncNames); ++f) {
                if (t.text != kFuncNames[f]) continue;
                if (peek().type != Token::lparen) throw ParseError(peek().pos, {"'('"}, "function '" + t.text + "' needs '('");
                std::size_t open = next().pos;
                ++depth;
                int arg = parse_expr(0);
                expect_rparen(open);
                --depth;
                return expr.add_node({Kind::call, 0.0, f, arg});
            }
            std::vector<std::string> known = expr.variables_;
            known.insert(known.end(), {"pi", "e"});
            for (auto name : kFuncNames) known.emplace_back(name);
            throw ParseError(t.pos, known, "unknown identifier '" + t.text + "'");
        }
    };
};

}  // namespace annulus_lab
