#pragma once

// Payoff expressions: a small arithmetic language over the spatial
// coordinates x1..xN.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' number)?
//   base   := '-' base | number | var | func '(' expr (',' expr)* ')'
//           | '(' expr ')'
//
// func is one of abs, sqrt, exp (unary) and min, max (two or more args).
// Numbers are decimal literals with optional exponent. Parse errors carry
// the byte offset of the offending token. Evaluation is total on finite
// inputs except division by zero, sqrt of a negative and powers that do
// not produce a finite value, which raise PayoffEvalError.

#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "towgame/io.hpp"
#include "towgame/vec.hpp"

namespace towgame {

class PayoffParseError : public std::runtime_error {
public:
    PayoffParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class PayoffEvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PayoffExpr {
public:
    enum class Func { abs, sqrt, exp, min, max };

    struct Node {
        enum class Kind { number, variable, add, sub, mul, div, pow, neg, call };
        Kind kind{};
        double number = 0.0;        // Kind::number
        std::size_t var_index = 0;  // Kind::variable, 1-based
        double exponent = 0.0;      // Kind::pow
        Func func{};                // Kind::call
        std::vector<std::size_t> children;
    };

    static PayoffExpr parse(std::string_view src);

    double eval(const Vec& x) const { return eval_node(root_, x); }

    /// Canonical fully-parenthesized form; reparses to an identical tree.
    std::string serialize() const { return serialize_node(root_); }

    /// Highest coordinate index referenced (0 when constant).
    std::size_t max_variable() const {
        std::size_t m = 0;
        for (const Node& n : nodes_)
            if (n.kind == Node::Kind::variable) m = std::max(m, n.var_index);
        return m;
    }

    bool structurally_equal(const PayoffExpr& o) const {
        return nodes_equal(root_, o, o.root_);
    }

    const std::string& source() const { return source_; }

private:
    std::vector<Node> nodes_;
    std::size_t root_ = 0;
    std::string source_;

    double eval_node(std::size_t id, const Vec& x) const {
        const Node& n = nodes_[id];
        switch (n.kind) {
            case Node::Kind::number: return n.number;
            case Node::Kind::variable:
                if (n.var_index > x.size())
                    throw PayoffEvalError("coordinate x" + std::to_string(n.var_index) +
                                          " undefined in dimension " + std::to_string(x.size()));
                return x[n.var_index - 1];
            case Node::Kind::add: return eval_node(n.children[0], x) + eval_node(n.children[1], x);
            case Node::Kind::sub: return eval_node(n.children[0], x) - eval_node(n.children[1], x);
            case Node::Kind::mul: return eval_node(n.children[0], x) * eval_node(n.children[1], x);
            case Node::Kind::div: {
                double den = eval_node(n.children[1], x);
                if (den == 0.0) throw PayoffEvalError("division by zero");
                return eval_node(n.children[0], x) / den;
            }
            case Node::Kind::pow: {
                double b = eval_node(n.children[0], x);
                double r = std::pow(b, n.exponent);
                if (!std::isfinite(r)) throw PayoffEvalError("power has no finite value");
                return r;
            }
            case Node::Kind::neg: return -eval_node(n.children[0], x);
            case Node::Kind::call: {
                switch (n.func) {
                    case Func::abs: return std::abs(eval_node(n.children[0], x));
                    case Func::sqrt: {
                        double a = eval_node(n.children[0], x);
                        if (a < 0.0) throw PayoffEvalError("sqrt of negative value");
                        return std::sqrt(a);
                    }
                    case Func::exp: return std::exp(eval_node(n.children[0], x));
                    case Func::min: {
                        double m = eval_node(n.children[0], x);
                        for (std::size_t i = 1; i < n.children.size(); ++i)
                            m = std::min(m, eval_node(n.children[i], x));
                        return m;
                    }
                    case Func::max: {
                        double m = eval_node(n.children[0], x);
                        for (std::size_t i = 1; i < n.children.size(); ++i)
                            m = std::max(m, eval_node(n.children[i], x));
                        return m;
                    }
                }
                throw PayoffEvalError("unreachable");
            }
        }
        throw PayoffEvalError("unreachable");
    }

    std::string serialize_node(std::size_t id) const {
        const Node& n = nodes_[id];
        switch (n.kind) {
            case Node::Kind::number: return format_float(n.number);
            case Node::Kind::variable: return "x" + std::to_string(n.var_index);
            case Node::Kind::add: return "(" + serialize_node(n.children[0]) + " + " + serialize_node(n.children[1]) + ")";
            case Node::Kind::sub: return "(" + serialize_node(n.children[0]) + " - " + serialize_node(n.children[1]) + ")";
            case Node::Kind::mul: return "(" + serialize_node(n.children[0]) + " * " + serialize_node(n.children[1]) + ")";
            case Node::Kind::div: return "(" + serialize_node(n.children[0]) + " / " + serialize_node(n.children[1]) + ")";
            case Node::Kind::pow: return "(" + serialize_node(n.children[0]) + "^" + format_float(n.exponent) + ")";
            case Node::Kind::neg: return "(-" + serialize_node(n.children[0]) + ")";
            case Node::Kind::call: {
                std::string name;
                switch (n.func) {
                    case Func::abs: name = "abs"; break;
                    case Func::sqrt: name = "sqrt"; break;
                    case Func::exp: name = "exp"; break;
                    case Func::min: name = "min"; break;
                    case Func::max: name = "max"; break;
                }
                std::string out = name + "(";
                for (std::size_t i = 0; i < n.children.size(); ++i) {
                    if (i) out += ", ";
                    out += serialize_node(n.children[i]);
                }
                return out + ")";
            }
        }
        return {};
    }

    bool nodes_equal(std::size_t a, const PayoffExpr& ob, std::size_t b) const {
        const Node& x = nodes_[a];
        const Node& y = ob.nodes_[b];
        if (x.kind != y.kind) return false;
        switch (x.kind) {
            case Node::Kind::number:
                return x.number == y.number;
            case Node::Kind::variable:
                return x.var_index == y.var_index;
            case Node::Kind::pow:
                if (x.exponent != y.exponent) return false;
                break;
            case Node::Kind::call:
                if (x.func != y.func) return false;
                break;
            default: break;
        }
        if (x.children.size() != y.children.size()) return false;
        for (std::size_t i = 0; i < x.children.size(); ++i)
            if (!nodes_equal(x.children[i], ob, y.children[i])) return false;
        return true;
    }

    // --- recursive-descent parser ---

    struct Parser {
        std::string_view src;
        std::size_t pos = 0;
        PayoffExpr* out;

        void skip_ws() {
            while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
        }
        bool eof() {
            skip_ws();
            return pos >= src.size();
        }
        char peek() {
            skip_ws();
            return pos < src.size() ? src[pos] : '\0';
        }

        std::size_t add(PayoffExpr::Node n) {
            out->nodes_.push_back(std::move(n));
            return out->nodes_.size() - 1;
        }

        [[noreturn]] void fail(const std::string& msg) {
            skip_ws();
            throw PayoffParseError(msg, pos);
        }

        double read_number(bool allow_sign) {
            skip_ws();
            std::size_t start = pos;
            std::size_t p = pos;
            if (allow_sign && p < src.size() && src[p] == '-') ++p;
            std::size_t digits_begin = p;
            while (p < src.size() && (std::isdigit(static_cast<unsigned char>(src[p])) || src[p] == '.')) ++p;
            if (p == digits_begin) fail("expected number");
            if (p < src.size() && (src[p] == 'e' || src[p] == 'E')) {
                std::size_t q = p + 1;
                if (q < src.size() && (src[q] == '+' || src[q] == '-')) ++q;
                if (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) {
                    ++q;
                    while (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) ++q;
                    p = q;
                }
            }
            double value = 0.0;
            auto res = std::from_chars(src.data() + start, src.data() + p, value);
            if (res.ec != std::errc() || res.ptr != src.data() + p)
                throw PayoffParseError("malformed number", start);
            pos = p;
            return value;
        }

        std::size_t parse_expr() {
            std::size_t lhs = parse_term();
            while (true) {
                char c = peek();
                if (c != '+' && c != '-') break;
                ++pos;
                std::size_t rhs = parse_term();
                Node n;
                n.kind = (c == '+') ? Node::Kind::add : Node::Kind::sub;
                n.children = {lhs, rhs};
                lhs = add(std::move(n));
            }
            return lhs;
        }

        std::size_t parse_term() {
            std::size_t lhs = parse_factor();
            while (true) {
                char c = peek();
                if (c != '*' && c != '/') break;
                ++pos;
                std::size_t rhs = parse_factor();
                Node n;
                n.kind = (c == '*') ? Node::Kind::mul : Node::Kind::div;
                n.children = {lhs, rhs};
                lhs = add(std::move(n));
            }
            return lhs;
        }

        std::size_t parse_factor() {
            std::size_t base = parse_base();
            if (peek() == '^') {
                ++pos;
                double e = read_number(/*allow_sign=*/true);
                Node n;
                n.kind = Node::Kind::pow;
                n.exponent = e;
                n.children = {base};
                return add(std::move(n));
            }
            return base;
        }

        std::size_t parse_base() {
            char c = peek();
            if (c == '\0') fail("expected expression");
            if (c == '-') {
                ++pos;
                std::size_t inner = parse_base();
                // fold -number so serialized negative literals round-trip
                if (out->nodes_[inner].kind == Node::Kind::number) {
                    out->nodes_[inner].number = -out->nodes_[inner].number;
                    return inner;
                }
                Node n;
                n.kind = Node::Kind::neg;
                n.children = {inner};
                return add(std::move(n));
            }
            if (c == '(') {
                ++pos;
                std::size_t e = parse_expr();
                if (peek() != ')') fail("expected ')'");
                ++pos;
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                Node n;
                n.kind = Node::Kind::number;
                n.number = read_number(false);
                return add(std::move(n));
            }
            if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
            fail("unexpected character");
        }

        std::size_t parse_identifier() {
            skip_ws();
            std::size_t start = pos;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
                ++pos;
            std::string_view name = src.substr(start, pos - start);

            if (name.size() >= 2 && name[0] == 'x' &&
                std::isdigit(static_cast<unsigned char>(name[1]))) {
                std::size_t idx = 0;
                auto res = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
                if (res.ec == std::errc() && res.ptr == name.data() + name.size() && idx >= 1 &&
                    idx <= kMaxDim) {
                    Node n;
                    n.kind = Node::Kind::variable;
                    n.var_index = idx;
                    return add(std::move(n));
                }
                throw PayoffParseError("unknown identifier '" + std::string(name) + "'", start);
            }

            Func f;
            std::size_t min_args = 1, max_args = 1;
            if (name == "abs") f = Func::abs;
            else if (name == "sqrt") f = Func::sqrt;
            else if (name == "exp") f = Func::exp;
            else if (name == "min") { f = Func::min; min_args = 2; max_args = 16; }
            else if (name == "max") { f = Func::max; min_args = 2; max_args = 16; }
            else throw PayoffParseError("unknown identifier '" + std::string(name) + "'", start);

            if (peek() != '(') fail("expected '('");
            ++pos;
            std::vector<std::size_t> args;
            args.push_back(parse_expr());
            while (peek() == ',') {
                ++pos;
                args.push_back(parse_expr());
            }
            if (peek() != ')') fail("expected ')'");
            ++pos;
            if (args.size() < min_args || args.size() > max_args)
                throw PayoffParseError("wrong argument count for '" + std::string(name) + "'", start);
            Node n;
            n.kind = Node::Kind::call;
            n.func = f;
            n.children = std::move(args);
            return add(std::move(n));
        }
    };
};

inline PayoffExpr PayoffExpr::parse(std::string_view src) {
    PayoffExpr expr;
    expr.source_ = std::string(src);
    Parser p{src, 0, &expr};
    if (p.eof()) throw PayoffParseError("empty expression", 0);
    expr.root_ = p.parse_expr();
    if (!p.eof()) p.fail("trailing input");
    return expr;
}

inline PayoffExpr parse_payoff(std::string_view src) { return PayoffExpr::parse(src); }

/// Named catalog entries resolved to expressions for a given dimension.
inline std::string payoff_catalog(const std::string& name, std::size_t dim) {
    auto sum_of_squares = [&] {
        std::string s;
        for (std::size_t i = 1; i <= dim; ++i) {
            if (!s.empty()) s += " + ";
            s += "x" + std::to_string(i) + "^2";
        }
        return s;
    };
    if (name == "zero") return "0";
    if (name == "one") return "1";
    if (name == "first_coordinate") return "x1";
    if (name == "norm") return dim == 1 ? std::string("abs(x1)") : "sqrt(" + sum_of_squares() + ")";
    if (name == "norm_squared") return sum_of_squares();
    throw std::invalid_argument("unknown payoff catalog entry '" + name + "'");
}

// Final payoff f(x): a parsed expression or a native function, plus the
// Lipschitz-constant estimate used by report budgets.
class Payoff {
public:
    static Payoff expression(std::string src) {
        Payoff p;
        p.expr_ = PayoffExpr::parse(src);
        p.source_ = std::move(src);
        p.hash_ = fnv1a64(p.source_);
        return p;
    }

    static Payoff named(const std::string& name, std::size_t dim) {
        Payoff p = expression(payoff_catalog(name, dim));
        p.label_ = name;
        return p;
    }

    /// Test/tool hook; label only used for metadata.
    static Payoff native(std::function<double(const Vec&)> fn, std::string label) {
        Payoff p;
        p.fn_ = std::move(fn);
        p.source_ = std::move(label);
        p.hash_ = fnv1a64(p.source_);
        return p;
    }

    double operator()(const Vec& x) const { return fn_ ? fn_(x) : expr_.eval(x); }

    const std::string& source() const { return source_; }
    std::uint64_t hash() const { return hash_; }
    bool is_expression() const { return !fn_; }
    const PayoffExpr& expr() const { return expr_; }

    // Gradient sampling at quasi-random points of the box [lo, hi]; returns
    // the largest observed gradient norm. Used only for report budgets.
    double lipschitz_estimate(const Vec& lo, const Vec& hi,
                              std::size_t samples = 10000) const {
        const std::size_t dim = lo.size();
        // additive quasi-random sequence (fractional parts of multiples of
        // irrational steps), deterministic across runs
        static constexpr double steps[kMaxDim] = {0.6180339887498949, 0.7548776662466927,
                                                  0.5698402909980532, 0.8191725133961644};
        double best = 0.0;
        Vec x(dim);
        for (std::size_t k = 0; k < samples; ++k) {
            for (std::size_t d = 0; d < dim; ++d) {
                double u = std::fmod(0.5 + (k + 1) * steps[d], 1.0);
                x[d] = lo[d] + (hi[d] - lo[d]) * u;
            }
            double g2 = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double step = 1e-5 * std::max(1.0, std::abs(hi[d] - lo[d]));
                Vec xp = x, xm = x;
                xp[d] += step;
                xm[d] -= step;
                double fp, fm;
                try {
                    fp = (*this)(xp);
                    fm = (*this)(xm);
                } catch (const PayoffEvalError&) {
                    continue;
                }
                double g = (fp - fm) / (2.0 * step);
                g2 += g * g;
            }
            best = std::max(best, std::sqrt(g2));
        }
        return best;
    }

private:
    PayoffExpr expr_;
    std::function<double(const Vec&)> fn_;
    std::string source_;
    std::string label_;
    std::uint64_t hash_ = 0;
};

}  // namespace towgame
