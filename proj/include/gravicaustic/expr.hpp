#pragma once

#include <cctype>
#include <memory>
#include <sstream>
#include <string>
#include <utility>

#include "gravicaustic/dual.hpp"
#include "gravicaustic/error.hpp"

namespace gravicaustic {

// Expression tree over {constant, x, unary -, + - * / ^, sin cos tan sqrt
// abs exp ln sinh cosh tanh}. Evaluation is templated so the same tree
// yields values, first and second derivatives via dual numbers.
struct ExprNode {
    enum class Kind { Constant, Variable, Neg, Add, Sub, Mul, Div, Pow, Func };

    Kind kind;
    double constant = 0.0;
    std::string func; // for Kind::Func
    std::unique_ptr<ExprNode> lhs;
    std::unique_ptr<ExprNode> rhs;

    template <typename T>
    T eval(const T& x) const {
        switch (kind) {
        case Kind::Constant: return T{constant};
        case Kind::Variable: return x;
        case Kind::Neg: return -lhs->eval(x);
        case Kind::Add: return lhs->eval(x) + rhs->eval(x);
        case Kind::Sub: return lhs->eval(x) - rhs->eval(x);
        case Kind::Mul: return lhs->eval(x) * rhs->eval(x);
        case Kind::Div: return lhs->eval(x) / rhs->eval(x);
        case Kind::Pow: return d_pow(lhs->eval(x), rhs->eval(x));
        case Kind::Func: {
            const T a = lhs->eval(x);
            if (func == "sin") return d_sin(a);
            if (func == "cos") return d_cos(a);
            if (func == "tan") return d_tan(a);
            if (func == "sqrt") return d_sqrt(a);
            if (func == "abs") return d_abs(a);
            if (func == "exp") return d_exp(a);
            if (func == "ln") return d_log(a);
            if (func == "sinh") return d_sinh(a);
            if (func == "cosh") return d_cosh(a);
            if (func == "tanh") return d_tanh(a);
            throw EvalError("unknown function: " + func);
        }
        }
        throw EvalError("corrupt expression node");
    }

    std::unique_ptr<ExprNode> clone() const {
        auto n = std::make_unique<ExprNode>();
        n->kind = kind;
        n->constant = constant;
        n->func = func;
        if (lhs) n->lhs = lhs->clone();
        if (rhs) n->rhs = rhs->clone();
        return n;
    }
};

using ExprPtr = std::unique_ptr<ExprNode>;

namespace detail {

inline ExprPtr make_node(ExprNode::Kind k, ExprPtr l = nullptr, ExprPtr r = nullptr) {
    auto n = std::make_unique<ExprNode>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

inline bool is_known_function(const std::string& id) {
    return id == "sin" || id == "cos" || id == "tan" || id == "sqrt" ||
           id == "abs" || id == "exp" || id == "ln" || id == "sinh" ||
           id == "cosh" || id == "tanh";
}

// Recursive descent; precedence ^ (right assoc) > unary - > * / > + -.
class ExprParser {
public:
    explicit ExprParser(std::string text) : text_(std::move(text)) {}

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input '" +
                                 text_.substr(pos_, 1) + "'",
                             pos_);
        return e;
    }

private:
    std::string text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_term();
        for (;;) {
            if (consume('+'))
                e = make_node(ExprNode::Kind::Add, std::move(e), parse_term());
            else if (consume('-'))
                e = make_node(ExprNode::Kind::Sub, std::move(e), parse_term());
            else
                return e;
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        for (;;) {
            if (consume('*'))
                e = make_node(ExprNode::Kind::Mul, std::move(e), parse_unary());
            else if (consume('/'))
                e = make_node(ExprNode::Kind::Div, std::move(e), parse_unary());
            else
                return e;
        }
    }

    ExprPtr parse_unary() {
        if (consume('-'))
            return make_node(ExprNode::Kind::Neg, parse_unary());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (consume('^')) {
            // Right associative; the exponent may carry a unary minus.
            return make_node(ExprNode::Kind::Pow, std::move(base), parse_unary());
        }
        return base;
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError("unexpected end of input, expected number, 'x', "
                             "function or '('",
                             pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_sum();
            if (!consume(')'))
                throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return parse_identifier();
        throw ParseError(std::string("unexpected character '") + c +
                             "', expected number, 'x', function or '('",
                         pos_);
    }

    ExprPtr parse_number() {
        const std::size_t begin = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                pos_ = p;
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            }
        }
        const std::string tok = text_.substr(begin, pos_ - begin);
        try {
            auto n = make_node(ExprNode::Kind::Constant);
            n->constant = std::stod(tok);
            return n;
        } catch (const std::exception&) {
            throw ParseError("malformed number '" + tok + "'", begin);
        }
    }

    ExprPtr parse_identifier() {
        const std::size_t begin = pos_;
        while (pos_ < text_.size() &&
               std::isalpha(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        const std::string id = text_.substr(begin, pos_ - begin);
        if (id == "x")
            return make_node(ExprNode::Kind::Variable);
        if (is_known_function(id)) {
            if (!consume('('))
                throw ParseError("expected '(' after function '" + id + "'", pos_);
            ExprPtr arg = parse_sum();
            if (!consume(')'))
                throw ParseError("expected ')' closing argument of '" + id + "'", pos_);
            auto n = make_node(ExprNode::Kind::Func, std::move(arg));
            n->func = id;
            return n;
        }
        throw ParseError("unknown identifier '" + id + "'", begin);
    }
};

} // namespace detail

inline ExprPtr parse_expression(const std::string& text) {
    return detail::ExprParser(text).parse();
}

// Fully parenthesized round-trippable form.
inline std::string print_expression(const ExprNode& e) {
    std::ostringstream os;
    os.precision(17);
    switch (e.kind) {
    case ExprNode::Kind::Constant: os << e.constant; break;
    case ExprNode::Kind::Variable: os << "x"; break;
    case ExprNode::Kind::Neg: os << "(-" << print_expression(*e.lhs) << ")"; break;
    case ExprNode::Kind::Add:
        os << "(" << print_expression(*e.lhs) << "+" << print_expression(*e.rhs) << ")";
        break;
    case ExprNode::Kind::Sub:
        os << "(" << print_expression(*e.lhs) << "-" << print_expression(*e.rhs) << ")";
        break;
    case ExprNode::Kind::Mul:
        os << "(" << print_expression(*e.lhs) << "*" << print_expression(*e.rhs) << ")";
        break;
    case ExprNode::Kind::Div:
        os << "(" << print_expression(*e.lhs) << "/" << print_expression(*e.rhs) << ")";
        break;
    case ExprNode::Kind::Pow:
        os << "(" << print_expression(*e.lhs) << "^" << print_expression(*e.rhs) << ")";
        break;
    case ExprNode::Kind::Func:
        os << e.func << "(" << print_expression(*e.lhs) << ")";
        break;
    }
    return os.str();
}

} // namespace gravicaustic
