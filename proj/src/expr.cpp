#include "hammerfix/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <vector>

namespace hammerfix::expr {

namespace {

enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

const char* const kFunctions[] = {"exp", "ln", "sqrt", "sin", "cos", "abs"};

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

struct Expression::Node {
    Kind kind;
    double value = 0.0;       // Number
    std::string name;         // Call
    std::shared_ptr<const Node> lhs, rhs;

    std::string print() const {
        switch (kind) {
            case Kind::Number: return format_double(value);
            case Kind::Var:    return "t";
            case Kind::Neg:    return "(-" + lhs->print() + ")";
            case Kind::Add:    return "(" + lhs->print() + "+" + rhs->print() + ")";
            case Kind::Sub:    return "(" + lhs->print() + "-" + rhs->print() + ")";
            case Kind::Mul:    return "(" + lhs->print() + "*" + rhs->print() + ")";
            case Kind::Div:    return "(" + lhs->print() + "/" + rhs->print() + ")";
            case Kind::Pow:    return "(" + lhs->print() + "^" + rhs->print() + ")";
            case Kind::Call:   return name + "(" + lhs->print() + ")";
        }
        return "?";
    }

    double eval(double t) const {
        double r;
        switch (kind) {
            case Kind::Number: return value;
            case Kind::Var:    return t;
            case Kind::Neg:    return -lhs->eval(t);
            case Kind::Add:    r = lhs->eval(t) + rhs->eval(t); break;
            case Kind::Sub:    r = lhs->eval(t) - rhs->eval(t); break;
            case Kind::Mul:    r = lhs->eval(t) * rhs->eval(t); break;
            case Kind::Div: {
                double den = rhs->eval(t);
                if (den == 0.0)
                    throw DomainError("division by zero", print());
                r = lhs->eval(t) / den;
                break;
            }
            case Kind::Pow: {
                double base = lhs->eval(t);
                double expo = rhs->eval(t);
                if (base < 0.0 && expo != std::floor(expo))
                    throw DomainError("non-integer power of negative base", print());
                r = std::pow(base, expo);
                break;
            }
            case Kind::Call: {
                double arg = lhs->eval(t);
                if (name == "exp")       r = std::exp(arg);
                else if (name == "ln") {
                    if (arg <= 0.0)
                        throw DomainError("ln of non-positive argument", print());
                    r = std::log(arg);
                } else if (name == "sqrt") {
                    if (arg < 0.0)
                        throw DomainError("sqrt of negative argument", print());
                    r = std::sqrt(arg);
                } else if (name == "sin") r = std::sin(arg);
                else if (name == "cos")   r = std::cos(arg);
                else                      r = std::fabs(arg);  // abs
                break;
            }
            default: r = 0.0;
        }
        if (!std::isfinite(r))
            throw DomainError("non-finite value", print());
        return r;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make_node(Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        NodePtr e = sum();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) { ++pos_; return true; }
        return false;
    }

    NodePtr sum() {
        NodePtr e = product();
        for (;;) {
            if (accept('+'))      e = make_node(Kind::Add, e, product());
            else if (accept('-')) e = make_node(Kind::Sub, e, product());
            else return e;
        }
    }

    NodePtr product() {
        NodePtr e = unary();
        for (;;) {
            if (accept('*'))      e = make_node(Kind::Mul, e, unary());
            else if (accept('/')) e = make_node(Kind::Div, e, unary());
            else return e;
        }
    }

    NodePtr unary() {
        if (accept('-'))
            return make_node(Kind::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^'))
            return make_node(Kind::Pow, base, unary());  // right-associative
        return base;
    }

    NodePtr primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr e = sum();
            if (!accept(')'))
                throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const char* begin = src_.data() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin)
            throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Number;
        n->value = v;
        return n;
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        std::string name(src_.substr(start, pos_ - start));
        if (name == "t")
            return make_node(Kind::Var);
        for (const char* fn : kFunctions) {
            if (name == fn) {
                if (!accept('('))
                    throw ParseError("expected '(' after function " + name, pos_);
                NodePtr arg = sum();
                if (peek() == ',')
                    throw ParseError("function " + name + " takes exactly one argument", pos_);
                if (!accept(')'))
                    throw ParseError("expected ')'", pos_);
                auto n = std::make_shared<Expression::Node>();
                n->kind = Kind::Call;
                n->name = name;
                n->lhs = arg;
                return n;
            }
        }
        throw ParseError("unknown identifier '" + name + "'", start);
    }
};

}  // namespace

Expression Expression::parse(std::string_view source) {
    if (source.empty())
        throw ParseError("empty expression", 0);
    Parser p(source);
    return Expression(p.parse(), std::string(source));
}

double Expression::eval(double t) const {
    return root_->eval(t);
}

std::string Expression::print() const {
    return root_->print();
}

PositivityReport check_cone(const Expression& e, int grid_size) {
    if (grid_size < 2)
        throw std::invalid_argument("check_cone: grid_size must be >= 2");
    PositivityReport rep;
    rep.grid_size = grid_size;
    for (int j = 0; j < grid_size; ++j) {
        double t = static_cast<double>(j) / (grid_size - 1);
        double v = e.eval(t);
        if (j == 0 || v < rep.min_value) {
            rep.min_value = v;
            rep.argmin = t;
        }
        if (v > 0.0) rep.nontrivial = true;
    }
    return rep;
}

}  // namespace hammerfix::expr
