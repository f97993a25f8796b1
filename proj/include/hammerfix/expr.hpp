#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hammerfix::expr {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    std::size_t position;
};

// Evaluation left the reals (ln/sqrt of a negative, division by zero,
// non-integer power of a negative base, or any non-finite intermediate).
struct DomainError : std::runtime_error {
    DomainError(const std::string& msg, std::string offending)
        : std::runtime_error(msg + " in sub-expression: " + offending),
          subexpression(std::move(offending)) {}
    std::string subexpression;
};

// Immutable single-variable real expression over `t`.
// Grammar: decimal literals, `t`, binary + - * / ^ (^ right-associative),
// unary -, parentheses, one-argument calls exp ln sqrt sin cos abs.
class Expression {
public:
    static Expression parse(std::string_view source);

    double eval(double t) const;

    const std::string& source() const { return source_; }

    // Canonical fully-parenthesized form; reparses to an expression that
    // evaluates identically.
    std::string print() const;

    struct Node;

private:
    Expression(std::shared_ptr<const Node> root, std::string source)
        : root_(std::move(root)), source_(std::move(source)) {}

    std::shared_ptr<const Node> root_;
    std::string source_;
};

enum class ConeVerdict { Member, NonMember, IndeterminateNearZero };

struct PositivityReport {
    double min_value = 0.0;
    double argmin = 0.0;
    bool nontrivial = false;  // some sample strictly positive
    int grid_size = 0;

    bool member() const { return min_value >= 0.0 && nontrivial; }
    ConeVerdict verdict(double zero_band = 0.0) const {
        if (min_value < -zero_band) return ConeVerdict::NonMember;
        if (min_value < 0.0) return ConeVerdict::IndeterminateNearZero;
        return nontrivial ? ConeVerdict::Member : ConeVerdict::NonMember;
    }
};

// Samples e on the uniform grid {j/(grid_size-1)} and reports min/argmin
// and whether any sample is strictly positive.
PositivityReport check_cone(const Expression& e, int grid_size);

}  // namespace hammerfix::expr
