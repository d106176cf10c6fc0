#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fracwin::dsl {

struct SourcePos {
    int line = 1;
    int column = 1;
};

/// Positioned parse diagnostic with the token set that would have been
/// accepted.
struct Diagnostic {
    SourcePos pos;
    std::string message;
    std::vector<std::string> expected;

    std::string render() const;
};

/// Thrown by evaluation on division by zero or a non-finite intermediate;
/// carries the pretty-printed offending subexpression.
class EvalError : public std::runtime_error {
public:
    EvalError(std::string message, std::string subexpr)
        : std::runtime_error(message + " in `" + subexpr + "`"), subexpr_(std::move(subexpr)) {}
    const std::string& subexpr() const noexcept { return subexpr_; }

private:
    std::string subexpr_;
};

namespace detail {
struct Node;
}

/// Immutable expression over literals, variables x1..xn and t, unary minus,
/// + - * / ^ (literal exponents only) and sin/cos/exp/abs.
///
/// Conventions: '^' binds tighter than unary minus ("-2^2" is -4), integer
/// exponents with |n| <= 16 are evaluated by repeated multiplication.
class Expr {
public:
    Expr() = default;

    /// x must supply at least `dim()` components; t is the time variable.
    double evaluate(std::span<const double> x, double t) const;

    /// Canonical text form; parsing it back and printing again is a fixed
    /// point.
    std::string pretty() const;

    /// Declared dimension this expression was parsed against.
    int dim() const noexcept { return dim_; }

    bool empty() const noexcept { return root_ == nullptr; }

private:
    friend struct ExprAccess;
    std::shared_ptr<const detail::Node> root_;
    int dim_ = 0;
};

template <typename T>
struct ParseResult {
    std::optional<T> value;
    Diagnostic error;

    bool ok() const noexcept { return value.has_value(); }
    const T& operator*() const { return *value; }
};

/// Parses one expression against a declared state dimension (dim = 0 allows
/// only t and literals). Total: any input yields a value or a diagnostic,
/// never an exception.
ParseResult<Expr> parse_expression(std::string_view source, int dim);

/// One key = value assignment from a system document, with the raw value
/// text and its position (values are parsed lazily by the consumer).
struct KeyValue {
    std::string key;
    std::string value;
    SourcePos pos;
};

/// A parsed system-definition document: per-component field expressions,
/// an optional Lyapunov expression, and the common metadata. Keys this
/// module does not interpret are preserved in `extras` for the caller.
struct ParsedSystem {
    std::string name;
    int dim = 0;
    std::vector<Expr> components;       // field.1 .. field.dim
    std::optional<Expr> lyapunov;       // lyapunov.v
    double alpha = 0.0;
    double omega = 0.0;
    double t0 = 0.0;
    std::vector<double> x0;
    double horizon = 0.0;               // t_end
    std::vector<KeyValue> extras;
};

/// Parses a system document: `key = value` lines, `#` comments, one
/// scenario per document. Required keys: alpha, omega, x0, field.1..field.n
/// (contiguous, n >= 1, n == |x0|). Optional: name, t0 (default 0),
/// t_end (default 50), lyapunov.v. Everything else lands in extras.
ParseResult<ParsedSystem> parse_system(std::string_view source);

}  // namespace fracwin::dsl
