#pragma once

#include <functional>
#include <memory>
#include <string>

namespace hadlab {

/// Parses a one-variable arithmetic expression into a callable.
///
/// Grammar: numbers, the variable (any identifier not matching a function or
/// constant), + - * / ^ (right-assoc), unary minus, parentheses, and the
/// functions sinh cosh tanh exp log sin cos sqrt. Constants: pi, e.
/// Example: "sinh(2*r)/2". Throws hadlab::config_error on malformed input.
class Expression {
public:
    struct Node; ///< parse-tree node; public for the implementation file only

    explicit Expression(const std::string& text);
    double operator()(double x) const;
    const std::string& text() const noexcept { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace hadlab
