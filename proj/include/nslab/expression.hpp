#pragma once

#include "nslab/errors.hpp"

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace nslab {

class ParseError : public Error {
public:
    ParseError(const std::string& what, size_t position, int line, int column, std::vector<std::string> expected)
        : Error(ErrorKind::Parse, what), position_(position), line_(line), column_(column),
          expected_(std::move(expected)) {}

    size_t position() const { return position_; }
    int line() const { return line_; }
    int column() const { return column_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    size_t position_;
    int line_;
    int column_;
    std::vector<std::string> expected_;
};

// Variable slots: x1..x16, q1..q16, then v, u, w.
struct Bindings {
    static constexpr int kCoords = 16;
    static constexpr int kSlotV = 2 * kCoords;
    static constexpr int kSlotU = kSlotV + 1;
    static constexpr int kSlotW = kSlotV + 2;
    static constexpr int kSlots = kSlotV + 3;

    std::array<double, kSlots> slot{};

    double& x(int i) { return slot[static_cast<size_t>(i)]; }
    double& q(int i) { return slot[static_cast<size_t>(kCoords + i)]; }
    double& v() { return slot[kSlotV]; }
    double& u() { return slot[kSlotU]; }
    double& w() { return slot[kSlotW]; }
};

// Slot of a variable name, or -1.
int variable_slot(std::string_view name);

class Expression {
public:
    struct Node;

    // Grammar: reals, variables, + - * / ^ (right-associative), unary minus,
    // sin cos exp sqrt log, parentheses. Precedence ^ > unary - > * / > + -.
    static Expression parse(std::string_view src);

    double eval(const Bindings& b) const;
    // Canonical text: minimal parentheses, single spaces around + - * /.
    std::string str() const;
    // Names of the variables the expression mentions, sorted.
    std::vector<std::string> variables() const;
    bool uses_slot(int slot) const;

    static Expression constant(double value);

private:
    explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const Node> root_;
};

} // namespace nslab
