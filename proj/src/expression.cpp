#include "nslab/expression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace nslab {

namespace {

enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt, Log };

constexpr std::array<std::pair<std::string_view, Op>, 5> kFunctions{{
    {"sin", Op::Sin}, {"cos", Op::Cos}, {"exp", Op::Exp}, {"sqrt", Op::Sqrt}, {"log", Op::Log}}};

int precedence(Op op) {
    switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
    }
}

std::string slot_name(int slot) {
    if (slot < Bindings::kCoords) return "x" + std::to_string(slot + 1);
    if (slot < Bindings::kSlotV) return "q" + std::to_string(slot - Bindings::kCoords + 1);
    if (slot == Bindings::kSlotV) return "v";
    if (slot == Bindings::kSlotU) return "u";
    return "w";
}

} // namespace

struct Expression::Node {
    Op op = Op::Num;
    double value = 0.0;
    int slot = -1;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
};

int variable_slot(std::string_view name) {
    if (name == "v") return Bindings::kSlotV;
    if (name == "u") return Bindings::kSlotU;
    if (name == "w") return Bindings::kSlotW;
    if (name.size() >= 2 && (name[0] == 'x' || name[0] == 'q') && name[1] != '0') {
        int k = 0;
        auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
        if (ec == std::errc() && ptr == name.data() + name.size() && k >= 1 && k <= Bindings::kCoords)
            return (name[0] == 'x' ? 0 : Bindings::kCoords) + k - 1;
    }
    return -1;
}

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse_all() {
        skip_space();
        NodePtr e = expr();
        skip_space();
        if (pos_ < src_.size()) fail({"operator", "end of input"});
        return e;
    }

private:
    std::string_view src_;
    size_t pos_ = 0;

    [[noreturn]] void fail(std::vector<std::string> expected, const std::string& problem = {}) const {
        int line = 1, column = 1;
        for (size_t i = 0; i < pos_ && i < src_.size(); ++i) {
            if (src_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::ostringstream os;
        os << "syntax error at position " << pos_ << " (line " << line << ", column " << column << "): ";
        if (!problem.empty()) {
            os << problem;
        } else {
            os << (pos_ < src_.size() ? "unexpected '" + std::string(1, src_[pos_]) + "'" : "unexpected end of input");
            os << ", expected ";
            for (size_t i = 0; i < expected.size(); ++i) os << (i ? " or " : "") << expected[i];
        }
        throw ParseError(os.str(), pos_, line, column, std::move(expected));
    }

    void skip_space() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            skip_space();
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Op::Add, lhs, term());
            else if (accept('-')) lhs = make(Op::Sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Op::Mul, lhs, unary());
            else if (accept('/')) lhs = make(Op::Div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Op::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_space();
        if (pos_ >= src_.size()) fail({"number", "variable", "function", "'('"});
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!accept(')')) fail({"')'"});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail({"number", "variable", "function", "'('"});
    }

    NodePtr number() {
        const size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ - start == 1 && src_[start] == '.') {
            pos_ = start;
            fail({"digit"}, "malformed number");
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                fail({"exponent digits"});
            }
            while (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) ++p;
            pos_ = p;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
        if (ec != std::errc() || ptr != src_.data() + pos_) {
            pos_ = start;
            fail({"number"}, "malformed number");
        }
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::Num;
        n->value = value;
        return n;
    }

    NodePtr identifier() {
        const size_t start = pos_;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string_view name = src_.substr(start, pos_ - start);
        for (const auto& [fname, op] : kFunctions) {
            if (name != fname) continue;
            if (!accept('(')) fail({"'(' after " + std::string(fname)});
            NodePtr arg = expr();
            if (accept(',')) {
                pos_ = start;
                fail({}, "arity mismatch: " + std::string(fname) + " takes exactly one argument");
            }
            if (!accept(')')) fail({"')'"});
            return make(op, arg);
        }
        const int slot = variable_slot(name);
        if (slot < 0) {
            pos_ = start;
            fail({"variable"}, "unknown identifier '" + std::string(name) + "'");
        }
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::Var;
        n->slot = slot;
        return n;
    }
};

double eval_node(const Expression::Node& n, const Bindings& b) {
    switch (n.op) {
    case Op::Num: return n.value;
    case Op::Var: return b.slot[static_cast<size_t>(n.slot)];
    case Op::Neg: return -eval_node(*n.a, b);
    case Op::Add: return eval_node(*n.a, b) + eval_node(*n.b, b);
    case Op::Sub: return eval_node(*n.a, b) - eval_node(*n.b, b);
    case Op::Mul: return eval_node(*n.a, b) * eval_node(*n.b, b);
    case Op::Div: return eval_node(*n.a, b) / eval_node(*n.b, b);
    case Op::Pow: return std::pow(eval_node(*n.a, b), eval_node(*n.b, b));
    case Op::Sin: return std::sin(eval_node(*n.a, b));
    case Op::Cos: return std::cos(eval_node(*n.a, b));
    case Op::Exp: return std::exp(eval_node(*n.a, b));
    case Op::Sqrt: return std::sqrt(eval_node(*n.a, b));
    case Op::Log: return std::log(eval_node(*n.a, b));
    }
    return 0.0;
}

std::string number_text(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void print(const Expression::Node& n, std::string& out);

// A negative literal prints with a leading minus and binds like unary minus.
int precedence(const Expression::Node& n) {
    if (n.op == Op::Num && std::signbit(n.value)) return precedence(Op::Neg);
    return precedence(n.op);
}

void print_child(const Expression::Node& child, bool parens, std::string& out) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
}

void print(const Expression::Node& n, std::string& out) {
    const int p = precedence(n.op);
    switch (n.op) {
    case Op::Num: out += number_text(n.value); return;
    case Op::Var: out += slot_name(n.slot); return;
    case Op::Neg:
        out += '-';
        print_child(*n.a, precedence(*n.a) < p, out);
        return;
    case Op::Pow:
        print_child(*n.a, precedence(*n.a) <= p, out);
        out += '^';
        print_child(*n.b, precedence(*n.b) < precedence(Op::Neg), out);
        return;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div: {
        static constexpr const char* sym[] = {" + ", " - ", " * ", " / "};
        const int idx = n.op == Op::Add ? 0 : n.op == Op::Sub ? 1 : n.op == Op::Mul ? 2 : 3;
        print_child(*n.a, precedence(*n.a) < p, out);
        out += sym[idx];
        print_child(*n.b, precedence(*n.b) <= p, out);
        return;
    }
    default:
        for (const auto& [fname, op] : kFunctions)
            if (op == n.op) out += fname;
        out += '(';
        print(*n.a, out);
        out += ')';
        return;
    }
}

void collect(const Expression::Node& n, std::set<int>& slots) {
    if (n.op == Op::Var) slots.insert(n.slot);
    if (n.a) collect(*n.a, slots);
    if (n.b) collect(*n.b, slots);
}

} // namespace

Expression Expression::parse(std::string_view src) { return Expression(Parser(src).parse_all()); }

Expression Expression::constant(double value) {
    auto n = std::make_shared<Node>();
    n->op = Op::Num;
    n->value = value;
    return Expression(n);
}

double Expression::eval(const Bindings& b) const { return eval_node(*root_, b); }

std::string Expression::str() const {
    std::string out;
    print(*root_, out);
    return out;
}

std::vector<std::string> Expression::variables() const {
    std::set<int> slots;
    collect(*root_, slots);
    std::vector<std::string> names;
    for (int s : slots) names.push_back(slot_name(s));
    std::sort(names.begin(), names.end());
    return names;
}

bool Expression::uses_slot(int slot) const {
    std::set<int> slots;
    collect(*root_, slots);
    return slots.count(slot) > 0;
}

} // namespace nslab
