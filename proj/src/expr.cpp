#include "hadlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "hadlab/errors.hpp"

namespace hadlab {

namespace {
enum class Op { num, var, add, sub, mul, div, pow, neg, call };
}

struct Expression::Node {
    Op op;
    double value = 0.0;
    double (*fn)(double) = nullptr;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

NodePtr make(Op op, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    std::string var_name; // fixed by the first unknown identifier

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw config_error("expression error at position " + std::to_string(pos) + ": " +
                           msg + " in '" + s + "'");
    }

    NodePtr parse() {
        NodePtr e = sum();
        skip();
        if (pos != s.size()) fail("trailing input");
        return e;
    }

    NodePtr sum() {
        NodePtr l = product();
        for (;;) {
            if (eat('+')) l = make(Op::add, l, product());
            else if (eat('-')) l = make(Op::sub, l, product());
            else return l;
        }
    }

    NodePtr product() {
        NodePtr l = unary();
        for (;;) {
            if (eat('*')) l = make(Op::mul, l, unary());
            else if (eat('/')) l = make(Op::div, l, unary());
            else return l;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Op::neg, unary());
        eat('+');
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) return make(Op::pow, base, unary()); // right-associative
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        const char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(s.c_str() + pos, &end);
            if (end == s.c_str() + pos) fail("bad number");
            pos = static_cast<std::size_t>(end - s.c_str());
            auto n = make(Op::num);
            const_cast<Expression::Node&>(*n).value = v;
            return n;
        }
        if (c == '(') {
            ++pos;
            NodePtr e = sum();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                ++pos;
            const std::string name = s.substr(start, pos - start);
            static const std::pair<const char*, double (*)(double)> fns[] = {
                {"sinh", std::sinh}, {"cosh", std::cosh}, {"tanh", std::tanh},
                {"exp", std::exp},   {"log", std::log},   {"sin", std::sin},
                {"cos", std::cos},   {"sqrt", std::sqrt}};
            for (const auto& [fname, fptr] : fns) {
                if (name == fname) {
                    if (!eat('(')) fail("expected '(' after function name");
                    NodePtr arg = sum();
                    if (!eat(')')) fail("missing ')'");
                    auto n = make(Op::call, arg);
                    const_cast<Expression::Node&>(*n).fn = fptr;
                    return n;
                }
            }
            if (name == "pi") {
                auto n = make(Op::num);
                const_cast<Expression::Node&>(*n).value = std::numbers::pi;
                return n;
            }
            if (name == "e") {
                auto n = make(Op::num);
                const_cast<Expression::Node&>(*n).value = std::numbers::e;
                return n;
            }
            if (var_name.empty()) var_name = name;
            if (name != var_name)
                fail("unknown identifier '" + name + "' (variable already named '" +
                     var_name + "')");
            return make(Op::var);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

double eval(const Expression::Node& n, double x) {
    switch (n.op) {
    case Op::num: return n.value;
    case Op::var: return x;
    case Op::add: return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Op::sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
    case Op::mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Op::div: return eval(*n.lhs, x) / eval(*n.rhs, x);
    case Op::pow: return std::pow(eval(*n.lhs, x), eval(*n.rhs, x));
    case Op::neg: return -eval(*n.lhs, x);
    case Op::call: return n.fn(eval(*n.lhs, x));
    }
    return 0.0;
}

} // namespace

Expression::Expression(const std::string& text) : text_(text) {
    Parser p(text);
    root_ = p.parse();
}

double Expression::operator()(double x) const { return eval(*root_, x); }

} // namespace hadlab
