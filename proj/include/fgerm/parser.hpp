#pragma once

// Recursive-descent reader for the text forms of scalars, Laurent
// polynomials, vector fields, diffeomorphism tuples and commutator words.
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/' | <juxtaposition>) unary)*
//   unary := '-' unary | power
//   power := atom ('^' '-'? digits)?
//   atom  := digits | 'i' | 'x'digits | 'd'digits | '(' expr (',' expr)* ')'

#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "fgerm/diffeo.hpp"
#include "fgerm/error.hpp"
#include "fgerm/laurent_poly.hpp"
#include "fgerm/lie_span.hpp"
#include "fgerm/scalar.hpp"
#include "fgerm/vector_field.hpp"

namespace fgerm::parse
{

/// Byte offsets [begin, end) into the source, with the 1-based line and
/// column of `begin`.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

enum class NodeKind { number, imag, variable, derivation, neg, add, sub, mul, div, pow, tuple };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    Span span;
    mpz_class number;     ///< number literal
    std::size_t index = 0; ///< one-based variable or derivation index
    int exponent = 0;      ///< pow
    std::vector<NodePtr> args;
};

/// Structural equality, ignoring spans.
inline bool same_tree(const Node &a, const Node &b)
{
    if (a.kind != b.kind || a.number != b.number || a.index != b.index || a.exponent != b.exponent ||
        a.args.size() != b.args.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (!same_tree(*a.args[i], *b.args[i])) {
            return false;
        }
    }
    return true;
}

inline NodePtr make_node(NodeKind kind, Span span, std::vector<NodePtr> args = {})
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->span = span;
    n->args = std::move(args);
    return n;
}

namespace detail
{

class Parser
{
public:
    Parser(std::string_view text, std::size_t first_line) : text_(text), first_line_(first_line) {}

    NodePtr parse_all()
    {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return e;
    }

    [[noreturn]] void fail(const std::string &msg, std::optional<std::size_t> at = std::nullopt) const
    {
        const Span s = span_at(at.value_or(pos_));
        throw parse_error(msg, s.line, s.column);
    }

    Span span_at(std::size_t offset) const
    {
        Span s{offset, offset, first_line_, 1};
        for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++s.line;
                s.column = 1;
            } else {
                ++s.column;
            }
        }
        return s;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }
    bool at_end()
    {
        skip_ws();
        return pos_ >= text_.size();
    }
    char peek()
    {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    Span finish(std::size_t begin) const
    {
        Span s = span_at(begin);
        s.end = pos_;
        return s;
    }
    bool starts_atom()
    {
        const char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == 'i' || c == 'x' || c == 'd' || c == '(';
    }
    std::string digits()
    {
        const std::size_t b = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        return std::string(text_.substr(b, pos_ - b));
    }
    std::size_t index_after(char letter)
    {
        const std::size_t at = pos_;
        ++pos_;
        const std::string d = digits();
        if (d.empty()) {
            fail(std::string("expected an index after '") + letter + "'", at);
        }
        if (d.size() > 6 || std::stoul(d) == 0) {
            fail("index must be a positive integer", at);
        }
        return std::stoul(d);
    }

    NodePtr expr()
    {
        skip_ws();
        const std::size_t b = pos_;
        NodePtr acc = term();
        for (;;) {
            const char c = peek();
            if (c != '+' && c != '-') {
                return acc;
            }
            ++pos_;
            NodePtr rhs = term();
            acc = make_node(c == '+' ? NodeKind::add : NodeKind::sub, finish(b), {acc, rhs});
        }
    }

    NodePtr term()
    {
        skip_ws();
        const std::size_t b = pos_;
        NodePtr acc = unary();
        for (;;) {
            const char c = peek();
            NodeKind k;
            if (c == '*' || c == '/') {
                ++pos_;
                k = c == '*' ? NodeKind::mul : NodeKind::div;
            } else if (starts_atom()) {
                k = NodeKind::mul;
            } else {
                return acc;
            }
            NodePtr rhs = unary();
            acc = make_node(k, finish(b), {acc, rhs});
        }
    }

    NodePtr unary()
    {
        skip_ws();
        const std::size_t b = pos_;
        if (peek() == '-') {
            ++pos_;
            NodePtr inner = unary();
            return make_node(NodeKind::neg, finish(b), {inner});
        }
        return power();
    }

    NodePtr power()
    {
        skip_ws();
        const std::size_t b = pos_;
        NodePtr base = atom();
        if (peek() != '^') {
            return base;
        }
        ++pos_;
        bool negative = false;
        if (peek() == '-') {
            negative = true;
            ++pos_;
        }
        skip_ws();
        const std::size_t at = pos_;
        const std::string d = digits();
        if (d.empty()) {
            fail("expected an integer exponent", at);
        }
        if (d.size() > 6) {
            fail("exponent too large", at);
        }
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::pow;
        n->span = finish(b);
        n->exponent = negative ? -std::stoi(d) : std::stoi(d);
        n->args = {base};
        return n;
    }

    NodePtr atom()
    {
        skip_ws();
        const std::size_t b = pos_;
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            auto n = std::make_shared<Node>();
            n->kind = NodeKind::number;
            n->number = mpz_class(digits());
            n->span = finish(b);
            return n;
        }
        if (c == 'i') {
            ++pos_;
            return make_node(NodeKind::imag, finish(b));
        }
        if (c == 'x' || c == 'd') {
            auto n = std::make_shared<Node>();
            n->kind = c == 'x' ? NodeKind::variable : NodeKind::derivation;
            n->index = index_after(c);
            n->span = finish(b);
            return n;
        }
        if (c == '(') {
            ++pos_;
            std::vector<NodePtr> items{expr()};
            while (peek() == ',') {
                ++pos_;
                items.push_back(expr());
            }
            if (peek() != ')') {
                fail("expected ')'");
            }
            ++pos_;
            if (items.size() == 1) {
                return items.front();
            }
            return make_node(NodeKind::tuple, finish(b), std::move(items));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t first_line_;
    std::size_t pos_ = 0;
};

inline int precedence(NodeKind k)
{
    switch (k) {
    case NodeKind::add:
    case NodeKind::sub:
        return 1;
    case NodeKind::mul:
    case NodeKind::div:
        return 2;
    case NodeKind::neg:
        return 3;
    case NodeKind::pow:
        return 4;
    default:
        return 5;
    }
}

} // namespace detail

/// Parses one expression. `first_line` offsets reported line numbers.
inline NodePtr parse_expression(std::string_view text, std::size_t first_line = 1)
{
    return detail::Parser(text, first_line).parse_all();
}

/// Minimal-parenthesis printer; parse_expression(print(t)) is structurally
/// equal to t.
inline std::string print(const Node &n)
{
    auto wrap = [](const Node &child, bool parens) { return parens ? "(" + print(child) + ")" : print(child); };
    const int p = detail::precedence(n.kind);
    switch (n.kind) {
    case NodeKind::number:
        return n.number.get_str();
    case NodeKind::imag:
        return "i";
    case NodeKind::variable:
        return "x" + std::to_string(n.index);
    case NodeKind::derivation:
        return "d" + std::to_string(n.index);
    case NodeKind::neg:
        return "-" + wrap(*n.args[0], detail::precedence(n.args[0]->kind) < p);
    case NodeKind::pow:
        return wrap(*n.args[0], detail::precedence(n.args[0]->kind) <= p) + "^" + std::to_string(n.exponent);
    case NodeKind::tuple: {
        std::string out = "(";
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            out += (i ? ", " : "") + print(*n.args[i]);
        }
        return out + ")";
    }
    default: {
        const char *op = n.kind == NodeKind::add ? " + " : n.kind == NodeKind::sub ? " - " : n.kind == NodeKind::mul ? "*" : "/";
        // right operands bind as written, so equal precedence needs parens
        return wrap(*n.args[0], detail::precedence(n.args[0]->kind) < p) + op +
               wrap(*n.args[1], detail::precedence(n.args[1]->kind) <= p);
    }
    }
}

// Lowering --------------------------------------------------------------

/// A value during lowering: a polynomial, a field, or a tuple of polynomials.
struct Value {
    std::optional<LaurentPoly> poly;
    std::optional<VectorField> field;
    std::optional<std::vector<LaurentPoly>> tuple;
};

namespace detail
{
[[noreturn]] inline void lowering_error(const Node &n, const std::string &msg)
{
    throw parse_error(msg, n.span.line, n.span.column);
}

inline Value lower(const Node &n, std::size_t dim)
{
    auto poly = [&](const Node &c) {
        Value v = lower(c, dim);
        if (!v.poly) {
            lowering_error(c, "expected a polynomial");
        }
        return *v.poly;
    };
    switch (n.kind) {
    case NodeKind::number:
        return {LaurentPoly::constant(dim, Scalar(mpq_class(n.number))), {}, {}};
    case NodeKind::imag:
        return {LaurentPoly::constant(dim, Scalar::imag_unit()), {}, {}};
    case NodeKind::variable:
        if (n.index > dim) {
            throw dimension_mismatch("x" + std::to_string(n.index) + " used with dimension " + std::to_string(dim) +
                                     " at line " + std::to_string(n.span.line) + ", column " +
                                     std::to_string(n.span.column));
        }
        return {LaurentPoly::variable(dim, n.index - 1), {}, {}};
    case NodeKind::derivation:
        if (n.index > dim) {
            throw dimension_mismatch("d" + std::to_string(n.index) + " used with dimension " + std::to_string(dim) +
                                     " at line " + std::to_string(n.span.line) + ", column " +
                                     std::to_string(n.span.column));
        }
        return {{}, VectorField::along(n.index - 1, LaurentPoly::constant(dim, Scalar(1))), {}};
    case NodeKind::pow: {
        const LaurentPoly base = poly(*n.args[0]);
        if (n.exponent < 0 && !base.is_monomial()) {
            lowering_error(n, "negative powers need a monomial base");
        }
        return {base.pow(n.exponent), {}, {}};
    }
    case NodeKind::neg: {
        Value v = lower(*n.args[0], dim);
        if (v.poly) {
            return {-*v.poly, {}, {}};
        }
        if (v.field) {
            return {{}, -*v.field, {}};
        }
        lowering_error(n, "cannot negate a tuple");
    }
    case NodeKind::add:
    case NodeKind::sub: {
        Value a = lower(*n.args[0], dim);
        Value b = lower(*n.args[1], dim);
        const bool add = n.kind == NodeKind::add;
        if (a.poly && b.poly) {
            return {add ? *a.poly + *b.poly : *a.poly - *b.poly, {}, {}};
        }
        if (a.field && b.field) {
            return {{}, add ? *a.field + *b.field : *a.field - *b.field, {}};
        }
        lowering_error(n, "cannot add a polynomial and a vector field");
    }
    case NodeKind::mul: {
        Value a = lower(*n.args[0], dim);
        Value b = lower(*n.args[1], dim);
        if (a.poly && b.poly) {
            return {*a.poly * *b.poly, {}, {}};
        }
        if (a.poly && b.field) {
            return {{}, *a.poly * *b.field, {}};
        }
        if (a.field && b.poly) {
            return {{}, *b.poly * *a.field, {}};
        }
        lowering_error(n, "cannot multiply these operands");
    }
    case NodeKind::div: {
        Value a = lower(*n.args[0], dim);
        const LaurentPoly b = poly(*n.args[1]);
        if (!b.is_constant() || b.is_zero()) {
            lowering_error(*n.args[1], "divisor must be a nonzero constant");
        }
        const Scalar inv = Scalar(1) / b.coeff(Exponents(dim, 0));
        if (a.poly) {
            return {*a.poly * inv, {}, {}};
        }
        if (a.field) {
            return {{}, inv * *a.field, {}};
        }
        lowering_error(n, "cannot divide a tuple");
    }
    case NodeKind::tuple: {
        std::vector<LaurentPoly> items;
        for (const auto &c : n.args) {
            items.push_back(poly(*c));
        }
        return {{}, {}, std::move(items)};
    }
    }
    lowering_error(n, "unknown node");
}
} // namespace detail

inline LaurentPoly lower_poly(const Node &n, std::size_t dim)
{
    Value v = detail::lower(n, dim);
    if (!v.poly) {
        detail::lowering_error(n, "expected a polynomial");
    }
    return *v.poly;
}

inline VectorField lower_field(const Node &n, std::size_t dim)
{
    Value v = detail::lower(n, dim);
    if (v.poly && v.poly->is_zero()) {
        return VectorField(dim);
    }
    if (!v.field) {
        detail::lowering_error(n, "expected a vector field such as 'x2^2 d1'");
    }
    return *v.field;
}

inline FormalDiffeo lower_diffeo(const Node &n, std::size_t dim, TruncationOrder order)
{
    Value v = detail::lower(n, dim);
    if (v.poly && dim == 1) {
        return FormalDiffeo({*v.poly}, order);
    }
    if (!v.tuple) {
        detail::lowering_error(n, "expected a tuple such as '(x1 + x2^2, x2)'");
    }
    if (v.tuple->size() != dim) {
        throw dimension_mismatch("tuple has " + std::to_string(v.tuple->size()) + " components, dimension is " +
                                 std::to_string(dim));
    }
    return FormalDiffeo(std::move(*v.tuple), order);
}

inline LaurentPoly parse_poly(std::string_view text, std::size_t dim)
{
    return lower_poly(*parse_expression(text), dim);
}

inline VectorField parse_field(std::string_view text, std::size_t dim)
{
    return lower_field(*parse_expression(text), dim);
}

inline FormalDiffeo parse_diffeo(std::string_view text, std::size_t dim, TruncationOrder order)
{
    return lower_diffeo(*parse_expression(text), dim, order);
}

inline Scalar parse_scalar(std::string_view text)
{
    const LaurentPoly p = parse_poly(text, 1);
    if (!p.is_constant()) {
        throw parse_error("expected a constant", 1, 1);
    }
    return p.coeff(Exponents(1, 0));
}

/// `;`-separated list of fields; empty entries are skipped.
inline std::vector<VectorField> parse_field_list(std::string_view text, std::size_t dim)
{
    std::vector<VectorField> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t stop = text.find(';', start);
        if (stop == std::string_view::npos) {
            stop = text.size();
        }
        const std::string_view item = text.substr(start, stop - start);
        if (item.find_first_not_of(" \t\r\n") != std::string_view::npos) {
            try {
                out.push_back(parse_field(item, dim));
            } catch (const parse_error &e) {
                throw parse_error(std::string(e.what()) + " in item '" + std::string(item) + "'", e.line(),
                                  e.column() + start);
            }
        }
        start = stop + 1;
    }
    return out;
}

/// Commutator word: leaves `3` or `~3`, nodes `[a,b]`.
inline CommutatorWord parse_word(std::string_view text, std::size_t line = 1)
{
    std::size_t pos = 0;
    auto ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
    };
    auto fail = [&](const std::string &msg) { throw parse_error(msg, line, pos + 1); };
    auto rec = [&](auto &&self) -> CommutatorWord {
        ws();
        if (pos < text.size() && text[pos] == '[') {
            ++pos;
            CommutatorWord a = self(self);
            ws();
            if (pos >= text.size() || text[pos] != ',') {
                fail("expected ','");
            }
            ++pos;
            CommutatorWord b = self(self);
            ws();
            if (pos >= text.size() || text[pos] != ']') {
                fail("expected ']'");
            }
            ++pos;
            return CommutatorWord::commutator(std::move(a), std::move(b));
        }
        bool inverse = false;
        if (pos < text.size() && text[pos] == '~') {
            inverse = true;
            ++pos;
        }
        const std::size_t b = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
        }
        if (pos == b || pos - b > 6) {
            fail("expected a generator index");
        }
        return CommutatorWord::leaf(std::stoul(std::string(text.substr(b, pos - b))), inverse);
    };
    CommutatorWord w = rec(rec);
    ws();
    if (pos != text.size()) {
        fail("trailing input after word");
    }
    return w;
}

/// Reads the span export format: `# dim N`, `# mode jet K` or
/// `# mode exact B`, then one field per line.
inline LieAlgebraSpan parse_span(std::string_view text)
{
    std::optional<std::size_t> dim;
    std::optional<SpanMode> mode;
    std::vector<VectorField> fields;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t stop = text.find('\n', start);
        if (stop == std::string_view::npos) {
            stop = text.size();
        }
        ++line_no;
        std::string line(text.substr(start, stop - start));
        start = stop + 1;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        if (line.front() == '#') {
            std::string key;
            std::string a;
            std::string b;
            std::istringstream in(line.substr(1));
            in >> key >> a >> b;
            try {
                if (key == "dim") {
                    dim = std::stoul(a);
                } else if (key == "mode" && a == "jet") {
                    mode = JetMode{TruncationOrder(std::stoi(b))};
                } else if (key == "mode" && a == "exact") {
                    mode = ExactMode{std::stoul(b)};
                }
            } catch (const std::logic_error &) {
                throw parse_error("bad header '" + line + "'", line_no, 1);
            }
            continue;
        }
        if (!dim) {
            throw parse_error("field before '# dim' header", line_no, 1);
        }
        fields.push_back(lower_field(*parse_expression(line, line_no), *dim));
    }
    if (!dim || !mode) {
        throw parse_error("missing '# dim' or '# mode' header", line_no == 0 ? 1 : line_no, 1);
    }
    return span_reduce(fields, *dim, *mode);
}

} // namespace fgerm::parse
