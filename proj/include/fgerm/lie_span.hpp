#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fgerm/echelon.hpp"
#include "fgerm/error.hpp"
#include "fgerm/laurent_poly.hpp"
#include "fgerm/parallel.hpp"
#include "fgerm/vector_field.hpp"

namespace fgerm
{

/// Untruncated arithmetic; any field whose coefficients exceed the degree
/// budget aborts the computation.
struct ExactMode {
    std::size_t degree_budget = 64;
    friend bool operator==(const ExactMode &, const ExactMode &) = default;
};

/// Everything modulo fields with coefficients in m^{k+1}.
struct JetMode {
    TruncationOrder order;
    friend bool operator==(const JetMode &, const JetMode &) = default;
};

using SpanMode = std::variant<ExactMode, JetMode>;

inline std::string to_string(const SpanMode &m)
{
    if (const auto *j = std::get_if<JetMode>(&m)) {
        return "jet " + std::to_string(j->order.value());
    }
    return "exact " + std::to_string(std::get<ExactMode>(m).degree_budget);
}

/// Coefficient-vector key of a field: (component, monomial).
struct FieldKey {
    std::size_t component;
    Exponents exps;
};

struct FieldKeyOrder {
    bool operator()(const FieldKey &a, const FieldKey &b) const
    {
        MonomialOrder mo;
        if (mo(a.exps, b.exps)) {
            return true;
        }
        if (mo(b.exps, a.exps)) {
            return false;
        }
        return a.component > b.component;
    }
};

/// Bracket of two fields under the arithmetic of `mode`.
inline VectorField mode_bracket(const VectorField &x, const VectorField &y, const SpanMode &mode)
{
    if (const auto *j = std::get_if<JetMode>(&mode)) {
        return bracket(x, y, j->order);
    }
    return bracket(x, y);
}

/// Finite Scalar-basis of a space of vector fields.
class LieAlgebraSpan
{
public:
    using Echelon = SparseEchelon<FieldKey, FieldKeyOrder>;

    LieAlgebraSpan(std::size_t dim, SpanMode mode) : dim_(dim), mode_(std::move(mode))
    {
        if (dim == 0) {
            throw precondition_violation("span dimension must be positive");
        }
    }

    std::size_t dim() const noexcept
    {
        return dim_;
    }
    const SpanMode &mode() const noexcept
    {
        return mode_;
    }
    std::optional<TruncationOrder> jet_order() const
    {
        if (const auto *j = std::get_if<JetMode>(&mode_)) {
            return j->order;
        }
        return std::nullopt;
    }
    const std::vector<VectorField> &basis() const noexcept
    {
        return basis_;
    }
    std::size_t size() const noexcept
    {
        return basis_.size();
    }
    bool is_zero() const noexcept
    {
        return basis_.empty();
    }

    /// Brings a field into this span's arithmetic: truncation in jet mode,
    /// budget check in exact mode.
    VectorField normalize(const VectorField &x) const
    {
        if (x.dim() != dim_) {
            throw dimension_mismatch("field of dimension " + std::to_string(x.dim()) + " in a span of dimension " +
                                     std::to_string(dim_));
        }
        if (const auto *j = std::get_if<JetMode>(&mode_)) {
            return truncate(x, j->order);
        }
        const auto budget = std::get<ExactMode>(mode_).degree_budget;
        if (auto d = x.max_degree(); d && *d > static_cast<int>(budget)) {
            throw budget_exceeded("field of degree " + std::to_string(*d) + " exceeds the degree budget " +
                                  std::to_string(budget));
        }
        return x;
    }

    static Echelon::Vector coordinates(const VectorField &x)
    {
        Echelon::Vector v;
        for (std::size_t i = 0; i < x.dim(); ++i) {
            for (const auto &[e, c] : x[i].terms()) {
                v.emplace(FieldKey{i, e}, c);
            }
        }
        return v;
    }

    bool contains(const VectorField &x) const
    {
        return echelon_.contains(coordinates(normalize(x)));
    }
    bool contains(const LieAlgebraSpan &other) const
    {
        for (const auto &b : other.basis_) {
            if (!contains(b)) {
                return false;
            }
        }
        return true;
    }
    /// Adds `x` if it is independent of the current basis.
    bool insert(const VectorField &x)
    {
        VectorField y = normalize(x);
        if (y.is_zero() || !echelon_.insert(coordinates(y))) {
            return false;
        }
        basis_.push_back(std::move(y));
        return true;
    }

    friend bool same_span(const LieAlgebraSpan &a, const LieAlgebraSpan &b)
    {
        return a.size() == b.size() && a.contains(b);
    }

private:
    std::size_t dim_;
    SpanMode mode_;
    std::vector<VectorField> basis_;
    Echelon echelon_;
};

/// Maximal independent subset of `fields`, in input order.
inline LieAlgebraSpan span_reduce(std::span<const VectorField> fields, std::size_t dim, const SpanMode &mode)
{
    LieAlgebraSpan s(dim, mode);
    for (const auto &f : fields) {
        s.insert(f);
    }
    return s;
}

/// Smallest bracket-closed span containing `gens`. Every pair of basis
/// elements is bracketed exactly once; new elements join the worklist.
inline LieAlgebraSpan bracket_closure(std::span<const VectorField> gens, std::size_t dim, const SpanMode &mode)
{
    LieAlgebraSpan s = span_reduce(gens, dim, mode);
    for (std::size_t i = 1; i < s.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            // copies: insert() may reallocate the basis
            const VectorField a = s.basis()[i];
            const VectorField b = s.basis()[j];
            s.insert(mode_bracket(a, b, mode));
        }
    }
    return s;
}

namespace detail
{
/// Span of [a, b] over a in `left`, b in `right` (pairs i < j only when the
/// two lists are the same space).
inline LieAlgebraSpan bracket_span(const LieAlgebraSpan &left, const LieAlgebraSpan &right, bool same,
                                   std::size_t jobs)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < left.size(); ++i) {
        for (std::size_t j = same ? i + 1 : 0; j < right.size(); ++j) {
            pairs.emplace_back(i, j);
        }
    }
    const auto &mode = left.mode();
    auto brackets = parallel_map<std::optional<VectorField>>(pairs.size(), jobs, [&](std::size_t t) {
        return std::optional<VectorField>(
            mode_bracket(left.basis()[pairs[t].first], right.basis()[pairs[t].second], mode));
    });
    LieAlgebraSpan out(left.dim(), mode);
    for (auto &b : brackets) {
        out.insert(*b);
    }
    return out;
}
} // namespace detail

/// Terms of a derived or central series. `terminates` is false when the
/// series stabilized at a nonzero term at this jet order or budget.
struct LieSeries {
    std::vector<LieAlgebraSpan> terms;
    bool terminates = false;

    /// Index of the first zero term.
    std::optional<std::size_t> length() const
    {
        if (!terminates) {
            return std::nullopt;
        }
        return terms.size() - 1;
    }
};

/// g^(0) = g, g^(m+1) = [g^(m), g^(m)]. `g` must be bracket-closed.
inline LieSeries derived_series(const LieAlgebraSpan &g, std::size_t jobs = 1)
{
    LieSeries s;
    s.terms.push_back(g);
    while (!s.terms.back().is_zero()) {
        LieAlgebraSpan next = detail::bracket_span(s.terms.back(), s.terms.back(), true, jobs);
        if (next.size() == s.terms.back().size()) {
            return s;
        }
        s.terms.push_back(std::move(next));
    }
    s.terminates = true;
    return s;
}

/// C^0 = g, C^(m+1) = [g, C^m]. `g` must be bracket-closed.
inline LieSeries central_series(const LieAlgebraSpan &g, std::size_t jobs = 1)
{
    LieSeries s;
    s.terms.push_back(g);
    while (!s.terms.back().is_zero()) {
        LieAlgebraSpan next = detail::bracket_span(g, s.terms.back(), false, jobs);
        if (next.size() == s.terms.back().size()) {
            return s;
        }
        s.terms.push_back(std::move(next));
    }
    s.terminates = true;
    return s;
}

/// First m with g^(m) = 0; nullopt if the derived series does not reach 0.
inline std::optional<std::size_t> soluble_length(const LieAlgebraSpan &g, std::size_t jobs = 1)
{
    return derived_series(g, jobs).length();
}

/// First m with C^m g = 0; nullopt if the central series does not reach 0.
inline std::optional<std::size_t> nilpotency_class(const LieAlgebraSpan &g, std::size_t jobs = 1)
{
    return central_series(g, jobs).length();
}

/// An iterated bracket Y_{k1..kj} = [Z_kj, [..., [Z_k2, Z_k1]]] with its
/// (zero-based) generator indices.
struct GoodMonomial {
    std::vector<std::size_t> word;
    VectorField field;
};

/// Nonzero monomials with k1 = min(k1, ..., kj), for j <= max_depth,
/// ordered by depth and then lexicographically by word.
inline std::vector<GoodMonomial> good_monomial_words(std::span<const VectorField> gens, std::size_t max_depth)
{
    std::vector<GoodMonomial> out;
    std::vector<GoodMonomial> level;
    for (std::size_t k = 0; k < gens.size(); ++k) {
        if (!gens[k].is_zero()) {
            level.push_back({{k}, gens[k]});
        }
    }
    for (std::size_t depth = 1; depth <= max_depth && !level.empty(); ++depth) {
        out.insert(out.end(), level.begin(), level.end());
        if (depth == max_depth) {
            break;
        }
        std::vector<GoodMonomial> next;
        for (const auto &y : level) {
            for (std::size_t k = y.word.front(); k < gens.size(); ++k) {
                VectorField b = bracket(gens[k], y.field);
                if (!b.is_zero()) {
                    auto w = y.word;
                    w.push_back(k);
                    next.push_back({std::move(w), std::move(b)});
                }
            }
        }
        level = std::move(next);
    }
    return out;
}

inline std::vector<VectorField> good_monomials(std::span<const VectorField> gens, std::size_t max_depth)
{
    std::vector<VectorField> out;
    for (auto &m : good_monomial_words(gens, max_depth)) {
        out.push_back(std::move(m.field));
    }
    return out;
}

/// Text export: a header with the mode and dimension, then one field per
/// line in the parser's syntax.
inline std::string to_string(const LieAlgebraSpan &s)
{
    std::string out = "# dim " + std::to_string(s.dim()) + "\n# mode " + to_string(s.mode()) + "\n";
    for (const auto &b : s.basis()) {
        out += to_string(b) + "\n";
    }
    return out;
}

} // namespace fgerm
