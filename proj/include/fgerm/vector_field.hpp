#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fgerm/echelon.hpp"
#include "fgerm/error.hpp"
#include "fgerm/laurent_poly.hpp"
#include "fgerm/matrix.hpp"

namespace fgerm
{

/// Derivation a_1 d/dx1 + ... + a_n d/dxn with Laurent polynomial
/// coefficients. Formal (singular at 0) fields have every a_i in m.
class VectorField
{
public:
    explicit VectorField(std::size_t dim) : coeffs_(dim, LaurentPoly(dim))
    {
        if (dim == 0) {
            throw precondition_violation("vector field dimension must be positive");
        }
    }
    explicit VectorField(std::vector<LaurentPoly> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty()) {
            throw precondition_violation("vector field dimension must be positive");
        }
        for (const auto &c : coeffs_) {
            if (c.dim() != coeffs_.size()) {
                throw dimension_mismatch("vector field coefficient lives in a ring of the wrong dimension");
            }
        }
    }
    /// c * d/dx_{i+1}
    static VectorField along(std::size_t i, LaurentPoly c)
    {
        VectorField f(c.dim());
        if (i >= c.dim()) {
            throw precondition_violation("direction index out of range");
        }
        f.coeffs_[i] = std::move(c);
        return f;
    }

    std::size_t dim() const noexcept
    {
        return coeffs_.size();
    }
    const LaurentPoly &operator[](std::size_t i) const
    {
        return coeffs_.at(i);
    }
    LaurentPoly &operator[](std::size_t i)
    {
        return coeffs_.at(i);
    }
    const std::vector<LaurentPoly> &coeffs() const noexcept
    {
        return coeffs_;
    }
    bool is_zero() const
    {
        for (const auto &c : coeffs_) {
            if (!c.is_zero()) {
                return false;
            }
        }
        return true;
    }
    bool is_formal() const
    {
        for (const auto &c : coeffs_) {
            if (!c.in_maximal_ideal()) {
                return false;
            }
        }
        return true;
    }
    bool is_polynomial() const
    {
        for (const auto &c : coeffs_) {
            if (!c.is_power_series()) {
                return false;
            }
        }
        return true;
    }
    /// Largest total degree of any coefficient term; nullopt for zero.
    std::optional<int> max_degree() const
    {
        std::optional<int> d;
        for (const auto &c : coeffs_) {
            if (auto m = c.max_degree()) {
                d = d ? std::max(*d, *m) : *m;
            }
        }
        return d;
    }

    VectorField operator-() const
    {
        VectorField r(*this);
        for (auto &c : r.coeffs_) {
            c = -c;
        }
        return r;
    }
    VectorField &operator+=(const VectorField &o)
    {
        check_dim(o);
        for (std::size_t i = 0; i < dim(); ++i) {
            coeffs_[i] += o.coeffs_[i];
        }
        return *this;
    }
    VectorField &operator-=(const VectorField &o)
    {
        check_dim(o);
        for (std::size_t i = 0; i < dim(); ++i) {
            coeffs_[i] -= o.coeffs_[i];
        }
        return *this;
    }
    friend VectorField operator+(VectorField a, const VectorField &b)
    {
        return a += b;
    }
    friend VectorField operator-(VectorField a, const VectorField &b)
    {
        return a -= b;
    }
    friend VectorField operator*(const Scalar &s, VectorField f)
    {
        for (auto &c : f.coeffs_) {
            c *= s;
        }
        return f;
    }
    /// Multiplication by a function.
    friend VectorField operator*(const LaurentPoly &g, const VectorField &f)
    {
        VectorField r(f.dim());
        for (std::size_t i = 0; i < f.dim(); ++i) {
            r.coeffs_[i] = g * f.coeffs_[i];
        }
        return r;
    }
    friend bool operator==(const VectorField &a, const VectorField &b) = default;

    void check_dim(const VectorField &o) const
    {
        if (o.dim() != dim()) {
            throw dimension_mismatch("vector fields of different dimension");
        }
    }

private:
    std::vector<LaurentPoly> coeffs_;
};

inline VectorField truncate(const VectorField &x, TruncationOrder k)
{
    std::vector<LaurentPoly> c;
    c.reserve(x.dim());
    for (const auto &a : x.coeffs()) {
        c.push_back(truncate(a, k));
    }
    return VectorField(std::move(c));
}

/// X(g) = sum_i a_i dg/dx_i, optionally modulo m^{k+1}.
inline LaurentPoly apply(const VectorField &x, const LaurentPoly &g, std::optional<TruncationOrder> k = std::nullopt)
{
    if (x.dim() != g.dim()) {
        throw dimension_mismatch("vector field and function in different dimensions");
    }
    LaurentPoly r(g.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        if (x[i].is_zero()) {
            continue;
        }
        const LaurentPoly d = partial_derivative(g, i);
        if (d.is_zero()) {
            continue;
        }
        r += LaurentPoly::multiply(x[i], d, k ? std::optional<int>(k->value()) : std::nullopt);
    }
    return r;
}

/// [X, Y]; coefficient i is X(Y_i) - Y(X_i).
inline VectorField bracket(const VectorField &x, const VectorField &y,
                           std::optional<TruncationOrder> k = std::nullopt)
{
    x.check_dim(y);
    VectorField r(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        r[i] = apply(x, y[i], k) - apply(y, x[i], k);
    }
    return r;
}

/// X applied j times to g.
inline LaurentPoly iterate_apply(const VectorField &x, LaurentPoly g, unsigned j,
                                 std::optional<TruncationOrder> k = std::nullopt)
{
    if (k) {
        g = truncate(g, *k);
    }
    for (unsigned t = 0; t < j && !g.is_zero(); ++t) {
        g = apply(x, g, k);
    }
    return g;
}

/// The degree-one jet as the matrix A with X = (A x) . d/dx + h.o.t.
inline Matrix linear_part(const VectorField &x)
{
    if (!x.is_formal()) {
        throw precondition_violation("linear part of a non-formal vector field");
    }
    const std::size_t n = x.dim();
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Exponents e(n, 0);
            e[j] = 1;
            a(i, j) = x[i].coeff(e);
        }
    }
    return a;
}

inline bool is_nilpotent_field(const VectorField &x)
{
    return linear_part(x).is_nilpotent();
}

inline bool is_first_integral(const LaurentPoly &g, std::span<const VectorField> fields)
{
    for (const auto &x : fields) {
        if (!apply(x, g).is_zero()) {
            return false;
        }
    }
    return true;
}

/// Result of the a-function: a finite value, or nullopt when the step budget
/// ran out before every iterated image vanished.
using IterationDegree = std::optional<std::size_t>;

inline std::size_t default_a_budget(std::size_t dim)
{
    const std::size_t p = dim >= 2 ? (std::size_t{1} << (dim - 2)) : 1;
    return 3 * p + 8;
}

/// Largest j such that some composition of j generators is nonzero on v.
///
/// Works on linear spans: S_0 = <v>, S_{j+1} = <Z(w) : Z in gens, w in S_j>;
/// the answer is the last j with S_j != 0.
inline IterationDegree nilpotency_degree_a(const LaurentPoly &v, std::span<const VectorField> gens,
                                           std::optional<std::size_t> budget = std::nullopt)
{
    if (v.is_zero()) {
        throw precondition_violation("a(v) is defined for nonzero v only");
    }
    for (const auto &z : gens) {
        if (z.dim() != v.dim()) {
            throw dimension_mismatch("generator and function in different dimensions");
        }
    }
    const std::size_t limit = budget.value_or(default_a_budget(v.dim()));
    using Echelon = SparseEchelon<Exponents, MonomialOrder>;
    auto as_vector = [](const LaurentPoly &p) { return Echelon::Vector(p.terms().begin(), p.terms().end()); };

    std::vector<LaurentPoly> level{v};
    std::size_t j = 0;
    while (true) {
        Echelon next_span;
        std::vector<LaurentPoly> next;
        for (const auto &w : level) {
            for (const auto &z : gens) {
                LaurentPoly img = apply(z, w);
                if (!img.is_zero() && next_span.insert(as_vector(img))) {
                    next.push_back(std::move(img));
                }
            }
        }
        if (next.empty()) {
            return j;
        }
        ++j;
        if (j > limit) {
            return std::nullopt;
        }
        level = std::move(next);
    }
}

/// Canonical text `<poly> d1 + <poly> d2`; zero components are omitted.
inline std::string to_string(const VectorField &x)
{
    std::string out;
    for (std::size_t i = 0; i < x.dim(); ++i) {
        if (x[i].is_zero()) {
            continue;
        }
        const std::string d = "d" + std::to_string(i + 1);
        std::string term;
        bool negative = false;
        if (x[i].size() == 1) {
            term = to_string(x[i]);
            if (term.front() == '-') {
                negative = true;
                term.erase(0, 1);
            }
            term = term == "1" ? d : term + " " + d;
        } else {
            term = "(" + to_string(x[i]) + ") " + d;
        }
        if (out.empty()) {
            out = negative ? "-" + term : term;
        } else {
            out += (negative ? " - " : " + ") + term;
        }
    }
    return out.empty() ? "0" : out;
}

inline std::ostream &operator<<(std::ostream &os, const VectorField &x)
{
    return os << to_string(x);
}

} // namespace fgerm
