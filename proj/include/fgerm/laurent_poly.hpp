#pragma once

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fgerm/error.hpp"
#include "fgerm/scalar.hpp"

namespace fgerm
{

/// Exponents of x1..xn; entries may be negative (Laurent monomials).
using Exponents = boost::container::small_vector<int, 6>;

inline int total_degree(const Exponents &e)
{
    return std::accumulate(e.begin(), e.end(), 0);
}

/// Display/basis order: ascending total degree, then graded-lex descending
/// within a degree, so that x1 comes before x2 and x1^2 before x1*x2.
struct MonomialOrder {
    bool operator()(const Exponents &a, const Exponents &b) const
    {
        const int da = total_degree(a);
        const int db = total_degree(b);
        if (da != db) {
            return da < db;
        }
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
    }
};

/// Graded-lex comparison with x1 > x2 > ... > xn. Returns <0, 0, >0.
inline int graded_lex_compare(const Exponents &a, const Exponents &b)
{
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) {
        return da < db ? -1 : 1;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            return a[i] < b[i] ? -1 : 1;
        }
    }
    return 0;
}

/// Jet order k of the quotient m/m^{k+1}.
class TruncationOrder
{
public:
    explicit TruncationOrder(int k) : k_(k)
    {
        if (k < 1) {
            throw precondition_violation("truncation order must be >= 1");
        }
    }
    int value() const noexcept
    {
        return k_;
    }
    friend bool operator==(TruncationOrder, TruncationOrder) = default;

private:
    int k_;
};

/// Sparse multivariate Laurent polynomial with Gaussian-rational coefficients.
///
/// Doubles as a truncated power series: operations taking a TruncationOrder
/// work modulo m^{k+1}. No stored coefficient is zero.
class LaurentPoly
{
public:
    using TermMap = std::map<Exponents, Scalar, MonomialOrder>;

    explicit LaurentPoly(std::size_t dim) : dim_(dim)
    {
        if (dim == 0) {
            throw precondition_violation("polynomial ring dimension must be positive");
        }
    }

    static LaurentPoly constant(std::size_t dim, const Scalar &c)
    {
        LaurentPoly p(dim);
        if (!c.is_zero()) {
            p.terms_.emplace(Exponents(dim, 0), c);
        }
        return p;
    }
    /// x_{i+1}; `i` is zero-based.
    static LaurentPoly variable(std::size_t dim, std::size_t i)
    {
        if (i >= dim) {
            throw precondition_violation("variable index out of range");
        }
        Exponents e(dim, 0);
        e[i] = 1;
        return monomial(std::move(e), Scalar(1));
    }
    static LaurentPoly monomial(Exponents e, const Scalar &c)
    {
        LaurentPoly p(e.size());
        if (!c.is_zero()) {
            p.terms_.emplace(std::move(e), c);
        }
        return p;
    }

    std::size_t dim() const noexcept
    {
        return dim_;
    }
    const TermMap &terms() const noexcept
    {
        return terms_;
    }
    std::size_t size() const noexcept
    {
        return terms_.size();
    }
    bool is_zero() const noexcept
    {
        return terms_.empty();
    }
    Scalar coeff(const Exponents &e) const
    {
        auto it = terms_.find(e);
        return it == terms_.end() ? Scalar(0) : it->second;
    }
    /// Constant term, zero if absent.
    Scalar constant_term() const
    {
        return coeff(Exponents(dim_, 0));
    }
    bool is_constant() const
    {
        if (terms_.empty()) {
            return true;
        }
        const auto &e = terms_.begin()->first;
        return terms_.size() == 1 && std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
    }
    bool is_monomial() const noexcept
    {
        return terms_.size() == 1;
    }
    /// True iff every exponent is non-negative.
    bool is_power_series() const
    {
        for (const auto &[e, c] : terms_) {
            for (int v : e) {
                if (v < 0) {
                    return false;
                }
            }
        }
        return true;
    }
    /// True iff this lies in the maximal ideal m of C[[x]].
    bool in_maximal_ideal() const
    {
        if (!is_power_series()) {
            return false;
        }
        return terms_.empty() || total_degree(terms_.begin()->first) >= 1;
    }
    /// Smallest total degree among the terms (the order of a series).
    std::optional<int> min_degree() const
    {
        if (terms_.empty()) {
            return std::nullopt;
        }
        return total_degree(terms_.begin()->first);
    }
    std::optional<int> max_degree() const
    {
        if (terms_.empty()) {
            return std::nullopt;
        }
        return total_degree(terms_.rbegin()->first);
    }
    /// Componentwise minimum exponent over all terms (zero vector if empty).
    Exponents min_exponents() const
    {
        Exponents m(dim_, 0);
        bool first = true;
        for (const auto &[e, c] : terms_) {
            for (std::size_t i = 0; i < dim_; ++i) {
                m[i] = first ? e[i] : std::min(m[i], e[i]);
            }
            first = false;
        }
        return m;
    }
    /// Leading term under graded-lex order (x1 > ... > xn).
    std::pair<Exponents, Scalar> leading_term() const
    {
        if (terms_.empty()) {
            throw precondition_violation("leading term of zero polynomial");
        }
        auto best = terms_.begin();
        for (auto it = terms_.begin(); it != terms_.end(); ++it) {
            if (graded_lex_compare(it->first, best->first) > 0) {
                best = it;
            }
        }
        return *best;
    }

    /// Adds c*x^e in place.
    void add_term(const Exponents &e, const Scalar &c)
    {
        if (c.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    LaurentPoly operator-() const
    {
        LaurentPoly r(*this);
        for (auto &[e, c] : r.terms_) {
            c = -c;
        }
        return r;
    }
    LaurentPoly &operator+=(const LaurentPoly &o)
    {
        check_dim(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }
    LaurentPoly &operator-=(const LaurentPoly &o)
    {
        check_dim(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }
    LaurentPoly &operator*=(const Scalar &s)
    {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto &[e, c] : terms_) {
            c *= s;
        }
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly &b)
    {
        return a += b;
    }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly &b)
    {
        return a -= b;
    }
    friend LaurentPoly operator*(LaurentPoly a, const Scalar &s)
    {
        return a *= s;
    }
    friend LaurentPoly operator*(const Scalar &s, LaurentPoly a)
    {
        return a *= s;
    }
    friend LaurentPoly operator*(const LaurentPoly &a, const LaurentPoly &b)
    {
        return multiply(a, b, std::nullopt);
    }
    LaurentPoly &operator*=(const LaurentPoly &o)
    {
        *this = *this * o;
        return *this;
    }
    friend bool operator==(const LaurentPoly &a, const LaurentPoly &b)
    {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const LaurentPoly &a, const LaurentPoly &b)
    {
        return !(a == b);
    }

    /// Product, optionally dropping every term of total degree > max_degree.
    static LaurentPoly multiply(const LaurentPoly &a, const LaurentPoly &b, std::optional<int> max_degree)
    {
        a.check_dim(b);
        LaurentPoly r(a.dim_);
        if (a.is_zero() || b.is_zero()) {
            return r;
        }
        Exponents e(a.dim_, 0);
        for (const auto &[ea, ca] : a.terms_) {
            const int da = total_degree(ea);
            for (const auto &[eb, cb] : b.terms_) {
                // terms are sorted by ascending degree
                if (max_degree && da + total_degree(eb) > *max_degree) {
                    break;
                }
                for (std::size_t i = 0; i < a.dim_; ++i) {
                    e[i] = ea[i] + eb[i];
                }
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    /// Power with a non-negative exponent, or any integer exponent for a
    /// monomial.
    LaurentPoly pow(int m) const
    {
        if (m < 0) {
            if (!is_monomial()) {
                throw precondition_violation("negative power of a non-monomial");
            }
            const auto &[e, c] = *terms_.begin();
            Exponents r(e);
            for (auto &v : r) {
                v *= m;
            }
            Scalar cr(1);
            const Scalar ci = c.inverse();
            for (int t = 0; t < -m; ++t) {
                cr *= ci;
            }
            return monomial(std::move(r), cr);
        }
        LaurentPoly result = constant(dim_, Scalar(1));
        LaurentPoly base = *this;
        unsigned u = static_cast<unsigned>(m);
        while (u != 0) {
            if (u & 1u) {
                result *= base;
            }
            u >>= 1;
            if (u != 0) {
                base *= base;
            }
        }
        return result;
    }

private:
    void check_dim(const LaurentPoly &o) const
    {
        if (o.dim_ != dim_) {
            throw dimension_mismatch("polynomials in " + std::to_string(dim_) + " and " + std::to_string(o.dim_) +
                                     " variables");
        }
    }

    std::size_t dim_;
    TermMap terms_;
};

inline LaurentPoly truncate(const LaurentPoly &a, TruncationOrder k)
{
    if (!a.is_power_series()) {
        throw precondition_violation("truncation of a polynomial with negative exponents");
    }
    LaurentPoly r(a.dim());
    for (const auto &[e, c] : a.terms()) {
        if (total_degree(e) > k.value()) {
            break;
        }
        r.add_term(e, c);
    }
    return r;
}

inline LaurentPoly mul_truncated(const LaurentPoly &a, const LaurentPoly &b, TruncationOrder k)
{
    return LaurentPoly::multiply(a, b, k.value());
}

/// d/dx_{i+1}; `i` is zero-based.
inline LaurentPoly partial_derivative(const LaurentPoly &a, std::size_t i)
{
    if (i >= a.dim()) {
        throw precondition_violation("partial derivative index out of range");
    }
    LaurentPoly r(a.dim());
    for (const auto &[e, c] : a.terms()) {
        if (e[i] == 0) {
            continue;
        }
        Exponents d(e);
        d[i] -= 1;
        r.add_term(d, c * Scalar(e[i]));
    }
    return r;
}

/// g(phi_1, ..., phi_n) mod m^{k+1}.
///
/// Powers of each component are computed once and reused across terms.
inline LaurentPoly substitute(const LaurentPoly &g, std::span<const LaurentPoly> phi, TruncationOrder k)
{
    if (phi.size() != g.dim()) {
        throw dimension_mismatch("substitution needs one series per variable");
    }
    if (!g.is_power_series()) {
        throw precondition_violation("substitution into a polynomial with negative exponents");
    }
    const std::size_t out_dim = phi.empty() ? 1 : phi.front().dim();
    for (const auto &p : phi) {
        if (p.dim() != out_dim) {
            throw dimension_mismatch("substituted series have different dimensions");
        }
        if (!p.in_maximal_ideal()) {
            throw precondition_violation("substituted series must have zero constant term");
        }
    }
    std::vector<std::vector<LaurentPoly>> powers(phi.size());
    auto power = [&](std::size_t i, int e) -> const LaurentPoly & {
        auto &cache = powers[i];
        if (cache.empty()) {
            cache.push_back(LaurentPoly::constant(out_dim, Scalar(1)));
        }
        while (static_cast<int>(cache.size()) <= e) {
            cache.push_back(mul_truncated(cache.back(), phi[i], k));
        }
        return cache[static_cast<std::size_t>(e)];
    };

    LaurentPoly result(out_dim);
    for (const auto &[e, c] : g.terms()) {
        if (total_degree(e) > k.value()) {
            break;
        }
        LaurentPoly term = LaurentPoly::constant(out_dim, c);
        for (std::size_t i = 0; i < e.size() && !term.is_zero(); ++i) {
            if (e[i] > 0) {
                term = mul_truncated(term, power(i, e[i]), k);
            }
        }
        result += term;
    }
    return result;
}

/// Exact division a / b of polynomials (no negative exponents); throws if b
/// does not divide a.
inline LaurentPoly exact_divide(LaurentPoly a, const LaurentPoly &b)
{
    if (b.is_zero()) {
        throw precondition_violation("division by zero polynomial");
    }
    if (!a.is_power_series() || !b.is_power_series()) {
        throw precondition_violation("exact division needs polynomials without negative exponents");
    }
    const auto [lb, cb] = b.leading_term();
    LaurentPoly q(a.dim());
    while (!a.is_zero()) {
        const auto [la, ca] = a.leading_term();
        Exponents e(la);
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] -= lb[i];
            if (e[i] < 0) {
                throw precondition_violation("polynomial division is not exact");
            }
        }
        const LaurentPoly t = LaurentPoly::monomial(e, ca / cb);
        q += t;
        a -= t * b;
    }
    return q;
}

namespace detail
{
inline std::string monomial_text(const Exponents &e)
{
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += "*";
        }
        out += "x" + std::to_string(i + 1);
        if (e[i] != 1) {
            out += "^" + std::to_string(e[i]);
        }
    }
    return out;
}
} // namespace detail

/// Canonical text, terms in ascending degree, e.g. `3/2*x1^2*x3^-1 + i*x2`.
inline std::string to_string(const LaurentPoly &p)
{
    if (p.is_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[e, c] : p.terms()) {
        const std::string mono = detail::monomial_text(e);
        Scalar coef = c;
        bool negative = false;
        // pull a leading minus out of purely real or purely imaginary coefficients
        if ((c.is_real() && sgn(c.re()) < 0) || (sgn(c.re()) == 0 && sgn(c.im()) < 0)) {
            negative = true;
            coef = -c;
        }
        if (first) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        std::string ctext = to_string(coef);
        const bool compound = sgn(coef.re()) != 0 && sgn(coef.im()) != 0;
        if (compound) {
            ctext = "(" + ctext + ")";
        }
        if (mono.empty()) {
            out += ctext;
        } else if (coef.is_one()) {
            out += mono;
        } else {
            out += ctext + "*" + mono;
        }
    }
    return out;
}

inline std::ostream &operator<<(std::ostream &os, const LaurentPoly &p)
{
    return os << to_string(p);
}

/// Monomials of degree 1..k in n variables, in MonomialOrder (the jet basis
/// of m/m^{k+1}).
inline std::vector<Exponents> jet_basis(std::size_t n, TruncationOrder k)
{
    std::vector<Exponents> out;
    for (int d = 1; d <= k.value(); ++d) {
        // lex-descending enumeration of exponent vectors of degree d
        Exponents e(n, 0);
        auto rec = [&](auto &&self, std::size_t i, int remaining) -> void {
            if (i + 1 == n) {
                e[i] = remaining;
                out.push_back(e);
                return;
            }
            for (int v = remaining; v >= 0; --v) {
                e[i] = v;
                self(self, i + 1, remaining - v);
            }
        };
        rec(rec, 0, d);
    }
    return out;
}

} // namespace fgerm
