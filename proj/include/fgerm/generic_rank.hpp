#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fgerm/error.hpp"
#include "fgerm/laurent_poly.hpp"
#include "fgerm/lie_span.hpp"
#include "fgerm/matrix.hpp"
#include "fgerm/rational_function.hpp"
#include "fgerm/vector_field.hpp"

namespace fgerm
{

using PolyRow = std::vector<LaurentPoly>;

/// Rank over the fraction field of a matrix of polynomials (no negative
/// exponents), by fraction-free elimination. Every division is exact.
inline std::size_t bareiss_rank(std::vector<PolyRow> m)
{
    if (m.empty()) {
        return 0;
    }
    const std::size_t rows = m.size();
    const std::size_t cols = m.front().size();
    const std::size_t dim = m.front().empty() ? 1 : m.front().front().dim();
    LaurentPoly prev = LaurentPoly::constant(dim, 1);
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        // smallest leading monomial first keeps intermediate growth down
        std::optional<std::size_t> pivot;
        for (std::size_t i = r; i < rows; ++i) {
            if (m[i][col].is_zero()) {
                continue;
            }
            if (!pivot || graded_lex_compare(m[i][col].leading_term().first, m[*pivot][col].leading_term().first) < 0) {
                pivot = i;
            }
        }
        if (!pivot) {
            continue;
        }
        std::swap(m[r], m[*pivot]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                LaurentPoly t = m[r][col] * m[i][j] - m[i][col] * m[r][j];
                m[i][j] = exact_divide(std::move(t), prev);
            }
            m[i][col] = LaurentPoly(dim);
        }
        prev = m[r][col];
        ++r;
    }
    return r;
}

namespace detail
{
/// Multiplies a row by the monomial that clears its negative exponents.
inline PolyRow clear_negative_exponents(PolyRow row)
{
    if (row.empty()) {
        return row;
    }
    const std::size_t n = row.front().dim();
    Exponents shift(n, 0);
    for (const auto &p : row) {
        for (const auto &[e, c] : p.terms()) {
            for (std::size_t i = 0; i < n; ++i) {
                shift[i] = std::min(shift[i], e[i]);
            }
        }
    }
    for (auto &s : shift) {
        s = -s;
    }
    const LaurentPoly m = LaurentPoly::monomial(shift, Scalar(1));
    for (auto &p : row) {
        p *= m;
    }
    return row;
}

inline Scalar evaluate(const LaurentPoly &p, const std::vector<Scalar> &point)
{
    Scalar sum(0);
    for (const auto &[e, c] : p.terms()) {
        Scalar t = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            const Scalar base = e[i] >= 0 ? point[i] : point[i].inverse();
            for (int k = 0; k < std::abs(e[i]); ++k) {
                t *= base;
            }
        }
        sum += t;
    }
    return sum;
}

/// Rows whose evaluation at a random point is independent, in input order.
inline std::vector<std::size_t> evaluation_pivots(const std::vector<PolyRow> &rows, std::size_t n,
                                                  std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::vector<Scalar> point;
    for (std::size_t i = 0; i < n; ++i) {
        long num = 0;
        while (num == 0) {
            num = std::uniform_int_distribution<long>(-97, 97)(gen);
        }
        point.push_back(Scalar::rational(num, std::uniform_int_distribution<long>(1, 13)(gen)));
    }
    SparseEchelon<std::size_t> ech;
    std::vector<std::size_t> chosen;
    for (std::size_t r = 0; r < rows.size() && chosen.size() < n; ++r) {
        SparseVector<std::size_t> v;
        for (std::size_t j = 0; j < rows[r].size(); ++j) {
            Scalar s = evaluate(rows[r][j], point);
            if (!s.is_zero()) {
                v.emplace(j, std::move(s));
            }
        }
        if (ech.insert(v)) {
            chosen.push_back(r);
        }
    }
    return chosen;
}
} // namespace detail

/// Options for generic_rank. With `prepass_seed` set, rows independent at a
/// random evaluation point are tried first; the answer stays exact either way.
struct RankOptions {
    std::optional<std::uint64_t> prepass_seed = 0x5eedULL;
};

/// Dimension over the fraction field of the span of `fields`.
///
/// Greedy exact basis extraction: a row joins the basis iff fraction-free
/// elimination of (basis + row) has full row rank.
inline std::size_t generic_rank(std::span<const VectorField> fields, RankOptions opts = {})
{
    if (fields.empty()) {
        return 0;
    }
    const std::size_t n = fields.front().dim();
    std::vector<PolyRow> rows;
    for (const auto &f : fields) {
        if (f.dim() != n) {
            throw dimension_mismatch("fields of different dimensions");
        }
        if (!f.is_zero()) {
            rows.push_back(detail::clear_negative_exponents(f.coeffs()));
        }
    }
    std::vector<std::size_t> order;
    if (opts.prepass_seed) {
        order = detail::evaluation_pivots(rows, n, *opts.prepass_seed);
    }
    std::vector<bool> seen(rows.size(), false);
    for (auto r : order) {
        seen[r] = true;
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!seen[r]) {
            order.push_back(r);
        }
    }
    std::vector<PolyRow> basis;
    for (auto r : order) {
        if (basis.size() == n) {
            break;
        }
        basis.push_back(rows[r]);
        if (bareiss_rank(basis) < basis.size()) {
            basis.pop_back();
        }
    }
    return basis.size();
}

inline std::size_t generic_rank(const LieAlgebraSpan &g, RankOptions opts = {})
{
    return generic_rank(std::span<const VectorField>(g.basis()), opts);
}

/// kappa(p) for each term of a derived series.
struct KappaSequence {
    std::vector<std::size_t> values;
    std::optional<TruncationOrder> jet_order;

    bool non_increasing() const
    {
        return std::is_sorted(values.rbegin(), values.rend());
    }
    /// kappa(p+2) < kappa(p) whenever kappa(p) > 0.
    bool strict_drop_every_two() const
    {
        for (std::size_t p = 0; p + 2 < values.size(); ++p) {
            if (values[p] > 0 && values[p + 2] >= values[p]) {
                return false;
            }
        }
        return true;
    }
};

inline KappaSequence kappa_sequence(const LieSeries &series, RankOptions opts = {})
{
    if (!series.terminates) {
        throw precondition_violation("kappa sequence needs a terminating derived series");
    }
    KappaSequence k;
    k.jet_order = series.terms.front().jet_order();
    for (const auto &t : series.terms) {
        k.values.push_back(generic_rank(t, opts));
    }
    return k;
}

inline std::string to_string(const KappaSequence &k)
{
    std::string out = "[";
    for (std::size_t i = 0; i < k.values.size(); ++i) {
        out += (i ? ", " : "") + std::to_string(k.values[i]);
    }
    return out + "]";
}

/// Determinant by cofactor expansion; entries may carry negative exponents.
inline LaurentPoly determinant(const std::vector<PolyRow> &m)
{
    const std::size_t k = m.size();
    if (k == 0) {
        throw precondition_violation("determinant of an empty matrix");
    }
    const std::size_t dim = m.front().front().dim();
    if (k == 1) {
        return m[0][0];
    }
    LaurentPoly det(dim);
    for (std::size_t j = 0; j < k; ++j) {
        if (m[0][j].is_zero()) {
            continue;
        }
        std::vector<PolyRow> minor;
        for (std::size_t i = 1; i < k; ++i) {
            PolyRow row;
            for (std::size_t c = 0; c < k; ++c) {
                if (c != j) {
                    row.push_back(m[i][c]);
                }
            }
            minor.push_back(std::move(row));
        }
        LaurentPoly t = m[0][j] * determinant(minor);
        det += j % 2 == 0 ? t : -t;
    }
    return det;
}

/// A basis {Y_1..Y_q} of the smaller space extended by {X_1..X_m}.
struct BasisSplit {
    std::vector<VectorField> y;
    std::vector<VectorField> x;
};

/// Z = sum b_j Y_j + sum a_k X_k, with the m x m matrix M(j, k) = X_j(a_k).
struct TransitionMatrix {
    std::vector<RationalFunction> b;
    std::vector<RationalFunction> a;
    std::vector<std::vector<RationalFunction>> entries;

    std::size_t size() const noexcept
    {
        return a.size();
    }
    friend bool operator==(const TransitionMatrix &l, const TransitionMatrix &r)
    {
        return l.entries == r.entries;
    }
};

/// Coefficients of `z` in the basis y ++ x over the fraction field, by
/// Cramer's rule on the first nonsingular square set of coordinates (in
/// index order), then checked on every coordinate.
inline std::vector<RationalFunction> decompose(const VectorField &z, const std::vector<VectorField> &basis)
{
    const std::size_t n = z.dim();
    const std::size_t q = basis.size();
    for (const auto &b : basis) {
        z.check_dim(b);
    }
    if (q == 0) {
        if (!z.is_zero()) {
            throw precondition_violation("field is not in the span of the split");
        }
        return {};
    }
    if (q > n) {
        throw precondition_violation("degenerate split: more fields than coordinates");
    }
    std::vector<std::size_t> coords(q);
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(q), true);
    do {
        std::size_t t = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pick[i]) {
                coords[t++] = i;
            }
        }
        auto matrix_with = [&](std::optional<std::size_t> replace) {
            std::vector<PolyRow> m;
            for (auto i : coords) {
                PolyRow row;
                for (std::size_t c = 0; c < q; ++c) {
                    row.push_back(replace && *replace == c ? z[i] : basis[c][i]);
                }
                m.push_back(std::move(row));
            }
            return m;
        };
        const LaurentPoly det = determinant(matrix_with(std::nullopt));
        if (det.is_zero()) {
            continue;
        }
        std::vector<RationalFunction> coef;
        std::vector<LaurentPoly> nums;
        for (std::size_t c = 0; c < q; ++c) {
            nums.push_back(determinant(matrix_with(c)));
            coef.emplace_back(nums.back(), det);
        }
        for (std::size_t i = 0; i < n; ++i) {
            LaurentPoly lhs = z[i] * det;
            for (std::size_t c = 0; c < q; ++c) {
                lhs -= nums[c] * basis[c][i];
            }
            if (!lhs.is_zero()) {
                throw precondition_violation("field is not in the span of the split");
            }
        }
        return coef;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    throw precondition_violation("degenerate split: the fields are dependent over the fraction field");
}

inline TransitionMatrix transition_matrix(const VectorField &z, const BasisSplit &split)
{
    std::vector<VectorField> basis = split.y;
    basis.insert(basis.end(), split.x.begin(), split.x.end());
    auto coef = decompose(z, basis);
    TransitionMatrix t;
    t.b.assign(coef.begin(), coef.begin() + static_cast<std::ptrdiff_t>(split.y.size()));
    t.a.assign(coef.begin() + static_cast<std::ptrdiff_t>(split.y.size()), coef.end());
    for (const auto &xj : split.x) {
        std::vector<RationalFunction> row;
        for (const auto &ak : t.a) {
            row.push_back(apply(xj, ak));
        }
        t.entries.push_back(std::move(row));
    }
    return t;
}

/// M_Z M_W - M_W M_Z
inline std::vector<std::vector<RationalFunction>> commutator(const TransitionMatrix &mz, const TransitionMatrix &mw)
{
    const std::size_t m = mz.size();
    if (mw.size() != m) {
        throw dimension_mismatch("transition matrices of different sizes");
    }
    const std::size_t dim = mz.a.empty() ? 1 : mz.a.front().dim();
    std::vector<std::vector<RationalFunction>> out(m, std::vector<RationalFunction>(m, RationalFunction(LaurentPoly(dim))));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t k = 0; k < m; ++k) {
                out[i][j] = out[i][j] + mz.entries[i][k] * mw.entries[k][j] - mw.entries[i][k] * mz.entries[k][j];
            }
        }
    }
    return out;
}

} // namespace fgerm
