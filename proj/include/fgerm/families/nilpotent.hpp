#pragma once

// Commuting Laurent fields X_1..X_n, their polynomial rescalings Z_k and the
// nilpotent Lie algebra generated by the Z_k, whose soluble length is n.

#include <cstddef>
#include <string>
#include <vector>

#include "fgerm/error.hpp"
#include "fgerm/families/report.hpp"
#include "fgerm/generic_rank.hpp"
#include "fgerm/laurent_poly.hpp"
#include "fgerm/lie_span.hpp"
#include "fgerm/rational_function.hpp"
#include "fgerm/vector_field.hpp"

namespace fgerm::families
{

/// Zero-based containers, one-based names: u[k] is u_k (u[0] and u[n] are
/// unused and hold 1), x_fields[k-1] is X_k, z_fields[k-1] is Z_k.
struct NilpotentExample {
    std::size_t n;
    std::vector<LaurentPoly> u;
    std::vector<VectorField> x_fields;
    std::vector<VectorField> z_fields;
};

namespace detail
{
/// coefficient * x_i * x_j  with one-based i, j
inline LaurentPoly quad(std::size_t n, std::size_t i, std::size_t j, long coefficient)
{
    Exponents e(n, 0);
    e[i - 1] += 1;
    e[j - 1] += 1;
    return LaurentPoly::monomial(std::move(e), Scalar(coefficient));
}
} // namespace detail

/// The top field X_n = x_n (x_n d_n + w x_{n-1} d_{n-1} + v x_1 d_1).
///
/// Commutation with X_1..X_{n-1} forces (w, v) = (3, -) for n = 2,
/// (-1, -2) for n = 3 and (-1, 0) for n >= 4.
inline VectorField top_field(std::size_t n)
{
    using detail::quad;
    VectorField f(n);
    f[n - 1] = quad(n, n, n, 1);
    if (n == 2) {
        f[0] = quad(n, 1, 2, 3);
    } else if (n == 3) {
        f[0] = quad(n, 1, 3, -2);
        f[1] = quad(n, 2, 3, -1);
    } else {
        f[n - 2] = quad(n, n - 1, n, -1);
    }
    return f;
}

inline NilpotentExample build_nilpotent_example(std::size_t n)
{
    using detail::quad;
    if (n < 2) {
        throw precondition_violation("the nilpotent family needs n >= 2");
    }
    NilpotentExample ex{n, std::vector<LaurentPoly>(n + 1, LaurentPoly::constant(n, 1)), {}, {}};
    // u_{n-1} = 1/x_n, u_{n-k} = u_{n-k+1}^2 / x_{n-k+1}^2
    Exponents e(n, 0);
    e[n - 1] = -1;
    ex.u[n - 1] = LaurentPoly::monomial(e, Scalar(1));
    for (std::size_t k = 2; k <= n - 1; ++k) {
        const std::size_t j = n - k;
        Exponents inv(n, 0);
        inv[j] = -2; // x_{j+1}^{-2}
        ex.u[j] = LaurentPoly::monomial(inv, Scalar(1)) * ex.u[j + 1].pow(2);
    }

    for (std::size_t k = 1; k <= n; ++k) {
        VectorField shape(n);
        if (k == n) {
            ex.x_fields.push_back(top_field(n));
            continue;
        }
        if (k == 1) {
            shape[0] = quad(n, 2, 2, 1);
        } else if (k == 2) {
            shape[0] = quad(n, 1, 2, 4);
            shape[1] = quad(n, 2, 2, 1);
        } else if (k == 3) {
            shape[0] = quad(n, 1, 3, -4);
            shape[1] = quad(n, 2, 3, -2);
            shape[2] = quad(n, 3, 3, 1);
        } else {
            shape[k - 2] = quad(n, k - 1, k, -2);
            shape[k - 1] = quad(n, k, k, 1);
        }
        ex.x_fields.push_back(ex.u[k].pow(-1) * shape);
    }
    for (std::size_t k = 1; k <= n; ++k) {
        ex.z_fields.push_back(k < n ? ex.u[k] * ex.x_fields[k - 1] : ex.x_fields[k - 1]);
        if (!ex.z_fields.back().is_polynomial()) {
            throw precondition_violation("rescaled field Z_" + std::to_string(k) + " is not polynomial");
        }
    }
    return ex;
}

/// Expected a(u_{n-k}).
inline std::size_t expected_a_value(std::size_t k)
{
    return 3 * (std::size_t{1} << (k - 1)) - 2;
}

/// Expected nilpotency class 3 * 2^{n-2} - 1.
inline std::size_t expected_nilpotent_class(std::size_t n)
{
    return 3 * (std::size_t{1} << (n - 2)) - 1;
}

/// Applies Z_{n-k+1}^2, Z_{n-k+2}^4, ..., Z_{n-1}^{2^{k-1}}, Z_n^{2^{k-1}} to
/// u_{n-k} (innermost first): 3 * 2^{k-1} - 2 derivations in total.
inline LaurentPoly chain_composite(const NilpotentExample &ex, std::size_t k)
{
    const std::size_t n = ex.n;
    if (k < 1 || k > n - 1) {
        throw precondition_violation("chain index k must lie in 1..n-1");
    }
    LaurentPoly v = ex.u[n - k];
    for (std::size_t i = 0; i + 1 < k; ++i) {
        v = iterate_apply(ex.z_fields[n - k + i], v, 1u << (i + 1));
    }
    return iterate_apply(ex.z_fields[n - 1], v, 1u << (k - 1));
}

struct NilpotentOptions {
    std::size_t degree_budget = 256;
    std::size_t jobs = 1;
    /// Depth bound for the good-monomial factorization check.
    std::size_t good_monomial_depth = 6;
};

inline std::vector<VerificationReport> verify_nilpotent_example(std::size_t n, NilpotentOptions opts = {})
{
    std::vector<VerificationReport> out;
    const NilpotentExample ex = build_nilpotent_example(n);
    const auto &X = ex.x_fields;
    const auto &Z = ex.z_fields;
    const auto &u = ex.u;
    const nlohmann::json params = {{"n", n}};
    auto fail = [](VerificationReport &r, std::string w) {
        r.status = Status::fail;
        if (!r.witness) {
            r.witness = std::move(w);
        }
    };
    auto name = [](const char *sym, std::size_t k) { return std::string(sym) + std::to_string(k); };

    out.push_back(run_claim("nilpotent.commuting-fields", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                if (auto br = bracket(X[a], X[b]); !br.is_zero()) {
                    fail(r, "[X" + std::to_string(a + 1) + ",X" + std::to_string(b + 1) + "] = " + to_string(br));
                }
            }
        }
    }));

    out.push_back(run_claim("nilpotent.last-function", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        if (auto v = apply(X[n - 1], u[n - 1]); v != LaurentPoly::constant(n, -1)) {
            fail(r, "X_n(u_{n-1}) = " + to_string(v));
        }
        for (std::size_t j = 1; j < n; ++j) {
            if (auto v = apply(X[j - 1], u[n - 1]); !v.is_zero()) {
                fail(r, name("X", j) + "(u_{n-1}) = " + to_string(v));
            }
        }
    }));

    // properties indexed by k = 2..n-1 with m = n-k+1 the distinguished field
    out.push_back(run_claim("nilpotent.off-index-annihilation", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        for (std::size_t k = 2; k + 1 <= n; ++k) {
            for (std::size_t j = 1; j <= n; ++j) {
                if (j == n - k + 1) {
                    continue;
                }
                if (auto v = apply(X[j - 1], u[n - k]); !v.is_zero()) {
                    fail(r, name("X", j) + "(" + name("u", n - k) + ") = " + to_string(v));
                }
            }
        }
    }));

    out.push_back(run_claim("nilpotent.distinguished-derivatives", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        for (std::size_t k = 2; k + 1 <= n; ++k) {
            const std::size_t m = n - k + 1;
            Exponents e(n, 0);
            e[m - 1] = -1;
            const LaurentPoly expected = LaurentPoly::monomial(e, Scalar(-2)) * u[m];
            if (auto v = apply(X[m - 1], u[n - k]); v != expected) {
                fail(r, name("X", m) + "(" + name("u", n - k) + ") = " + to_string(v));
            }
            if (auto v = iterate_apply(X[m - 1], u[n - k], 2); v != LaurentPoly::constant(n, 2)) {
                fail(r, name("X", m) + "^2(" + name("u", n - k) + ") = " + to_string(v));
            }
        }
    }));

    out.push_back(run_claim("nilpotent.first-image-annihilation", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        for (std::size_t k = 2; k + 1 <= n; ++k) {
            const std::size_t m = n - k + 1;
            const LaurentPoly w = apply(X[m - 1], u[n - k]);
            for (std::size_t j = 1; j <= n; ++j) {
                if (j == m) {
                    continue;
                }
                if (auto v = apply(X[j - 1], w); !v.is_zero()) {
                    fail(r, name("X", j) + "(" + name("X", m) + "(" + name("u", n - k) + ")) = " + to_string(v));
                }
            }
        }
    }));

    out.push_back(run_claim("nilpotent.first-image-square", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        for (std::size_t k = 2; k + 1 <= n; ++k) {
            const std::size_t m = n - k + 1;
            const LaurentPoly w = apply(X[m - 1], u[n - k]);
            if (w * w != u[n - k] * Scalar(4)) {
                fail(r, "(" + name("X", m) + "(" + name("u", n - k) + "))^2 = " + to_string(w * w));
            }
        }
    }));

    out.push_back(run_claim("nilpotent.rescaled-fields-polynomial", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        for (std::size_t k = 0; k < n; ++k) {
            if (!Z[k].is_polynomial() || !is_nilpotent_field(Z[k])) {
                fail(r, name("Z", k + 1) + " = " + to_string(Z[k]));
            }
        }
    }));

    for (std::size_t k = 1; k < n; ++k) {
        nlohmann::json p = {{"n", n}, {"k", k}};
        out.push_back(run_claim("nilpotent.a-function", p, [&](VerificationReport &r) {
            const auto a = nilpotency_degree_a(u[n - k], Z);
            r.status = a && *a == expected_a_value(k) ? Status::pass : Status::fail;
            r.witness = "a(" + name("u", n - k) + ") = " + (a ? std::to_string(*a) : std::string("inf")) +
                        ", expected " + std::to_string(expected_a_value(k));
        }));
        out.push_back(run_claim("nilpotent.chain-composite", p, [&](VerificationReport &r) {
            const LaurentPoly v = chain_composite(ex, k);
            r.status = v.is_constant() && !v.is_zero() ? Status::pass : Status::fail;
            r.witness = to_string(v);
        }));
    }

    const LieAlgebraSpan g = bracket_closure(Z, n, ExactMode{opts.degree_budget});
    const LieSeries derived = derived_series(g, opts.jobs);
    const LieSeries central = central_series(g, opts.jobs);

    out.push_back(run_claim("nilpotent.soluble-length", params, [&](VerificationReport &r) {
        const auto l = derived.length();
        r.status = l && *l == n ? Status::pass : Status::fail;
        r.witness = "l = " + (l ? std::to_string(*l) : std::string("non-terminating")) + ", algebra dimension " +
                    std::to_string(g.size());
    }));
    out.push_back(run_claim("nilpotent.nilpotency-class", params, [&](VerificationReport &r) {
        const auto c = central.length();
        r.status = c && *c == expected_nilpotent_class(n) ? Status::pass : Status::fail;
        r.witness = "class = " + (c ? std::to_string(*c) : std::string("non-terminating")) + ", expected " +
                    std::to_string(expected_nilpotent_class(n));
    }));
    out.push_back(run_claim("nilpotent.length-bound", params, [&](VerificationReport &r) {
        const auto l = derived.length();
        r.status = l && *l <= n ? Status::pass : Status::fail;
        r.witness = "l = " + (l ? std::to_string(*l) : std::string("non-terminating")) + " <= " + std::to_string(n);
    }));

    out.push_back(run_claim("nilpotent.derived-level-members", params, [&](VerificationReport &r) {
        // level j holds X_{n-j}, X_{n-j}(u_{n-j-1}) X_{n-j-1}, ... down to X_1
        r.status = Status::pass;
        for (std::size_t j = 1; j < n && j < derived.terms.size(); ++j) {
            LaurentPoly factor = LaurentPoly::constant(n, 1);
            for (std::size_t m = n - j; m >= 1; --m) {
                const VectorField f = factor * X[m - 1];
                if (!derived.terms[j].contains(f)) {
                    fail(r, "level " + std::to_string(j) + " misses " + to_string(f));
                }
                if (m == 1) {
                    break;
                }
                factor *= apply(X[m - 1], u[m - 1]);
            }
        }
    }));

    out.push_back(run_claim("nilpotent.derived-coefficients-first-integrals", params, [&](VerificationReport &r) {
        // every element of g^(j) is sum_k v_k X_k with v_k = 0 for k > n-j and
        // v_k killed by X_1..X_k
        r.status = Status::pass;
        for (std::size_t j = 0; j < derived.terms.size(); ++j) {
            for (const auto &y : derived.terms[j].basis()) {
                const auto v = decompose(y, X);
                for (std::size_t k = 1; k <= n; ++k) {
                    if (k > n - j && !v[k - 1].is_zero()) {
                        fail(r, "level " + std::to_string(j) + " element " + to_string(y) + " has an X" +
                                    std::to_string(k) + " component");
                    }
                    if (k == n) {
                        continue;
                    }
                    for (std::size_t i = 1; i <= k; ++i) {
                        if (!apply(X[i - 1], v[k - 1]).is_zero()) {
                            fail(r, name("X", i) + " does not kill the X" + std::to_string(k) + " coefficient " +
                                        to_string(v[k - 1]));
                        }
                    }
                }
            }
        }
    }));

    out.push_back(run_claim("nilpotent.good-monomial-factorization", params, [&](VerificationReport &r) {
        // Y_{k1..kj} = (Z_kj o ... o Z_k2)(u_k1) X_k1
        r.status = Status::pass;
        const auto words = good_monomial_words(Z, opts.good_monomial_depth);
        for (const auto &w : words) {
            const std::size_t k1 = w.word.front() + 1;
            LaurentPoly v = k1 < n ? u[k1] : LaurentPoly::constant(n, 1);
            for (std::size_t t = 1; t < w.word.size(); ++t) {
                v = apply(Z[w.word[t]], v);
            }
            if (v * X[k1 - 1] != w.field) {
                fail(r, "word of length " + std::to_string(w.word.size()) + " gives " + to_string(w.field));
            }
            if (k1 < n) {
                for (std::size_t i = 1; i <= k1; ++i) {
                    if (!apply(X[i - 1], v).is_zero()) {
                        fail(r, "coefficient " + to_string(v) + " not killed by " + name("X", i));
                    }
                }
            }
            if (!g.contains(w.field)) {
                fail(r, "monomial outside the algebra: " + to_string(w.field));
            }
        }
        r.notes.push_back(std::to_string(words.size()) + " good monomials up to depth " +
                          std::to_string(opts.good_monomial_depth));
    }));

    out.push_back(run_claim("nilpotent.kappa-sequence", params, [&](VerificationReport &r) {
        const auto kappa = kappa_sequence(derived);
        const bool ok = kappa.non_increasing() && kappa.strict_drop_every_two() &&
                        (kappa.values.front() < n || kappa.values.size() < 2 || kappa.values[1] < n);
        r.status = ok ? Status::pass : Status::fail;
        r.witness = to_string(kappa);
    }));
    return out;
}

} // namespace fgerm::families
