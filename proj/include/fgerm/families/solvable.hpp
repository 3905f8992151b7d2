#pragma once

// The chain G_0 > G_1 > ... > G_{2n} = 0 of spans of monomial fields built
// from U_j = a(x_{j+1..n}) d_j (a in m^2) and V_j = x_j b(x_{j+1..n}) d_j
// (b in m), with U_n = C x_n^2 d_n and V_n = C x_n d_n.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fgerm/error.hpp"
#include "fgerm/families/report.hpp"
#include "fgerm/generic_rank.hpp"
#include "fgerm/laurent_poly.hpp"
#include "fgerm/lie_span.hpp"
#include "fgerm/vector_field.hpp"

namespace fgerm::families
{

namespace detail
{
/// Monomials in x_{first..n} (one-based `first`) with total degree in [lo, hi].
inline std::vector<Exponents> tail_monomials(std::size_t n, std::size_t first, int lo, int hi)
{
    std::vector<Exponents> out;
    if (first > n) {
        if (lo <= 0 && 0 <= hi) {
            out.emplace_back(n, 0);
        }
        return out;
    }
    Exponents e(n, 0);
    auto rec = [&](auto &&self, std::size_t i, int remaining) -> void {
        if (i == n) {
            const int d = total_degree(e);
            if (d >= lo) {
                out.push_back(e);
            }
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            e[i] = v;
            self(self, i + 1, remaining - v);
        }
        e[i] = 0;
    };
    rec(rec, first - 1, hi);
    return out;
}
} // namespace detail

/// Monomial generators of U_j (one-based j) with coefficient degree <= k.
inline std::vector<VectorField> u_generators(std::size_t n, std::size_t j, TruncationOrder k)
{
    std::vector<VectorField> out;
    if (j == n) {
        if (k.value() >= 2) {
            Exponents e(n, 0);
            e[n - 1] = 2;
            out.push_back(VectorField::along(n - 1, LaurentPoly::monomial(e, Scalar(1))));
        }
        return out;
    }
    for (auto &e : detail::tail_monomials(n, j + 1, 2, k.value())) {
        out.push_back(VectorField::along(j - 1, LaurentPoly::monomial(e, Scalar(1))));
    }
    return out;
}

/// Monomial generators of V_j (one-based j) with coefficient degree <= k.
inline std::vector<VectorField> v_generators(std::size_t n, std::size_t j, TruncationOrder k)
{
    std::vector<VectorField> out;
    if (j == n) {
        Exponents e(n, 0);
        e[n - 1] = 1;
        out.push_back(VectorField::along(n - 1, LaurentPoly::monomial(e, Scalar(1))));
        return out;
    }
    for (auto e : detail::tail_monomials(n, j + 1, 1, k.value() - 1)) {
        e[j - 1] += 1;
        out.push_back(VectorField::along(j - 1, LaurentPoly::monomial(e, Scalar(1))));
    }
    return out;
}

/// Generators of G_j: with m = 2n - j, U_i + V_i for i <= m/2 and U_{(m+1)/2}
/// when m is odd.
inline std::vector<VectorField> chain_generators(std::size_t n, std::size_t j, TruncationOrder k)
{
    if (j > 2 * n) {
        throw precondition_violation("chain index must lie in 0..2n");
    }
    const std::size_t m = 2 * n - j;
    std::vector<VectorField> out;
    for (std::size_t i = 1; i <= m / 2; ++i) {
        auto u = u_generators(n, i, k);
        auto v = v_generators(n, i, k);
        out.insert(out.end(), u.begin(), u.end());
        out.insert(out.end(), v.begin(), v.end());
    }
    if (m % 2 == 1) {
        auto u = u_generators(n, (m + 1) / 2, k);
        out.insert(out.end(), u.begin(), u.end());
    }
    return out;
}

/// Jet-mode span of G_j.
inline LieAlgebraSpan build_chain_span(std::size_t n, std::size_t j, TruncationOrder k)
{
    return span_reduce(chain_generators(n, j, k), n, JetMode{k});
}

/// Exponent c_j = 2^j + 2^{j-2} - 2 of x_n in x_n^{c_j} G_j within G_0^(j),
/// for j >= 2.
inline std::size_t chain_exponent(std::size_t j)
{
    if (j < 2) {
        throw precondition_violation("exponent defined for j >= 2");
    }
    return (std::size_t{1} << j) + (std::size_t{1} << (j - 2)) - 2;
}

/// Smallest jet order used by default: c_{2n-1} + 3, and 6 for n = 1.
inline int default_solvable_order(std::size_t n)
{
    return n == 1 ? 6 : static_cast<int>(chain_exponent(2 * n - 1)) + 3;
}

struct SolvableOptions {
    std::size_t jobs = 1;
    bool heavy = false; ///< allow n >= 3
};

/// Derived-series data of G_0 at one jet order.
struct SolvableRun {
    LieSeries series;
    std::optional<std::size_t> length;
    std::optional<KappaSequence> kappa;
};

inline SolvableRun run_solvable(std::size_t n, TruncationOrder k, std::size_t jobs)
{
    SolvableRun run{derived_series(build_chain_span(n, 0, k), jobs), std::nullopt, std::nullopt};
    run.length = run.series.length();
    if (run.series.terminates) {
        run.kappa = kappa_sequence(run.series);
    }
    return run;
}

inline std::vector<VerificationReport> verify_solvable_family(std::size_t n, TruncationOrder k,
                                                              SolvableOptions opts = {})
{
    if (n == 0) {
        throw precondition_violation("dimension must be positive");
    }
    if (n >= 3 && !opts.heavy) {
        throw precondition_violation("n >= 3 needs the heavy opt-in");
    }
    std::vector<VerificationReport> out;
    const nlohmann::json params = {{"n", n}, {"order", k.value()}};
    const SolvableRun run = run_solvable(n, k, opts.jobs);
    const SolvableRun next = run_solvable(n, TruncationOrder(k.value() + 1), opts.jobs);
    const auto &terms = run.series.terms;
    const bool stable = run.length == next.length &&
                        (run.kappa && next.kappa ? run.kappa->values == next.kappa->values : !run.kappa && !next.kappa);

    out.push_back(run_claim("solvable.soluble-length", params, [&](VerificationReport &r) {
        auto show = [](const std::optional<std::size_t> &l) {
            return l ? std::to_string(*l) : std::string("non-terminating");
        };
        r.witness = "l = " + show(run.length) + " at order " + std::to_string(k.value()) + ", " + show(next.length) +
                    " at order " + std::to_string(k.value() + 1);
        if (!stable) {
            r.status = Status::unstable;
        } else {
            r.status = run.length && *run.length == 2 * n ? Status::pass : Status::fail;
        }
    }));

    out.push_back(run_claim("solvable.derived-inside-chain", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        for (std::size_t j = 0; j < terms.size() && j <= 2 * n; ++j) {
            const LieAlgebraSpan gj = build_chain_span(n, j, k);
            if (!gj.contains(terms[j])) {
                r.status = Status::fail;
                r.witness = "derived term " + std::to_string(j) + " is not inside G_" + std::to_string(j);
                return;
            }
        }
    }));

    out.push_back(run_claim("solvable.first-derived-contains", params, [&](VerificationReport &r) {
        // x_n^2 G_2 + U_n inside G_0^(1)
        r.status = Status::pass;
        if (terms.size() < 2) {
            r.status = Status::fail;
            r.witness = "first derived term missing";
            return;
        }
        const LaurentPoly xn2 = LaurentPoly::variable(n, n - 1).pow(2);
        std::vector<VectorField> probe;
        for (const auto &f : chain_generators(n, std::min<std::size_t>(2, 2 * n), k)) {
            probe.push_back(xn2 * f);
        }
        for (const auto &f : u_generators(n, n, k)) {
            probe.push_back(f);
        }
        for (const auto &f : probe) {
            if (!terms[1].contains(f)) {
                r.status = Status::fail;
                r.witness = "missing " + to_string(truncate(f, k));
                return;
            }
        }
    }));

    for (std::size_t j = 2; j < 2 * n; ++j) {
        nlohmann::json p = params;
        p["j"] = j;
        out.push_back(run_claim("solvable.power-multiple-inside-derived", p, [&](VerificationReport &r) {
            const std::size_t c = chain_exponent(j);
            r.notes.push_back("exponent " + std::to_string(c));
            if (j >= terms.size()) {
                r.status = Status::fail;
                r.witness = "derived series stops before level " + std::to_string(j);
                return;
            }
            const LaurentPoly xc = LaurentPoly::variable(n, n - 1).pow(static_cast<int>(c));
            std::size_t nonzero = 0;
            for (const auto &f : chain_generators(n, j, k)) {
                const VectorField g = truncate(xc * f, k);
                nonzero += g.is_zero() ? 0 : 1;
                if (!terms[j].contains(g)) {
                    r.status = Status::fail;
                    r.witness = "missing " + to_string(g);
                    return;
                }
            }
            r.notes.push_back(std::to_string(nonzero) + " generators survive truncation");
            r.status = nonzero > 0 ? Status::pass : Status::unstable;
        }));
    }

    out.push_back(run_claim("solvable.kappa-sequence", params, [&](VerificationReport &r) {
        if (!run.kappa) {
            r.status = Status::unstable;
            r.witness = "derived series does not terminate at this order";
            return;
        }
        r.witness = to_string(*run.kappa);
        const bool ok = run.kappa->non_increasing() && run.kappa->strict_drop_every_two();
        r.status = !stable ? Status::unstable : ok ? Status::pass : Status::fail;
    }));

    out.push_back(run_claim("solvable.length-bound", params, [&](VerificationReport &r) {
        r.status = run.length && *run.length <= 2 * n ? Status::pass : Status::fail;
        r.witness = "l = " + (run.length ? std::to_string(*run.length) : std::string("non-terminating")) +
                    " <= " + std::to_string(2 * n);
    }));

    // G_1 consists of fields with vanishing linear part
    const LieSeries unipotent = derived_series(build_chain_span(n, 1, k), opts.jobs);
    out.push_back(run_claim("solvable.unipotent-length-bound", params, [&](VerificationReport &r) {
        const auto l = unipotent.length();
        r.status = l && *l <= 2 * n - 1 ? Status::pass : Status::fail;
        r.witness = "l(G_1) = " + (l ? std::to_string(*l) : std::string("non-terminating")) + " <= " +
                    std::to_string(2 * n - 1);
    }));
    out.push_back(run_claim("solvable.unipotent-kappa", params, [&](VerificationReport &r) {
        if (!unipotent.terminates) {
            r.status = Status::fail;
            r.witness = "derived series of G_1 does not terminate";
            return;
        }
        const auto kappa = kappa_sequence(unipotent);
        r.witness = to_string(kappa);
        const bool drop = kappa.values.front() < n || kappa.values.size() < 2 || kappa.values[1] < n;
        r.status = kappa.non_increasing() && kappa.strict_drop_every_two() && drop ? Status::pass : Status::fail;
    }));
    return out;
}

} // namespace fgerm::families
