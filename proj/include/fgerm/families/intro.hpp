#pragma once

// Two-variable group ((x + P(y)) / (1 + t y)^k, y / (1 + t y)) with
// P in (y^2), deg P <= k. It is nilpotent of class k - 1.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fgerm/diffeo.hpp"
#include "fgerm/error.hpp"
#include "fgerm/families/report.hpp"
#include "fgerm/laurent_poly.hpp"
#include "fgerm/lie_span.hpp"

namespace fgerm::families
{

struct IntroMember {
    LaurentPoly p; ///< polynomial in x2 alone, in (x2^2)
    Scalar t;
};

namespace detail
{
/// (1 + t y)^{-k} as a series in y = x2, up to degree `order`.
inline LaurentPoly inverse_binomial_power(const Scalar &t, int k, int order)
{
    LaurentPoly s(2);
    Scalar c(1); // (-1)^j binom(k+j-1, j) t^j
    for (int j = 0; j <= order; ++j) {
        s.add_term(Exponents{0, j}, c);
        c = c * Scalar::rational(-(k + j), j + 1) * t;
    }
    return s;
}

inline bool depends_on_y_only(const LaurentPoly &p)
{
    for (const auto &[e, c] : p.terms()) {
        if (e[0] != 0 || e[1] < 0) {
            return false;
        }
    }
    return true;
}
} // namespace detail

inline FormalDiffeo build_intro_member(int k_param, const IntroMember &m, TruncationOrder order)
{
    if (k_param < 2) {
        throw precondition_violation("family parameter k must be at least 2");
    }
    if (m.p.dim() != 2 || !detail::depends_on_y_only(m.p)) {
        throw precondition_violation("P must be a polynomial in x2 alone");
    }
    if (auto lo = m.p.min_degree(); lo && *lo < 2) {
        throw precondition_violation("P must lie in (x2^2)");
    }
    if (auto hi = m.p.max_degree(); hi && *hi > k_param) {
        throw precondition_violation("P must have degree at most k");
    }
    const int k = order.value();
    const LaurentPoly x = LaurentPoly::variable(2, 0);
    const LaurentPoly first = mul_truncated(x + m.p, detail::inverse_binomial_power(m.t, k_param, k), order);
    const LaurentPoly y = LaurentPoly::variable(2, 1);
    const LaurentPoly second = mul_truncated(y, detail::inverse_binomial_power(m.t, 1, k), order);
    return FormalDiffeo({first, second}, order);
}

inline std::vector<FormalDiffeo> build_intro_family(int k_param, const std::vector<IntroMember> &members,
                                                    TruncationOrder order)
{
    std::vector<FormalDiffeo> out;
    for (const auto &m : members) {
        out.push_back(build_intro_member(k_param, m, order));
    }
    return out;
}

/// Lie algebra of the family: k y x dx + y^2 dy together with y^j dx,
/// 2 <= j <= k.
inline std::vector<VectorField> intro_lie_generators(int k_param)
{
    std::vector<VectorField> gens;
    VectorField h(2);
    h[0] = LaurentPoly::monomial(Exponents{1, 1}, Scalar(k_param));
    h[1] = LaurentPoly::monomial(Exponents{0, 2}, Scalar(1));
    gens.push_back(h);
    for (int j = 2; j <= k_param; ++j) {
        gens.push_back(VectorField::along(0, LaurentPoly::monomial(Exponents{0, j}, Scalar(1))));
    }
    return gens;
}

/// True iff phi = (x + Q(y), y) with Q in (y^m).
inline bool is_vertical_translation(const FormalDiffeo &phi, int m)
{
    const LaurentPoly x = LaurentPoly::variable(2, 0);
    if (phi[1] != LaurentPoly::variable(2, 1)) {
        return false;
    }
    const LaurentPoly q = phi[0] - x;
    if (!detail::depends_on_y_only(q)) {
        return false;
    }
    const auto lo = q.min_degree();
    return !lo || *lo >= m;
}

namespace detail
{
/// Portable bounded draw (std distributions differ across standard libraries).
inline long draw(std::mt19937_64 &gen, long lo, long hi)
{
    return lo + static_cast<long>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline IntroMember random_intro_member(std::mt19937_64 &gen, int k_param)
{
    LaurentPoly p(2);
    for (int j = 2; j <= k_param; ++j) {
        p.add_term(Exponents{0, j}, Scalar::rational(draw(gen, -4, 4), draw(gen, 1, 3)));
    }
    long num = 0;
    while (num == 0) {
        num = draw(gen, -5, 5);
    }
    return {p, Scalar::rational(num, draw(gen, 1, 3))};
}

/// [g_0, [g_1, ..., [g_{d-1}, g_d]]], a commutator of depth d.
inline FormalDiffeo left_normed(const std::vector<FormalDiffeo> &gs)
{
    FormalDiffeo acc = gs.back();
    for (std::size_t i = gs.size() - 1; i-- > 0;) {
        acc = group_commutator(gs[i], acc);
    }
    return acc;
}
} // namespace detail

struct IntroOptions {
    std::size_t samples = 12;
    std::uint64_t seed = 1;
};

/// Sampled check of nilpotency class k - 1: every depth-j commutator is a
/// vertical translation by Q in (y^{j+2}) for 1 <= j <= k-2, some depth
/// k-2 commutator is nontrivial, and depth k-1 commutators vanish.
inline std::vector<VerificationReport> verify_intro_nilpotency(int k_param, TruncationOrder order,
                                                               IntroOptions opts = {})
{
    if (order.value() < k_param + 2) {
        throw precondition_violation("jet order must be at least k + 2");
    }
    std::vector<VerificationReport> out;
    const nlohmann::json params = {
        {"k", k_param}, {"order", order.value()}, {"samples", opts.samples}, {"seed", opts.seed}};
    std::mt19937_64 gen(opts.seed);
    auto draw_element = [&] { return build_intro_member(k_param, detail::random_intro_member(gen, k_param), order); };
    const std::size_t top = static_cast<std::size_t>(k_param) - 1;

    std::vector<std::vector<FormalDiffeo>> by_depth(top + 1);
    for (std::size_t s = 0; s < opts.samples; ++s) {
        for (std::size_t d = 0; d <= top; ++d) {
            std::vector<FormalDiffeo> gs;
            for (std::size_t i = 0; i <= d; ++i) {
                gs.push_back(draw_element());
            }
            by_depth[d].push_back(detail::left_normed(gs));
        }
    }

    out.push_back(run_claim("intro.commutator-shape", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        for (std::size_t d = 1; d + 1 <= top; ++d) {
            for (const auto &c : by_depth[d]) {
                if (!is_vertical_translation(c, static_cast<int>(d) + 2)) {
                    r.status = Status::fail;
                    r.witness = "depth " + std::to_string(d) + ": " + to_string(c);
                    return;
                }
            }
        }
        r.notes.push_back("the shape (x + Q(y), y) is read with Q depending on y alone");
    }));

    out.push_back(run_claim("intro.nontrivial-witness", params, [&](VerificationReport &r) {
        const std::size_t d = top - 1;
        for (const auto &c : by_depth[d]) {
            if (!c.is_identity()) {
                r.status = Status::pass;
                r.witness = "depth " + std::to_string(d) + ": " + to_string(c);
                return;
            }
        }
        // the true commutator may only vanish under truncation; a higher
        // order would be needed to tell
        r.status = Status::unstable;
        r.witness = "no nontrivial depth-" + std::to_string(d) + " commutator at this order";
    }));

    out.push_back(run_claim("intro.top-commutators-trivial", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        for (const auto &c : by_depth[top]) {
            if (!c.is_identity()) {
                r.status = Status::fail;
                r.witness = "depth " + std::to_string(top) + ": " + to_string(c);
                return;
            }
        }
    }));

    const nlohmann::json lie_params = {{"k", k_param}};
    const auto gens = intro_lie_generators(k_param);
    const LieAlgebraSpan g = bracket_closure(gens, 2, ExactMode{static_cast<std::size_t>(4 * k_param + 8)});
    out.push_back(run_claim("intro.lie-nilpotency-class", lie_params, [&](VerificationReport &r) {
        const auto c = nilpotency_class(g);
        r.status = c && *c == top ? Status::pass : Status::fail;
        r.witness = "class = " + (c ? std::to_string(*c) : std::string("non-terminating")) + ", expected " +
                    std::to_string(top);
    }));
    out.push_back(run_claim("intro.length-bound", lie_params, [&](VerificationReport &r) {
        // unipotent nilpotent algebra in two variables: length at most 2
        const auto l = soluble_length(g);
        r.status = l && *l <= 2 ? Status::pass : Status::fail;
        r.witness = "l = " + (l ? std::to_string(*l) : std::string("non-terminating")) + " <= 2";
    }));
    return out;
}

} // namespace fgerm::families
