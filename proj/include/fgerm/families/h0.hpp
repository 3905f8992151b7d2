#pragma once

// Triangular group of diffeomorphisms
// (a_1 + x_1 b_1, ..., a_{n-1} + x_{n-1} b_{n-1}, lambda x_n / (1 + mu x_n))
// where a_j, b_j depend on x_{j+1..n} only, a_j in m^2, b_j - 1 in m.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fgerm/diffeo.hpp"
#include "fgerm/error.hpp"
#include "fgerm/families/report.hpp"
#include "fgerm/laurent_poly.hpp"

namespace fgerm::families
{

struct H0Params {
    std::vector<LaurentPoly> a; ///< n - 1 entries
    std::vector<LaurentPoly> b; ///< n - 1 entries
    Scalar lambda{1};
    Scalar mu{0};
};

namespace detail
{
/// Power series in x_{first+1..n} only (zero-based `first`).
inline bool depends_on_tail(const LaurentPoly &p, std::size_t first)
{
    for (const auto &[e, c] : p.terms()) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 0 || (i <= first && e[i] != 0)) {
                return false;
            }
        }
    }
    return true;
}

/// lambda x_n / (1 + mu x_n) up to degree k.
inline LaurentPoly moebius(std::size_t n, const Scalar &lambda, const Scalar &mu, int k)
{
    LaurentPoly h(n);
    Scalar c = lambda;
    for (int d = 1; d <= k; ++d) {
        Exponents e(n, 0);
        e[n - 1] = d;
        h.add_term(e, c);
        c = c * (-mu);
        if (c.is_zero()) {
            break;
        }
    }
    return h;
}
} // namespace detail

inline FormalDiffeo build_H0_generator(std::size_t n, const H0Params &p, TruncationOrder order)
{
    if (n == 0) {
        throw precondition_violation("dimension must be positive");
    }
    if (p.a.size() != n - 1 || p.b.size() != n - 1) {
        throw precondition_violation("expected " + std::to_string(n - 1) + " pairs (a_j, b_j)");
    }
    if (p.lambda.is_zero()) {
        throw precondition_violation("lambda must be nonzero");
    }
    std::vector<LaurentPoly> comps;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const LaurentPoly &a = p.a[j];
        const LaurentPoly &b = p.b[j];
        if (a.dim() != n || b.dim() != n) {
            throw dimension_mismatch("a_j, b_j must live in " + std::to_string(n) + " variables");
        }
        if (!detail::depends_on_tail(a, j) || !detail::depends_on_tail(b, j)) {
            throw precondition_violation("a_" + std::to_string(j + 1) + ", b_" + std::to_string(j + 1) +
                                         " may only depend on x_" + std::to_string(j + 2) + "..x_" +
                                         std::to_string(n));
        }
        if (auto lo = a.min_degree(); lo && *lo < 2) {
            throw precondition_violation("a_" + std::to_string(j + 1) + " must lie in m^2");
        }
        const LaurentPoly b1 = b - LaurentPoly::constant(n, Scalar(1));
        if (auto lo = b1.min_degree(); lo && *lo < 1) {
            throw precondition_violation("b_" + std::to_string(j + 1) + " - 1 must lie in m");
        }
        comps.push_back(a + mul_truncated(LaurentPoly::variable(n, j), b, order));
    }
    comps.push_back(detail::moebius(n, p.lambda, p.mu, order.value()));
    return FormalDiffeo(std::move(comps), order);
}

inline std::vector<FormalDiffeo> build_H0_generators(std::size_t n, std::span<const H0Params> params,
                                                     TruncationOrder order)
{
    std::vector<FormalDiffeo> out;
    for (const auto &p : params) {
        out.push_back(build_H0_generator(n, p, order));
    }
    return out;
}

/// Lower-bound certificate l >= depth + 1: passes iff some word of
/// commutator depth >= depth evaluates to a non-identity jet.
inline VerificationReport verify_group_length_witness(std::span<const FormalDiffeo> gens, std::size_t depth,
                                                      std::span<const CommutatorWord> words)
{
    nlohmann::json params = {{"depth", depth}, {"words", words.size()}};
    if (!gens.empty()) {
        params["n"] = gens.front().dim();
        params["order"] = gens.front().order().value();
    }
    return run_claim("group.length-witness", params, [&](VerificationReport &r) {
        r.status = Status::fail;
        for (const auto &w : words) {
            if (w.depth() < depth) {
                throw precondition_violation("word " + to_string(w) + " has depth below " + std::to_string(depth));
            }
        }
        for (const auto &w : words) {
            const FormalDiffeo v = evaluate_word(w, gens);
            if (!v.is_identity()) {
                r.status = Status::pass;
                r.witness = to_string(w) + " -> " + to_string(v);
                r.notes.push_back("certifies length >= " + std::to_string(depth + 1));
                return;
            }
        }
    });
}

/// Every word of depth >= 1 evaluates to a jet tangent to the identity.
inline VerificationReport verify_derived_unipotence(std::span<const FormalDiffeo> gens,
                                                    std::span<const CommutatorWord> words)
{
    nlohmann::json params = {{"words", words.size()}};
    if (!gens.empty()) {
        params["n"] = gens.front().dim();
        params["order"] = gens.front().order().value();
    }
    return run_claim("group.derived-tangent-to-identity", params, [&](VerificationReport &r) {
        r.status = Status::pass;
        for (const auto &w : words) {
            if (w.depth() == 0) {
                continue;
            }
            const FormalDiffeo v = evaluate_word(w, gens);
            if (v.linear_part() != Matrix::identity(v.dim())) {
                r.status = Status::fail;
                r.witness = to_string(w) + " has linear part " + to_string(v.linear_part());
                return;
            }
        }
    });
}

/// Balanced word of the given depth. Leaves cycle through 0..gens-1 when
/// `leaf_seed` is 0; otherwise leaves and inverse flags are drawn from it.
inline CommutatorWord balanced_word(std::size_t depth, std::size_t gens, std::uint64_t leaf_seed = 0)
{
    std::size_t next = 0;
    std::mt19937_64 gen(leaf_seed);
    auto build = [&](auto &&self, std::size_t d) -> CommutatorWord {
        if (d == 0) {
            const std::size_t idx = leaf_seed == 0 ? next++ % gens : static_cast<std::size_t>(gen() % gens);
            const bool inv = leaf_seed != 0 && gen() % 2 == 1;
            return CommutatorWord::leaf(idx, inv);
        }
        CommutatorWord l = self(self, d - 1);
        CommutatorWord r = self(self, d - 1);
        return CommutatorWord::commutator(std::move(l), std::move(r));
    };
    return build(build, depth);
}

/// Internal nodes of `w`, deepest first, ending with `w` itself.
inline std::vector<CommutatorWord> subwords(const CommutatorWord &w)
{
    std::vector<CommutatorWord> out;
    auto rec = [&](auto &&self, const CommutatorWord &v) -> void {
        if (v.is_leaf()) {
            return;
        }
        self(self, v.as_node().left);
        self(self, v.as_node().right);
        out.push_back(v);
    };
    rec(rec, w);
    return out;
}

struct GroupWitness {
    std::size_t dim = 1;
    TruncationOrder order{1};
    std::vector<H0Params> generators;
    std::vector<CommutatorWord> words;
};

namespace detail
{
inline Scalar small_rational(std::mt19937_64 &gen, bool nonzero)
{
    for (;;) {
        const long num = static_cast<long>(gen() % 7) - 3;
        const long den = static_cast<long>(gen() % 2) + 1;
        if (num != 0 || !nonzero) {
            return Scalar::rational(num, den);
        }
    }
}

/// Random polynomial in x_{first+1..n} with degrees in [lo, hi].
inline LaurentPoly random_tail_poly(std::mt19937_64 &gen, std::size_t n, std::size_t first, int lo, int hi)
{
    LaurentPoly p(n);
    const std::size_t terms = 1 + gen() % 3;
    for (std::size_t t = 0; t < terms; ++t) {
        Exponents e(n, 0);
        const int d = lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
        for (int s = 0; s < d; ++s) {
            const std::size_t v = first + 1 + gen() % (n - first - 1);
            e[v] += 1;
        }
        p.add_term(e, small_rational(gen, true));
    }
    return p;
}

inline H0Params random_h0_params(std::mt19937_64 &gen, std::size_t n)
{
    H0Params p;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        p.a.push_back(random_tail_poly(gen, n, j, 2, 3));
        p.b.push_back(LaurentPoly::constant(n, Scalar(1)) + random_tail_poly(gen, n, j, 1, 2));
    }
    p.lambda = small_rational(gen, true);
    p.mu = small_rational(gen, false);
    return p;
}
} // namespace detail

/// Randomized search for generators and a balanced word of the given depth
/// that evaluates to a non-identity jet. Deterministic for a fixed seed.
inline std::optional<GroupWitness> search_length_witness(std::size_t n, std::size_t depth, TruncationOrder order,
                                                         std::uint64_t seed, std::size_t generators = 4,
                                                         std::size_t attempts = 64)
{
    std::mt19937_64 gen(seed);
    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
        GroupWitness w;
        w.dim = n;
        w.order = order;
        for (std::size_t g = 0; g < generators; ++g) {
            w.generators.push_back(detail::random_h0_params(gen, n));
        }
        const auto gs = build_H0_generators(n, w.generators, order);
        const CommutatorWord word = balanced_word(depth, generators, attempt == 0 ? 0 : gen() | 1);
        if (!evaluate_word(word, gs).is_identity()) {
            w.words = subwords(word);
            return w;
        }
    }
    return std::nullopt;
}

/// Plain-text fixture: `dim`, `order`, one `gen a_1 ; b_1 ; ... ; lambda ; mu`
/// line per generator and one `word` line per commutator word.
inline std::string to_fixture_text(const GroupWitness &w)
{
    std::string out = "dim " + std::to_string(w.dim) + "\norder " + std::to_string(w.order.value()) + "\n";
    for (const auto &p : w.generators) {
        out += "gen ";
        for (std::size_t j = 0; j < p.a.size(); ++j) {
            out += to_string(p.a[j]) + " ; " + to_string(p.b[j]) + " ; ";
        }
        out += to_string(p.lambda) + " ; " + to_string(p.mu) + "\n";
    }
    for (const auto &word : w.words) {
        out += "word " + to_string(word) + "\n";
    }
    return out;
}

} // namespace fgerm::families
