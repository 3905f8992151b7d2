#include <gtest/gtest.h>

#include <vector>

#include "fgerm/families/nilpotent.hpp"
#include "fgerm/families/solvable.hpp"
#include "fgerm/generic_rank.hpp"
#include "fgerm/lie_span.hpp"
#include "support.hpp"

using namespace fgerm;
using namespace fgerm::testing;

namespace
{

Scalar eval_at(const LaurentPoly &p, const std::vector<Scalar> &point)
{
    Scalar s(0);
    for (const auto &[e, c] : p.terms()) {
        Scalar t = c;
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (int r = 0; r < e[i]; ++r) {
                t = t * point[i];
            }
        }
        s += t;
    }
    return s;
}

/// Largest rank of the evaluated coefficient matrix over a few points.
std::size_t sampled_rank(const std::vector<VectorField> &fields, std::size_t n, Random &rng)
{
    std::size_t best = 0;
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<Scalar> pt;
        for (std::size_t i = 0; i < n; ++i) {
            pt.push_back(Scalar::rational(rng.uniform(-50, 50), rng.uniform(1, 7)));
        }
        if (fields.empty()) {
            return 0;
        }
        Matrix m(fields.size(), n);
        for (std::size_t r = 0; r < fields.size(); ++r) {
            for (std::size_t i = 0; i < n; ++i) {
                m(r, i) = eval_at(fields[r][i], pt);
            }
        }
        best = std::max(best, m.rank());
    }
    return best;
}

const SpanMode exact = ExactMode{};

} // namespace

TEST(SpanReduce, Examples)
{
    const VectorField f = d(1, mono({0, 2}));
    const std::vector<VectorField> twice{f, Scalar(2) * f};
    EXPECT_EQ(span_reduce(twice, 2, exact).size(), 1u);

    const VectorField g = d(1, mono({1, 1}));
    const std::vector<VectorField> three{f, g, f + g};
    EXPECT_EQ(span_reduce(three, 2, exact).size(), 2u);

    const TruncationOrder k(4);
    auto gens = families::u_generators(2, 1, k);
    const auto v = families::v_generators(2, 1, k);
    gens.insert(gens.end(), v.begin(), v.end());
    // x2^2, x2^3, x2^4 along d1 and x1 x2, x1 x2^2, x1 x2^3 along d1
    EXPECT_EQ(span_reduce(gens, 2, JetMode{k}).size(), 6u);

    const std::vector<VectorField> mixed{f, d(1, x(3, 1))};
    EXPECT_THROW(span_reduce(mixed, 2, exact), dimension_mismatch);
}

TEST(SpanReduce, JetModeTruncates)
{
    const TruncationOrder k(2);
    LieAlgebraSpan s(1, JetMode{k});
    EXPECT_FALSE(s.insert(d(1, mono({3}))));
    EXPECT_TRUE(s.insert(d(1, mono({2}) + mono({5}))));
    EXPECT_EQ(s.basis().front(), d(1, mono({2})));
    EXPECT_TRUE(s.contains(d(1, mono({2}, 3) + mono({4}))));
}

TEST(SpanReduce, BasisIsIndependentAndSpans)
{
    Random rng(51);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        std::vector<VectorField> fields;
        const int count = rng.uniform(1, 5);
        for (int i = 0; i < count; ++i) {
            fields.push_back(rng.field(n, 1, 1, 2));
        }
        // a dependent combination of the first two
        if (count >= 2) {
            fields.push_back(rng.scalar() * fields[0] + rng.scalar() * fields[1]);
        }
        const auto s = span_reduce(fields, n, exact);
        for (const auto &f : fields) {
            EXPECT_TRUE(s.contains(f));
        }
        EXPECT_LE(s.size(), static_cast<std::size_t>(count));
        // dropping any basis element loses it
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            std::vector<VectorField> rest;
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (i != drop) {
                    rest.push_back(s.basis()[i]);
                }
            }
            EXPECT_FALSE(span_reduce(rest, n, exact).contains(s.basis()[drop]));
        }
    }
}

TEST(BracketClosure, Examples)
{
    const auto ex = families::build_nilpotent_example(3);
    EXPECT_EQ(bracket_closure(ex.x_fields, 3, exact).size(), 3u);
    const std::vector<VectorField> one{d(1, mono({0, 2}))};
    EXPECT_EQ(bracket_closure(one, 2, exact).size(), 1u);
    const std::vector<VectorField> grow{d(1, mono({2})), d(1, mono({3}))};
    EXPECT_THROW(bracket_closure(grow, 1, ExactMode{6}), budget_exceeded);
    EXPECT_EQ(bracket_closure(grow, 1, JetMode{TruncationOrder(6)}).size(), 5u);
}

TEST(BracketClosure, IsClosedAndMatchesGoodMonomials)
{
    for (std::size_t n = 2; n <= 3; ++n) {
        const auto ex = families::build_nilpotent_example(n);
        const auto g = bracket_closure(ex.z_fields, n, exact);
        for (const auto &a : g.basis()) {
            for (const auto &b : g.basis()) {
                EXPECT_TRUE(g.contains(bracket(a, b)));
            }
        }
        const auto gm = good_monomials(ex.z_fields, 12);
        EXPECT_TRUE(same_span(g, span_reduce(gm, n, exact))) << "n=" << n;
    }
}

TEST(GoodMonomials, Examples)
{
    const auto ex = families::build_nilpotent_example(2);
    const auto depth1 = good_monomials(ex.z_fields, 1);
    EXPECT_EQ(depth1, ex.z_fields);
    const auto words = good_monomial_words(ex.z_fields, 2);
    ASSERT_EQ(words.size(), 3u);
    EXPECT_EQ(words[2].word, (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(words[2].field, bracket(ex.z_fields[1], ex.z_fields[0]));
    EXPECT_FALSE(words[2].field.is_zero());
}

TEST(DerivedSeries, Examples)
{
    const auto ex = families::build_nilpotent_example(3);
    const auto abelian = bracket_closure(ex.x_fields, 3, exact);
    const auto s = derived_series(abelian);
    EXPECT_TRUE(s.terminates);
    ASSERT_EQ(s.terms.size(), 2u);
    EXPECT_TRUE(s.terms[1].is_zero());

    const auto ex2 = families::build_nilpotent_example(2);
    const auto s2 = derived_series(bracket_closure(ex2.z_fields, 2, exact));
    EXPECT_EQ(s2.length(), 2u);
    EXPECT_FALSE(s2.terms[1].is_zero());

    const TruncationOrder k(6);
    const auto g0 = families::build_chain_span(1, 0, k);
    const auto s3 = derived_series(g0);
    ASSERT_EQ(s3.length(), 2u);
    const std::vector<VectorField> square{d(1, mono({2}))};
    EXPECT_TRUE(same_span(s3.terms[1], span_reduce(square, 1, JetMode{k})));

    // d/dx, x d/dx, x^2 d/dx span sl2, which equals its own derived algebra
    const std::vector<VectorField> sl2{d(1, c(1, 1)), d(1, mono({1})), d(1, mono({2}))};
    const auto s4 = derived_series(bracket_closure(sl2, 1, exact));
    EXPECT_FALSE(s4.terminates);
    EXPECT_EQ(s4.length(), std::nullopt);
}

TEST(DerivedSeries, TermsAreNestedAndClosed)
{
    const TruncationOrder k(8);
    const auto s = derived_series(families::build_chain_span(2, 0, k));
    for (std::size_t p = 0; p + 1 < s.terms.size(); ++p) {
        EXPECT_TRUE(s.terms[p].contains(s.terms[p + 1]));
        EXPECT_LT(s.terms[p + 1].size(), s.terms[p].size());
    }
}

TEST(CentralSeries, Examples)
{
    const auto ex = families::build_nilpotent_example(3);
    EXPECT_EQ(nilpotency_class(bracket_closure(ex.x_fields, 3, exact)), 1u);
    EXPECT_EQ(nilpotency_class(bracket_closure(ex.z_fields, 3, exact)), 5u);
    const auto ex2 = families::build_nilpotent_example(2);
    EXPECT_EQ(nilpotency_class(bracket_closure(ex2.z_fields, 2, exact)), 2u);

    const auto cs = central_series(families::build_chain_span(1, 0, TruncationOrder(6)));
    EXPECT_FALSE(cs.terminates);
    EXPECT_TRUE(cs.terms.back().contains(d(1, mono({2}))));
}

TEST(SolubleLength, Examples)
{
    EXPECT_EQ(soluble_length(LieAlgebraSpan(2, exact)), 0u);
    const auto ex = families::build_nilpotent_example(3);
    EXPECT_EQ(soluble_length(bracket_closure(ex.z_fields, 3, exact)), 3u);
}

TEST(SolubleLength, ParallelAgreesWithSerial)
{
    const TruncationOrder k(8);
    const auto g = families::build_chain_span(2, 0, k);
    const auto a = derived_series(g, 1);
    const auto b = derived_series(g, 4);
    ASSERT_EQ(a.terms.size(), b.terms.size());
    for (std::size_t p = 0; p < a.terms.size(); ++p) {
        EXPECT_TRUE(same_span(a.terms[p], b.terms[p]));
    }
}

TEST(GenericRank, Examples)
{
    const std::vector<VectorField> one{d(1, mono({0, 2}))};
    EXPECT_EQ(generic_rank(one), 1u);
    const std::vector<VectorField> line{d(1, mono({0, 2})), d(1, mono({1, 1}))};
    EXPECT_EQ(generic_rank(line), 1u);
    const auto g0 = families::chain_generators(2, 0, TruncationOrder(4));
    EXPECT_EQ(generic_rank(g0), 2u);
    // Laurent rows are rescaled by monomials
    const std::vector<VectorField> laurent{d(1, LaurentPoly::monomial(Exponents{-1, 0}, Scalar(1))),
                                           d(2, LaurentPoly::monomial(Exponents{0, -2}, Scalar(1)))};
    EXPECT_EQ(generic_rank(laurent), 2u);
}

TEST(GenericRank, MatchesSampledEvaluation)
{
    Random rng(52);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        std::vector<VectorField> fields;
        const int count = rng.uniform(1, 4);
        for (int i = 0; i < count; ++i) {
            fields.push_back(rng.field(n, 2, 0, 2));
        }
        // a function-field combination of the first two
        if (count >= 2 && rng.coin()) {
            fields.push_back(rng.poly(n, 2, 0, 1) * fields[0] + rng.poly(n, 2, 0, 1) * fields[1]);
        }
        const std::size_t r = generic_rank(fields);
        EXPECT_EQ(r, sampled_rank(fields, n, rng));
        EXPECT_EQ(r, generic_rank(fields, RankOptions{std::nullopt}));
    }
}

TEST(Kappa, Examples)
{
    const std::vector<VectorField> one{d(1, mono({2}))};
    EXPECT_EQ(kappa_sequence(derived_series(bracket_closure(one, 1, exact))).values,
              (std::vector<std::size_t>{1, 0}));
    const auto ex = families::build_nilpotent_example(2);
    const auto k2 = kappa_sequence(derived_series(bracket_closure(ex.z_fields, 2, exact)));
    EXPECT_EQ(k2.values, (std::vector<std::size_t>{2, 1, 0}));
    EXPECT_TRUE(k2.non_increasing());
    EXPECT_TRUE(k2.strict_drop_every_two());
    EXPECT_EQ(to_string(k2), "[2, 1, 0]");

    const std::vector<VectorField> sl2{d(1, c(1, 1)), d(1, mono({1})), d(1, mono({2}))};
    EXPECT_THROW(kappa_sequence(derived_series(bracket_closure(sl2, 1, exact))), precondition_violation);
}

TEST(Kappa, StrictDropPredicate)
{
    KappaSequence k;
    k.values = {2, 2, 1, 1, 0};
    EXPECT_TRUE(k.strict_drop_every_two());
    k.values = {2, 2, 2, 0};
    EXPECT_FALSE(k.strict_drop_every_two());
}

TEST(TransitionMatrix, Examples)
{
    // split of the plane: X_1 = d1, X_2 = d2
    BasisSplit split;
    split.x = {d(1, c(2, 1)), d(2, c(2, 1))};
    const auto constant = transition_matrix(d(1, c(2, 3)) + d(2, c(2, -1)), split);
    for (const auto &row : constant.entries) {
        for (const auto &e : row) {
            EXPECT_TRUE(e.is_zero());
        }
    }
    const auto self = transition_matrix(split.x[1], split);
    for (const auto &row : self.entries) {
        for (const auto &e : row) {
            EXPECT_TRUE(e.is_zero());
        }
    }
    // Z = x2 d1: a_1 = x2, so M(2, 1) = d2(x2) = 1
    const auto m = transition_matrix(d(1, x(2, 2)), split);
    EXPECT_EQ(m.entries[1][0], RationalFunction(c(2, 1)));
    EXPECT_TRUE(m.entries[0][0].is_zero());

    BasisSplit degenerate;
    degenerate.x = {d(1, c(2, 1)), d(1, x(2, 2))};
    EXPECT_THROW(transition_matrix(d(2, c(2, 1)), degenerate), precondition_violation);
    BasisSplit line;
    line.x = {d(1, c(2, 1))};
    EXPECT_THROW(transition_matrix(d(2, c(2, 1)), line), precondition_violation);
}

TEST(TransitionMatrix, DecompositionReassembles)
{
    Random rng(53);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 2;
        BasisSplit split;
        split.y = {rng.field(n, 2, 0, 2)};
        split.x = {rng.field(n, 2, 0, 2)};
        std::vector<VectorField> both{split.y[0], split.x[0]};
        if (generic_rank(both) < 2) {
            continue;
        }
        const VectorField z = rng.field(n, 2, 0, 2);
        const auto m = transition_matrix(z, split);
        // det-cleared check: z = b Y + a X componentwise
        for (std::size_t i = 0; i < n; ++i) {
            const RationalFunction lhs(z[i]);
            const RationalFunction rhs = m.b[0] * RationalFunction(split.y[0][i]) + m.a[0] * RationalFunction(split.x[0][i]);
            EXPECT_TRUE((lhs - rhs).is_zero());
        }
    }
}

TEST(TransitionMatrix, BracketHomomorphismOnSolvableExample)
{
    const TruncationOrder k(12);
    const auto series = derived_series(families::build_chain_span(2, 0, k));
    ASSERT_EQ(series.length(), 4u);
    const auto kappa = kappa_sequence(series);
    std::size_t pairs = 0;
    for (std::size_t p = 0; p + 1 < series.terms.size(); ++p) {
        if (kappa.values[p] == kappa.values[p + 1]) {
            continue;
        }
        const auto &gp = series.terms[p].basis();
        const auto &gq = series.terms[p + 1].basis();
        BasisSplit split;
        for (const auto &f : gq) {
            auto trial = split.y;
            trial.push_back(f);
            if (generic_rank(trial) == trial.size()) {
                split.y = trial;
            }
        }
        for (const auto &f : gp) {
            auto trial = split.y;
            trial.insert(trial.end(), split.x.begin(), split.x.end());
            trial.push_back(f);
            if (generic_rank(trial) == trial.size()) {
                split.x.push_back(f);
            }
        }
        ASSERT_EQ(split.x.size(), kappa.values[p] - kappa.values[p + 1]);
        for (std::size_t i = 0; i < std::min<std::size_t>(gp.size(), 5); ++i) {
            for (std::size_t j = 0; j < std::min<std::size_t>(gp.size(), 5); ++j) {
                const auto mz = transition_matrix(gp[i], split);
                const auto mw = transition_matrix(gp[j], split);
                const auto mb = transition_matrix(bracket(gp[i], gp[j], k), split);
                EXPECT_EQ(mb.entries, commutator(mz, mw)) << "p=" << p << " i=" << i << " j=" << j;
                ++pairs;
            }
        }
    }
    EXPECT_GE(pairs, 20u);
}

TEST(SpanText, HeaderAndFields)
{
    const std::vector<VectorField> gens{d(1, mono({2}))};
    const auto s = span_reduce(gens, 1, JetMode{TruncationOrder(4)});
    const std::string text = to_string(s);
    EXPECT_NE(text.find("# dim 1"), std::string::npos);
    EXPECT_NE(text.find("# mode jet 4"), std::string::npos);
    EXPECT_NE(text.find("x1^2 d1"), std::string::npos);
}
