#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "fgerm/families/fixture.hpp"
#include "fgerm/families/h0.hpp"
#include "fgerm/families/intro.hpp"
#include "fgerm/families/nilpotent.hpp"
#include "fgerm/families/solvable.hpp"
#include "support.hpp"

using namespace fgerm;
using namespace fgerm::families;
using namespace fgerm::testing;

namespace
{

void expect_all_pass(const std::vector<VerificationReport> &reports)
{
    ASSERT_FALSE(reports.empty());
    for (const auto &r : reports) {
        EXPECT_TRUE(r.passed()) << r.claim_id << " " << r.parameters.dump() << " -> " << to_string(r.status) << " "
                                << r.witness.value_or("");
    }
}

const VerificationReport &find_claim(const std::vector<VerificationReport> &reports, const std::string &id)
{
    for (const auto &r : reports) {
        if (r.claim_id == id) {
            return r;
        }
    }
    throw std::runtime_error("missing claim " + id);
}

std::string data_file(const std::string &name)
{
    return std::string(FGERM_DATA_DIR) + "/" + name;
}

} // namespace

// ---- nilpotent family ----

TEST(NilpotentFamily, AllClaimsPass)
{
    for (std::size_t n = 2; n <= 5; ++n) {
        SCOPED_TRACE("n=" + std::to_string(n));
        expect_all_pass(verify_nilpotent_example(n));
    }
}

TEST(NilpotentFamily, FieldIdentities)
{
    for (std::size_t n = 3; n <= 5; ++n) {
        const auto ex = build_nilpotent_example(n);
        const auto &X = ex.x_fields;
        for (const auto &a : X) {
            for (const auto &b : X) {
                EXPECT_TRUE(bracket(a, b).is_zero());
            }
        }
        EXPECT_EQ(apply(X[n - 1], ex.u[n - 1]), c(n, -1));
        for (std::size_t k = 2; k + 1 <= n; ++k) {
            // X_{n-k+1}(u_{n-k}) squared is 4 u_{n-k}
            const LaurentPoly img = apply(X[n - k], ex.u[n - k]);
            EXPECT_EQ(img.pow(2), ex.u[n - k] * Scalar(4)) << "n=" << n << " k=" << k;
        }
        for (const auto &z : ex.z_fields) {
            EXPECT_TRUE(z.is_polynomial());
        }
    }
}

TEST(NilpotentFamily, AValuesAndChainComposite)
{
    const auto ex = build_nilpotent_example(4);
    const std::vector<std::size_t> expected{1, 4, 10};
    for (std::size_t k = 1; k <= 3; ++k) {
        EXPECT_EQ(nilpotency_degree_a(ex.u[4 - k], ex.z_fields), expected[k - 1]);
        EXPECT_EQ(expected_a_value(k), expected[k - 1]);
    }
    for (std::size_t n = 3; n <= 4; ++n) {
        const auto e = build_nilpotent_example(n);
        const LaurentPoly v = chain_composite(e, n - 1);
        EXPECT_FALSE(v.is_zero());
        EXPECT_TRUE(v.is_constant()) << to_string(v);
    }
    EXPECT_THROW(chain_composite(ex, 0), precondition_violation);
    EXPECT_THROW(chain_composite(ex, 4), precondition_violation);
}

TEST(NilpotentFamily, LengthAndClass)
{
    const std::vector<std::size_t> classes{2, 5, 11};
    for (std::size_t n = 2; n <= 4; ++n) {
        const auto ex = build_nilpotent_example(n);
        const auto g = bracket_closure(ex.z_fields, n, ExactMode{256});
        EXPECT_EQ(soluble_length(g), n);
        EXPECT_EQ(nilpotency_class(g), classes[n - 2]);
        EXPECT_EQ(expected_nilpotent_class(n), classes[n - 2]);
    }
}

TEST(NilpotentFamily, PrintedTopFieldFailsToCommute)
{
    // -x2 x3 d2 + x3^2 d3 commutes with X_2 but not with X_1
    const auto ex = build_nilpotent_example(3);
    const VectorField literal = d(2, mono({0, 1, 1}, -1)) + d(3, mono({0, 0, 2}));
    EXPECT_TRUE(bracket(ex.x_fields[1], literal).is_zero());
    EXPECT_FALSE(bracket(ex.x_fields[0], literal).is_zero());
    EXPECT_TRUE(bracket(ex.x_fields[0], ex.x_fields[2]).is_zero());
}

TEST(NilpotentFamily, RejectsSmallDimension)
{
    EXPECT_THROW(build_nilpotent_example(1), precondition_violation);
}

// ---- solvable chain ----

TEST(SolvableChain, Examples)
{
    const TruncationOrder k(6);
    const std::vector<VectorField> expected{d(1, mono({2})), d(1, mono({1}))};
    EXPECT_TRUE(same_span(build_chain_span(1, 0, k), span_reduce(expected, 1, JetMode{k})));
    EXPECT_TRUE(build_chain_span(2, 4, k).is_zero());
    EXPECT_EQ(chain_generators(2, 3, k), u_generators(2, 1, k));
    EXPECT_THROW(chain_generators(2, 5, k), precondition_violation);
    EXPECT_EQ(chain_exponent(2), 3u);
    EXPECT_EQ(chain_exponent(3), 8u);
    EXPECT_EQ(default_solvable_order(1), 6);
    EXPECT_EQ(default_solvable_order(2), 11);
}

TEST(SolvableChain, ChainIsDecreasing)
{
    const TruncationOrder k(8);
    for (std::size_t n = 1; n <= 2; ++n) {
        for (std::size_t j = 0; j < 2 * n; ++j) {
            EXPECT_TRUE(build_chain_span(n, j, k).contains(build_chain_span(n, j + 1, k)));
        }
    }
}

TEST(SolvableFamily, LengthAndKappa)
{
    const auto one = run_solvable(1, TruncationOrder(6), 1);
    EXPECT_EQ(one.length, 2u);
    const auto two = run_solvable(2, TruncationOrder(12), 1);
    EXPECT_EQ(two.length, 4u);
    ASSERT_TRUE(two.kappa);
    EXPECT_EQ(two.kappa->values, (std::vector<std::size_t>{2, 2, 1, 1, 0}));
    EXPECT_TRUE(two.kappa->strict_drop_every_two());
}

TEST(SolvableFamily, AllClaimsPass)
{
    expect_all_pass(verify_solvable_family(1, TruncationOrder(default_solvable_order(1))));
    const auto r2 = verify_solvable_family(2, TruncationOrder(12));
    expect_all_pass(r2);
    EXPECT_TRUE(find_claim(r2, "solvable.length-bound").passed());
    EXPECT_TRUE(find_claim(r2, "solvable.unipotent-length-bound").passed());
    EXPECT_THROW(verify_solvable_family(3, TruncationOrder(6)), precondition_violation);
}

TEST(SolvableFamily, LowOrderIsNotReportedAsPass)
{
    // at order 4 the n = 2 series cannot see its full length
    const auto r = verify_solvable_family(2, TruncationOrder(4));
    EXPECT_FALSE(find_claim(r, "solvable.soluble-length").passed());
}

// ---- two-generator family in the plane ----

TEST(IntroFamily, AllClaimsPass)
{
    for (int k = 3; k <= 5; ++k) {
        SCOPED_TRACE("k=" + std::to_string(k));
        expect_all_pass(verify_intro_nilpotency(k, TruncationOrder(k + 3)));
    }
}

TEST(IntroFamily, BuilderChecksShape)
{
    const TruncationOrder k(6);
    EXPECT_THROW(build_intro_member(1, {LaurentPoly(2), Scalar(1)}, k), precondition_violation);
    EXPECT_THROW(build_intro_member(3, {mono({0, 1}), Scalar(1)}, k), precondition_violation);
    EXPECT_THROW(build_intro_member(3, {mono({1, 2}), Scalar(1)}, k), precondition_violation);
    EXPECT_THROW(build_intro_member(3, {mono({0, 4}), Scalar(1)}, k), precondition_violation);
    // t = 0 and P = 0 is the identity
    EXPECT_TRUE(build_intro_member(3, {LaurentPoly(2), Scalar(0)}, k).is_identity());
    EXPECT_THROW(verify_intro_nilpotency(4, TruncationOrder(5)), precondition_violation);
}

TEST(IntroFamily, VerticalTranslationShape)
{
    const TruncationOrder k(6);
    EXPECT_TRUE(is_vertical_translation(FormalDiffeo({x(2, 1) + mono({0, 3}), x(2, 2)}, k), 3));
    EXPECT_FALSE(is_vertical_translation(FormalDiffeo({x(2, 1) + mono({0, 3}), x(2, 2)}, k), 4));
    EXPECT_FALSE(is_vertical_translation(FormalDiffeo({x(2, 1) + mono({1, 2}), x(2, 2)}, k), 2));
    EXPECT_FALSE(is_vertical_translation(FormalDiffeo({x(2, 1), x(2, 2) + mono({0, 2})}, k), 2));
}

// ---- triangular group ----

TEST(H0Group, BuilderExample)
{
    H0Params p;
    p.a = {mono({0, 2})};
    p.b = {c(2, 1) + x(2, 2)};
    p.lambda = Scalar(1);
    p.mu = Scalar(1);
    const auto g = build_H0_generator(2, p, TruncationOrder(5));
    EXPECT_EQ(g, FormalDiffeo({mono({0, 2}) + x(2, 1) + mono({1, 1}),
                               x(2, 2) - mono({0, 2}) + mono({0, 3}) - mono({0, 4}) + mono({0, 5})},
                              TruncationOrder(5)));
}

TEST(H0Group, BuilderRejectsMalformedShape)
{
    const TruncationOrder k(5);
    H0Params p;
    p.a = {mono({0, 2})};
    p.b = {c(2, 1)};
    EXPECT_NO_THROW(build_H0_generator(2, p, k));

    H0Params wrong_count = p;
    wrong_count.a.push_back(mono({0, 2}));
    EXPECT_THROW(build_H0_generator(2, wrong_count, k), precondition_violation);

    H0Params low = p;
    low.a = {x(2, 2)};
    EXPECT_THROW(build_H0_generator(2, low, k), precondition_violation);

    H0Params depends_on_x1 = p;
    depends_on_x1.a = {mono({2, 0})};
    EXPECT_THROW(build_H0_generator(2, depends_on_x1, k), precondition_violation);

    H0Params bad_b = p;
    bad_b.b = {c(2, 2)};
    EXPECT_THROW(build_H0_generator(2, bad_b, k), precondition_violation);

    H0Params zero_lambda = p;
    zero_lambda.lambda = Scalar(0);
    EXPECT_THROW(build_H0_generator(2, zero_lambda, k), precondition_violation);

    H0Params wrong_dim = p;
    wrong_dim.a = {mono({0, 0, 2})};
    EXPECT_THROW(build_H0_generator(2, wrong_dim, k), dimension_mismatch);
}

TEST(H0Group, WordsAndSubwords)
{
    const auto w = balanced_word(3, 4);
    EXPECT_EQ(w.depth(), 3u);
    EXPECT_EQ(to_string(w), "[[[0,1],[2,3]],[[0,1],[2,3]]]");
    const auto subs = subwords(w);
    EXPECT_EQ(subs.size(), 7u);
    EXPECT_EQ(to_string(subs.back()), to_string(w));
    EXPECT_EQ(subs.front().depth(), 1u);
    EXPECT_EQ(to_string(balanced_word(2, 3, 9)), to_string(balanced_word(2, 3, 9)));
}

TEST(H0Group, SearchIsDeterministic)
{
    const auto a = search_length_witness(1, 1, TruncationOrder(5), 7);
    const auto b = search_length_witness(1, 1, TruncationOrder(5), 7);
    ASSERT_TRUE(a && b);
    EXPECT_EQ(to_fixture_text(*a), to_fixture_text(*b));
    // a found witness certifies itself
    expect_all_pass(verify_group_fixture(*a));
    // the group is soluble of length at most 2 in dimension 1
    EXPECT_FALSE(search_length_witness(1, 2, TruncationOrder(6), 7, 4, 8).has_value());
}

TEST(H0Group, FixturesCertifyLength)
{
    const auto w1 = read_group_witness(data_file("group_witness_n1.txt"));
    EXPECT_EQ(w1.dim, 1u);
    const auto r1 = verify_group_fixture(w1);
    expect_all_pass(r1);
    EXPECT_EQ(find_claim(r1, "group.length-witness").parameters["depth"], 1);

    const auto w2 = read_group_witness(data_file("group_witness_n2.txt"));
    EXPECT_EQ(w2.dim, 2u);
    const auto r2 = verify_group_fixture(w2);
    expect_all_pass(r2);
    EXPECT_EQ(find_claim(r2, "group.length-witness").parameters["depth"], 3);
}

TEST(H0Group, WitnessRejectsShallowWords)
{
    const auto w1 = read_group_witness(data_file("group_witness_n1.txt"));
    const auto gens = build_H0_generators(1, w1.generators, w1.order);
    const std::vector<CommutatorWord> shallow{CommutatorWord::leaf(0)};
    EXPECT_THROW(verify_group_length_witness(gens, 1, shallow), precondition_violation);
    // a trivial word does not certify anything
    const std::vector<CommutatorWord> trivial{CommutatorWord::commutator(CommutatorWord::leaf(0), CommutatorWord::leaf(0))};
    EXPECT_EQ(verify_group_length_witness(gens, 1, trivial).status, Status::fail);
}

TEST(Fixture, ParseAndRoundTrip)
{
    const std::string text = "# comment\ndim 2\norder 5\ngen x2^2 ; 1 + x2 ; 2 ; 1/2\ngen 0 ; 1 ; -1 ; 0\nword [0,~1]\n";
    const auto w = parse_group_witness(text);
    EXPECT_EQ(w.dim, 2u);
    EXPECT_EQ(w.order, TruncationOrder(5));
    ASSERT_EQ(w.generators.size(), 2u);
    EXPECT_EQ(w.generators[0].a[0], mono({0, 2}));
    EXPECT_EQ(w.generators[0].mu, Scalar::rational(1, 2));
    ASSERT_EQ(w.words.size(), 1u);
    EXPECT_EQ(to_string(w.words[0]), "[0,~1]");
    const auto again = parse_group_witness(to_fixture_text(w));
    EXPECT_EQ(to_fixture_text(again), to_fixture_text(w));
}

TEST(Fixture, Errors)
{
    EXPECT_THROW(parse_group_witness("order 3\n"), parse_error);
    EXPECT_THROW(parse_group_witness("dim 1\norder 3\nbogus 1\n"), parse_error);
    EXPECT_THROW(parse_group_witness("dim 2\norder 3\ngen 1 ; 2\n"), parse_error);
    EXPECT_THROW(parse_group_witness("gen 1 ; 0\ndim 1\norder 3\n"), parse_error);
    EXPECT_THROW(read_group_witness(data_file("does_not_exist.txt")), precondition_violation);
    try {
        parse_group_witness("dim 1\norder 3\nword [0,\n");
        FAIL() << "expected a parse error";
    } catch (const parse_error &e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

// ---- bounds across every example ----

TEST(Bounds, LengthBoundsHoldOnEveryExample)
{
    for (std::size_t n = 2; n <= 5; ++n) {
        const auto r = verify_nilpotent_example(n);
        EXPECT_TRUE(find_claim(r, "nilpotent.length-bound").passed()) << n;
    }
    for (std::size_t n = 1; n <= 2; ++n) {
        const auto r = verify_solvable_family(n, TruncationOrder(n == 1 ? 6 : 12));
        EXPECT_TRUE(find_claim(r, "solvable.length-bound").passed()) << n;
        EXPECT_TRUE(find_claim(r, "solvable.unipotent-length-bound").passed()) << n;
    }
    for (int k = 3; k <= 5; ++k) {
        const auto r = verify_intro_nilpotency(k, TruncationOrder(k + 3));
        EXPECT_TRUE(find_claim(r, "intro.length-bound").passed()) << k;
    }
}
