#include <gtest/gtest.h>

#include <vector>

#include "fgerm/laurent_poly.hpp"
#include "fgerm/matrix.hpp"
#include "fgerm/scalar.hpp"
#include "support.hpp"

using namespace fgerm;
using namespace fgerm::testing;

namespace
{

// Dense univariate reference arithmetic, used as an oracle for one-variable
// series identities.
using Dense = std::vector<Scalar>;

Dense dense_mul(const Dense &a, const Dense &b, std::size_t keep)
{
    Dense r(keep, Scalar(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size() && i + j < keep; ++j) {
            r[i + j] += a[i] * b[j];
        }
    }
    return r;
}

LaurentPoly from_dense(const Dense &a)
{
    LaurentPoly p(1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        p.add_term(Exponents{static_cast<int>(i)}, a[i]);
    }
    return p;
}

} // namespace

TEST(Scalar, CanonicalForm)
{
    EXPECT_EQ(Scalar::rational(2, 4), Scalar::rational(-3, -6));
    EXPECT_EQ(to_string(Scalar::rational(6, -4)), "-3/2");
    EXPECT_EQ(to_string(Scalar::imag_unit() * Scalar(-1)), "-i");
    EXPECT_EQ(to_string(Scalar(1) + Scalar(2) * Scalar::imag_unit()), "1+2*i");
    EXPECT_EQ(Scalar::imag_unit() * Scalar::imag_unit(), Scalar(-1));
    EXPECT_THROW(Scalar(1) / Scalar(0), precondition_violation);
}

TEST(Scalar, GaussianInverse)
{
    Random rng(11);
    for (int t = 0; t < 100; ++t) {
        const Scalar s = rng.scalar();
        EXPECT_EQ(s * s.inverse(), Scalar(1));
        EXPECT_EQ(s * s.conj(), Scalar(s.norm()));
    }
}

TEST(LaurentPoly, DifferenceOfSquares)
{
    const auto a = x(2, 1) + x(2, 2);
    const auto b = x(2, 1) - x(2, 2);
    EXPECT_EQ(a * b, x(2, 1).pow(2) - x(2, 2).pow(2));
}

TEST(LaurentPoly, NegativeExponentsAdd)
{
    EXPECT_EQ(mono({0, 0, -1}) * mono({0, 0, 2}), x(3, 3));
    // x2^-2 x3^-2 times its reciprocal
    EXPECT_EQ(mono({0, -2, -2}) * mono({0, 2, 2}), c(3, 1));
    EXPECT_EQ(mono({0, -2, -2}).pow(-1), mono({0, 2, 2}));
}

TEST(LaurentPoly, DimensionMismatch)
{
    EXPECT_THROW(x(2, 1) + x(3, 1), dimension_mismatch);
    EXPECT_THROW(x(2, 1) * x(3, 1), dimension_mismatch);
}

TEST(LaurentPoly, NoZeroCoefficientsStored)
{
    auto p = x(2, 1) + x(2, 2);
    p -= x(2, 1);
    EXPECT_EQ(p.size(), 1u);
    EXPECT_EQ(p, x(2, 2));
    EXPECT_TRUE((p - p).is_zero());
}

TEST(LaurentPoly, Predicates)
{
    EXPECT_TRUE((x(2, 1) + x(2, 2).pow(2)).in_maximal_ideal());
    EXPECT_FALSE((x(2, 1) + c(2, 1)).in_maximal_ideal());
    EXPECT_FALSE(mono({1, -1}).in_maximal_ideal());
    EXPECT_FALSE(mono({1, -1}).is_power_series());
}

TEST(Truncate, DropsHighDegree)
{
    const auto t = x(1, 1);
    EXPECT_EQ(truncate(t + t.pow(2) + t.pow(5), TruncationOrder(3)), t + t.pow(2));
    EXPECT_TRUE(truncate(LaurentPoly(1), TruncationOrder(1)).is_zero());
    EXPECT_THROW(truncate(mono({-1}), TruncationOrder(2)), precondition_violation);
    EXPECT_THROW(TruncationOrder(0), precondition_violation);
}

TEST(Truncate, SquareOfSeries)
{
    // oracle: dense convolution of (x + x^2) with itself
    const Dense a{Scalar(0), Scalar(1), Scalar(1)};
    const auto expected = from_dense(dense_mul(a, a, 4));
    const auto t = x(1, 1);
    EXPECT_EQ(truncate((t + t.pow(2)).pow(2), TruncationOrder(3)), expected);
    EXPECT_EQ(expected, t.pow(2) + c(1, 2) * t.pow(3));
}

TEST(Truncate, IdempotentAndMultiplicative)
{
    Random rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        const TruncationOrder k(rng.uniform(1, 5));
        const auto a = rng.poly(n, 5, 0, 6);
        const auto b = rng.poly(n, 5, 0, 6);
        EXPECT_EQ(truncate(truncate(a, k), k), truncate(a, k));
        EXPECT_EQ(truncate(a * b, k), truncate(truncate(a, k) * truncate(b, k), k));
        EXPECT_EQ(mul_truncated(a, b, k), truncate(a * b, k));
    }
}

TEST(Substitute, SquareOfShiftedVariable)
{
    const auto t = x(1, 1);
    const std::vector<LaurentPoly> phi{t + t.pow(2)};
    const Dense a{Scalar(0), Scalar(1), Scalar(1)};
    EXPECT_EQ(substitute(t.pow(2), phi, TruncationOrder(3)), from_dense(dense_mul(a, a, 4)));
}

TEST(Substitute, CoordinateAndIdentity)
{
    const auto t = x(1, 1);
    const std::vector<LaurentPoly> phi{t + t.pow(2) + t.pow(3) + t.pow(4)};
    EXPECT_EQ(substitute(t, phi, TruncationOrder(4)), phi[0]);
    const std::vector<LaurentPoly> id{x(2, 1), x(2, 2)};
    EXPECT_EQ(substitute(x(2, 1), id, TruncationOrder(3)), x(2, 1));
}

TEST(Substitute, Preconditions)
{
    const std::vector<LaurentPoly> bad{x(1, 1) + c(1, 1)};
    EXPECT_THROW(substitute(x(1, 1), bad, TruncationOrder(3)), precondition_violation);
    const std::vector<LaurentPoly> short_tuple{x(2, 1)};
    EXPECT_THROW(substitute(x(2, 1), short_tuple, TruncationOrder(3)), dimension_mismatch);
}

TEST(Substitute, Associative)
{
    Random rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        const TruncationOrder k(rng.uniform(1, 5));
        std::vector<LaurentPoly> phi, psi;
        for (std::size_t i = 0; i < n; ++i) {
            phi.push_back(rng.poly(n, 3, 1, 4));
            psi.push_back(rng.poly(n, 3, 1, 4));
        }
        const auto g = rng.poly(n, 4, 0, 4);
        std::vector<LaurentPoly> phi_psi;
        for (const auto &p : phi) {
            phi_psi.push_back(substitute(p, psi, k));
        }
        EXPECT_EQ(substitute(substitute(g, phi, k), psi, k), substitute(g, phi_psi, k));
    }
}

TEST(PartialDerivative, PowerRule)
{
    EXPECT_EQ(partial_derivative(mono({0, 0, -1}), 2), mono({0, 0, -2}, -1));
    EXPECT_TRUE(partial_derivative(x(2, 2).pow(2), 0).is_zero());
    EXPECT_EQ(partial_derivative(mono({0, 2, 1}), 1), mono({0, 1, 1}, 2));
    EXPECT_THROW(partial_derivative(x(2, 1), 2), precondition_violation);
}

TEST(PartialDerivative, Commute)
{
    Random rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 4));
        const auto a = rng.poly(n, 6, 0, 5, true);
        const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(n) - 1));
        const auto j = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(n) - 1));
        EXPECT_EQ(partial_derivative(partial_derivative(a, i), j), partial_derivative(partial_derivative(a, j), i));
    }
}

TEST(LaurentPoly, RingAxioms)
{
    Random rng(51);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        const auto a = rng.poly(n, 4, 0, 3, true);
        const auto b = rng.poly(n, 4, 0, 3, true);
        const auto e = rng.poly(n, 4, 0, 3, true);
        EXPECT_EQ((a * b) * e, a * (b * e));
        EXPECT_EQ(a * (b + e), a * b + a * e);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ((a + b) + e, a + (b + e));
    }
}

TEST(LaurentPoly, ExactDivision)
{
    Random rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 3));
        const auto a = rng.poly(n, 3, 0, 3);
        const auto b = rng.poly(n, 3, 0, 3);
        if (b.is_zero()) {
            continue;
        }
        EXPECT_EQ(exact_divide(a * b, b), a);
    }
    EXPECT_THROW(exact_divide(x(2, 1), x(2, 2)), precondition_violation);
}

TEST(LaurentPoly, TextForm)
{
    const auto p = mono({2, 0, -1}, 3, 2) + Scalar::imag_unit() * x(3, 2);
    EXPECT_EQ(to_string(p), "3/2*x1^2*x3^-1 + i*x2");
    EXPECT_EQ(to_string(c(2, -1) + x(2, 1) - x(2, 2).pow(2)), "-1 + x1 - x2^2");
    EXPECT_EQ(to_string(LaurentPoly(2)), "0");
}

TEST(JetBasis, SizeAndOrder)
{
    // C(n+k, k) - 1 monomials
    EXPECT_EQ(jet_basis(2, TruncationOrder(3)).size(), 9u);
    EXPECT_EQ(jet_basis(3, TruncationOrder(4)).size(), 34u);
    const auto b = jet_basis(2, TruncationOrder(2));
    const std::vector<Exponents> expected{{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
    EXPECT_EQ(b, expected);
}

TEST(Matrix, InverseAndRank)
{
    const auto m = Matrix::from_rows({{Scalar(1), Scalar(2)}, {Scalar(3), Scalar(4)}});
    EXPECT_EQ(m * m.inverse(), Matrix::identity(2));
    EXPECT_EQ(m.rank(), 2u);
    const auto s = Matrix::from_rows({{Scalar(1), Scalar(2)}, {Scalar(2), Scalar(4)}});
    EXPECT_EQ(s.rank(), 1u);
    EXPECT_THROW(s.inverse(), precondition_violation);
}

TEST(Matrix, CharacteristicPolynomialCayleyHamilton)
{
    Random rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 5));
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (rng.uniform(0, 2) != 0) {
                    m(i, j) = rng.scalar();
                }
            }
        }
        const UPoly p = characteristic_polynomial(m);
        EXPECT_EQ(p.degree(), static_cast<int>(n));
        EXPECT_TRUE(p.evaluate(m).is_zero());
    }
}

TEST(Matrix, ExpLogInverse)
{
    Random rng(81);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = static_cast<std::size_t>(rng.uniform(1, 5));
        Matrix nil(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                nil(i, j) = rng.scalar();
            }
        }
        EXPECT_TRUE(nil.is_nilpotent());
        const Matrix u = exp_nilpotent(nil);
        EXPECT_TRUE(u.is_unipotent());
        EXPECT_EQ(log_unipotent(u), nil);
    }
}
