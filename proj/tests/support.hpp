#pragma once

// Shared helpers for the test suites: shorthand constructors and seeded
// random instances.

#include <cstdint>
#include <random>
#include <vector>

#include "fgerm/diffeo.hpp"
#include "fgerm/laurent_poly.hpp"
#include "fgerm/vector_field.hpp"

namespace fgerm::testing
{

/// x_i with a one-based index.
inline LaurentPoly x(std::size_t n, std::size_t i)
{
    return LaurentPoly::variable(n, i - 1);
}

inline LaurentPoly c(std::size_t n, long num, long den = 1)
{
    return LaurentPoly::constant(n, Scalar::rational(num, den));
}

inline LaurentPoly mono(std::initializer_list<int> e, long num = 1, long den = 1)
{
    return LaurentPoly::monomial(Exponents(e), Scalar::rational(num, den));
}

/// a * d/dx_i with a one-based index.
inline VectorField d(std::size_t i, LaurentPoly a)
{
    return VectorField::along(i - 1, std::move(a));
}

class Random
{
public:
    explicit Random(std::uint64_t seed) : gen_(seed) {}

    int uniform(int lo, int hi)
    {
        return std::uniform_int_distribution<int>(lo, hi)(gen_);
    }
    bool coin()
    {
        return uniform(0, 1) == 1;
    }

    /// Small Gaussian rational, nonzero.
    Scalar scalar(bool gaussian = true)
    {
        while (true) {
            Scalar s = Scalar::rational(uniform(-5, 5), uniform(1, 3));
            if (gaussian && uniform(0, 3) == 0) {
                s += Scalar::rational(uniform(-2, 2), uniform(1, 2)) * Scalar::imag_unit();
            }
            if (!s.is_zero()) {
                return s;
            }
        }
    }

    Exponents exponents(std::size_t n, int min_deg, int max_deg, bool laurent = false)
    {
        while (true) {
            Exponents e(n, 0);
            const int d = uniform(min_deg, max_deg);
            for (int t = 0; t < d; ++t) {
                e[static_cast<std::size_t>(uniform(0, static_cast<int>(n) - 1))] += 1;
            }
            if (laurent && uniform(0, 2) == 0) {
                e[static_cast<std::size_t>(uniform(0, static_cast<int>(n) - 1))] -= uniform(1, 2);
            }
            if (total_degree(e) >= min_deg || laurent) {
                return e;
            }
        }
    }

    LaurentPoly poly(std::size_t n, int terms, int min_deg, int max_deg, bool laurent = false)
    {
        LaurentPoly p(n);
        for (int t = 0; t < terms; ++t) {
            p.add_term(exponents(n, min_deg, max_deg, laurent), scalar());
        }
        return p;
    }

    VectorField field(std::size_t n, int terms, int min_deg, int max_deg, bool laurent = false)
    {
        std::vector<LaurentPoly> cs;
        for (std::size_t i = 0; i < n; ++i) {
            cs.push_back(poly(n, terms, min_deg, max_deg, laurent));
        }
        return VectorField(std::move(cs));
    }

    /// Polynomial field with strictly upper-triangular linear part, so it is
    /// nilpotent.
    VectorField nilpotent_field(std::size_t n, int terms, int max_deg)
    {
        VectorField f = field(n, terms, 2, max_deg);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (coin()) {
                    f[i] += LaurentPoly::variable(n, j) * scalar(false);
                }
            }
        }
        return f;
    }

    FormalDiffeo diffeo(std::size_t n, TruncationOrder k, bool unipotent = false)
    {
        while (true) {
            std::vector<LaurentPoly> cs;
            for (std::size_t i = 0; i < n; ++i) {
                LaurentPoly p = k.value() >= 2 ? poly(n, 3, 2, k.value()) : LaurentPoly(n);
                for (std::size_t j = 0; j < n; ++j) {
                    if (unipotent) {
                        if (j == i) {
                            p += LaurentPoly::variable(n, j);
                        } else if (j > i && coin()) {
                            p += LaurentPoly::variable(n, j) * scalar(false);
                        }
                    } else if (j == i || coin()) {
                        p += LaurentPoly::variable(n, j) * scalar();
                    }
                }
                cs.push_back(truncate(p, k));
            }
            try {
                return FormalDiffeo(std::move(cs), k);
            } catch (const precondition_violation &) {
                // singular linear part; draw again
            }
        }
    }

    std::mt19937_64 &engine()
    {
        return gen_;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace fgerm::testing
