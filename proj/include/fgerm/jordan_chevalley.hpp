#pragma once

#include <utility>

#include "fgerm/diffeo.hpp"
#include "fgerm/error.hpp"
#include "fgerm/matrix.hpp"

namespace fgerm
{

/// Multiplicative Jordan-Chevalley parts: M = s u = u s with s semisimple and
/// u unipotent.
struct JordanChevalley {
    Matrix s;
    Matrix u;
};

/// Semisimple part of any square matrix: Newton's iteration
/// s <- s - p(s) p'(s)^{-1} on the squarefree part p of the characteristic
/// polynomial. Stays in the ground field.
inline Matrix semisimple_part(const Matrix &m)
{
    if (!m.is_square()) {
        throw precondition_violation("semisimple part of a non-square matrix");
    }
    const UPoly p = squarefree_part(characteristic_polynomial(m));
    const UPoly dp = p.derivative();
    Matrix s = m;
    // quadratic convergence: the nilpotent error dies after log2(size)+1 steps
    for (std::size_t step = 0; step <= m.rows() + 1; ++step) {
        const Matrix ps = p.evaluate(s);
        if (ps.is_zero()) {
            return s;
        }
        s = s - ps * dp.evaluate(s).inverse();
    }
    throw precondition_violation("semisimple part did not converge");
}

inline JordanChevalley jordan_chevalley(const Matrix &m)
{
    if (!m.is_square()) {
        throw precondition_violation("Jordan-Chevalley decomposition of a non-square matrix");
    }
    if (m.rank() != m.rows()) {
        throw precondition_violation("Jordan-Chevalley decomposition needs an invertible matrix");
    }
    Matrix s = semisimple_part(m);
    Matrix u = s.inverse() * m;
    return {std::move(s), std::move(u)};
}

inline JordanChevalley jordan_chevalley(const JetMatrix &j)
{
    return jordan_chevalley(j.matrix);
}

/// Minimal polynomial of s is squarefree iff the squarefree part of its
/// characteristic polynomial annihilates it.
inline bool is_semisimple(const Matrix &s)
{
    return squarefree_part(characteristic_polynomial(s)).evaluate(s).is_zero();
}

} // namespace fgerm
