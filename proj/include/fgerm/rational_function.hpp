#pragma once

#include <string>
#include <utility>

#include "fgerm/error.hpp"
#include "fgerm/laurent_poly.hpp"
#include "fgerm/vector_field.hpp"

namespace fgerm
{

/// num / den with Laurent polynomial parts. Not reduced; equality is by
/// cross-multiplication.
class RationalFunction
{
public:
    explicit RationalFunction(LaurentPoly num) : num_(std::move(num)), den_(LaurentPoly::constant(num_.dim(), 1)) {}
    RationalFunction(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den))
    {
        if (den_.is_zero()) {
            throw precondition_violation("rational function with zero denominator");
        }
        if (num_.dim() != den_.dim()) {
            throw dimension_mismatch("numerator and denominator in different rings");
        }
        if (num_.is_zero()) {
            den_ = LaurentPoly::constant(num_.dim(), 1);
        } else if (den_.is_monomial()) {
            // cheap normalization keeps monomial denominators out of the way
            num_ *= den_.pow(-1);
            den_ = LaurentPoly::constant(num_.dim(), 1);
        }
    }

    const LaurentPoly &num() const noexcept
    {
        return num_;
    }
    const LaurentPoly &den() const noexcept
    {
        return den_;
    }
    std::size_t dim() const noexcept
    {
        return num_.dim();
    }
    bool is_zero() const noexcept
    {
        return num_.is_zero();
    }

    friend RationalFunction operator+(const RationalFunction &a, const RationalFunction &b)
    {
        if (a.den_ == b.den_) {
            return RationalFunction(a.num_ + b.num_, a.den_);
        }
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction &a)
    {
        return RationalFunction(-a.num_, a.den_);
    }
    friend RationalFunction operator-(const RationalFunction &a, const RationalFunction &b)
    {
        return a + (-b);
    }
    friend RationalFunction operator*(const RationalFunction &a, const RationalFunction &b)
    {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction &a, const RationalFunction &b)
    {
        if (b.is_zero()) {
            throw precondition_violation("division by the zero rational function");
        }
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend bool operator==(const RationalFunction &a, const RationalFunction &b)
    {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }
    friend bool operator!=(const RationalFunction &a, const RationalFunction &b)
    {
        return !(a == b);
    }

private:
    LaurentPoly num_;
    LaurentPoly den_;
};

/// X(f) by the quotient rule.
inline RationalFunction apply(const VectorField &x, const RationalFunction &f)
{
    return RationalFunction(apply(x, f.num()) * f.den() - f.num() * apply(x, f.den()), f.den() * f.den());
}

inline std::string to_string(const RationalFunction &f)
{
    if (f.den().is_constant()) {
        return to_string(f.num() * f.den().constant_term().inverse());
    }
    return "(" + to_string(f.num()) + ")/(" + to_string(f.den()) + ")";
}

} // namespace fgerm
