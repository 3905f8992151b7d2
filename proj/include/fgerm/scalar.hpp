#pragma once

#include <gmpxx.h>

#include <ostream>
#include <string>
#include <utility>

#include "fgerm/error.hpp"

namespace fgerm
{

/// Exact element of the Gaussian rationals Q(i).
///
/// Both parts are kept canonical by GMP (reduced, positive denominator), so
/// structural equality is value equality.
class Scalar
{
public:
    Scalar() = default;
    Scalar(long v) : re_(v) {}
    Scalar(int v) : re_(v) {}
    explicit Scalar(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im)) {}

    static Scalar rational(long num, long den)
    {
        if (den == 0) {
            throw precondition_violation("zero denominator in rational literal");
        }
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar(q);
    }
    static Scalar imag_unit()
    {
        return Scalar(mpq_class(0), mpq_class(1));
    }

    const mpq_class &re() const noexcept
    {
        return re_;
    }
    const mpq_class &im() const noexcept
    {
        return im_;
    }
    bool is_zero() const noexcept
    {
        return sgn(re_) == 0 && sgn(im_) == 0;
    }
    bool is_real() const noexcept
    {
        return sgn(im_) == 0;
    }
    bool is_one() const noexcept
    {
        return sgn(im_) == 0 && re_ == 1;
    }

    Scalar conj() const
    {
        return Scalar(re_, -im_);
    }
    /// |z|^2, a non-negative rational.
    mpq_class norm() const
    {
        return re_ * re_ + im_ * im_;
    }

    Scalar operator-() const
    {
        return Scalar(-re_, -im_);
    }
    Scalar &operator+=(const Scalar &o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Scalar &operator-=(const Scalar &o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Scalar &operator*=(const Scalar &o)
    {
        if (o.is_real()) {
            if (is_real()) {
                re_ *= o.re_;
            } else {
                re_ *= o.re_;
                im_ *= o.re_;
            }
            return *this;
        }
        if (is_real()) {
            im_ = re_ * o.im_;
            re_ *= o.re_;
            return *this;
        }
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    Scalar &operator/=(const Scalar &o)
    {
        if (o.is_zero()) {
            throw precondition_violation("division by zero scalar");
        }
        if (o.is_real()) {
            re_ /= o.re_;
            im_ /= o.re_;
            return *this;
        }
        const mpq_class n = o.norm();
        *this *= o.conj();
        re_ /= n;
        im_ /= n;
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar &b)
    {
        return a += b;
    }
    friend Scalar operator-(Scalar a, const Scalar &b)
    {
        return a -= b;
    }
    friend Scalar operator*(Scalar a, const Scalar &b)
    {
        return a *= b;
    }
    friend Scalar operator/(Scalar a, const Scalar &b)
    {
        return a /= b;
    }
    friend bool operator==(const Scalar &a, const Scalar &b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar &a, const Scalar &b)
    {
        return !(a == b);
    }

    Scalar inverse() const
    {
        return Scalar(1) / *this;
    }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

/// Canonical text: `3/2`, `-i`, `1/2*i`, `1+2*i`. Re-parses to the same value.
inline std::string to_string(const Scalar &s)
{
    const bool has_re = sgn(s.re()) != 0;
    const bool has_im = sgn(s.im()) != 0;
    if (!has_im) {
        return s.re().get_str();
    }
    std::string out;
    if (has_re) {
        out = s.re().get_str();
    }
    mpq_class im = s.im();
    if (sgn(im) < 0) {
        out += "-";
        im = -im;
    } else if (has_re) {
        out += "+";
    }
    if (im == 1) {
        out += "i";
    } else {
        out += im.get_str() + "*i";
    }
    return out;
}

inline std::ostream &operator<<(std::ostream &os, const Scalar &s)
{
    return os << to_string(s);
}

/// 1/j! as an exact scalar.
inline Scalar inverse_factorial(unsigned j)
{
    mpz_class f = 1;
    for (unsigned t = 2; t <= j; ++t) {
        f *= t;
    }
    return Scalar(mpq_class(mpz_class(1), f));
}

} // namespace fgerm
