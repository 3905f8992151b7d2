#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "fgerm/error.hpp"
#include "fgerm/scalar.hpp"

namespace fgerm
{

/// Dense row-major matrix over Q(i).
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = Scalar(1);
        }
        return m;
    }
    static Matrix from_rows(const std::vector<std::vector<Scalar>> &rows)
    {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.front().size();
        Matrix m(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) {
                throw dimension_mismatch("ragged matrix rows");
            }
            for (std::size_t j = 0; j < c; ++j) {
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    std::size_t rows() const noexcept
    {
        return rows_;
    }
    std::size_t cols() const noexcept
    {
        return cols_;
    }
    bool is_square() const noexcept
    {
        return rows_ == cols_;
    }
    Scalar &operator()(std::size_t i, std::size_t j)
    {
        return data_[i * cols_ + j];
    }
    const Scalar &operator()(std::size_t i, std::size_t j) const
    {
        return data_[i * cols_ + j];
    }
    bool is_zero() const
    {
        for (const auto &s : data_) {
            if (!s.is_zero()) {
                return false;
            }
        }
        return true;
    }

    Matrix &operator+=(const Matrix &o)
    {
        check_same(o);
        for (std::size_t t = 0; t < data_.size(); ++t) {
            data_[t] += o.data_[t];
        }
        return *this;
    }
    Matrix &operator-=(const Matrix &o)
    {
        check_same(o);
        for (std::size_t t = 0; t < data_.size(); ++t) {
            data_[t] -= o.data_[t];
        }
        return *this;
    }
    Matrix &operator*=(const Scalar &s)
    {
        for (auto &v : data_) {
            v *= s;
        }
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix &b)
    {
        return a += b;
    }
    friend Matrix operator-(Matrix a, const Matrix &b)
    {
        return a -= b;
    }
    friend Matrix operator*(Matrix a, const Scalar &s)
    {
        return a *= s;
    }
    friend Matrix operator*(const Matrix &a, const Matrix &b)
    {
        if (a.cols_ != b.rows_) {
            throw dimension_mismatch("matrix product shape mismatch");
        }
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t t = 0; t < a.cols_; ++t) {
                const Scalar &x = a(i, t);
                if (x.is_zero()) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const Scalar &y = b(t, j);
                    if (!y.is_zero()) {
                        r(i, j) += x * y;
                    }
                }
            }
        }
        return r;
    }
    friend bool operator==(const Matrix &a, const Matrix &b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix &a, const Matrix &b)
    {
        return !(a == b);
    }

    Matrix pow(unsigned e) const
    {
        require_square();
        Matrix result = identity(rows_);
        Matrix base = *this;
        while (e != 0) {
            if (e & 1u) {
                result = result * base;
            }
            e >>= 1;
            if (e != 0) {
                base = base * base;
            }
        }
        return result;
    }

    /// Inverse by Gauss-Jordan elimination; throws on a singular matrix.
    Matrix inverse() const
    {
        require_square();
        const std::size_t n = rows_;
        Matrix a = *this;
        Matrix inv = identity(n);
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            while (p < n && a(p, c).is_zero()) {
                ++p;
            }
            if (p == n) {
                throw precondition_violation("singular matrix");
            }
            if (p != c) {
                a.swap_rows(p, c);
                inv.swap_rows(p, c);
            }
            const Scalar piv = a(c, c).inverse();
            a.scale_row(c, piv);
            inv.scale_row(c, piv);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c || a(r, c).is_zero()) {
                    continue;
                }
                const Scalar f = a(r, c);
                a.axpy_row(r, c, -f);
                inv.axpy_row(r, c, -f);
            }
        }
        return inv;
    }

    std::size_t rank() const
    {
        Matrix a = *this;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && a(p, c).is_zero()) {
                ++p;
            }
            if (p == rows_) {
                continue;
            }
            a.swap_rows(p, r);
            const Scalar inv = a(r, c).inverse();
            a.scale_row(r, inv);
            for (std::size_t i = r + 1; i < rows_; ++i) {
                if (!a(i, c).is_zero()) {
                    const Scalar f = a(i, c);
                    a.axpy_row(i, r, -f);
                }
            }
            ++r;
        }
        return r;
    }

    /// True iff (M - Id)^size == 0.
    bool is_unipotent() const
    {
        require_square();
        return (*this - identity(rows_)).is_nilpotent();
    }
    bool is_nilpotent() const
    {
        require_square();
        return pow(static_cast<unsigned>(rows_)).is_zero();
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        for (std::size_t j = 0; j < cols_; ++j) {
            std::swap((*this)(a, j), (*this)(b, j));
        }
    }
    void scale_row(std::size_t r, const Scalar &s)
    {
        for (std::size_t j = 0; j < cols_; ++j) {
            (*this)(r, j) *= s;
        }
    }
    /// row[dst] += f * row[src]
    void axpy_row(std::size_t dst, std::size_t src, const Scalar &f)
    {
        for (std::size_t j = 0; j < cols_; ++j) {
            if (!(*this)(src, j).is_zero()) {
                (*this)(dst, j) += f * (*this)(src, j);
            }
        }
    }

private:
    void check_same(const Matrix &o) const
    {
        if (o.rows_ != rows_ || o.cols_ != cols_) {
            throw dimension_mismatch("matrix shape mismatch");
        }
    }
    void require_square() const
    {
        if (!is_square()) {
            throw dimension_mismatch("square matrix required");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

inline Matrix commutator(const Matrix &a, const Matrix &b)
{
    return a * b - b * a;
}

/// exp(N) for nilpotent N, as the finite sum of N^j / j!.
inline Matrix exp_nilpotent(const Matrix &n)
{
    if (!n.is_nilpotent()) {
        throw precondition_violation("matrix exponential needs a nilpotent matrix");
    }
    Matrix result = Matrix::identity(n.rows());
    Matrix term = Matrix::identity(n.rows());
    for (unsigned j = 1; j <= n.rows(); ++j) {
        term = term * n;
        if (term.is_zero()) {
            break;
        }
        result += term * inverse_factorial(j);
    }
    return result;
}

/// log(U) for unipotent U, as the finite sum of (-1)^{j+1} (U - Id)^j / j.
inline Matrix log_unipotent(const Matrix &u)
{
    if (!u.is_unipotent()) {
        throw precondition_violation("matrix logarithm needs a unipotent matrix");
    }
    const Matrix n = u - Matrix::identity(u.rows());
    Matrix result(u.rows(), u.cols());
    Matrix term = Matrix::identity(u.rows());
    for (unsigned j = 1; j <= u.rows(); ++j) {
        term = term * n;
        if (term.is_zero()) {
            break;
        }
        const Scalar c = Scalar::rational(j % 2 == 1 ? 1 : -1, static_cast<long>(j));
        result += term * c;
    }
    return result;
}

/// Univariate polynomial over Q(i); coefficient t multiplies z^t. No trailing
/// zero coefficients.
class UPoly
{
public:
    UPoly() = default;
    explicit UPoly(std::vector<Scalar> c) : c_(std::move(c))
    {
        trim();
    }

    const std::vector<Scalar> &coeffs() const noexcept
    {
        return c_;
    }
    bool is_zero() const noexcept
    {
        return c_.empty();
    }
    /// Degree; -1 for the zero polynomial.
    int degree() const noexcept
    {
        return static_cast<int>(c_.size()) - 1;
    }
    const Scalar &lead() const
    {
        return c_.back();
    }
    Scalar coeff(std::size_t t) const
    {
        return t < c_.size() ? c_[t] : Scalar(0);
    }

    friend UPoly operator+(const UPoly &a, const UPoly &b)
    {
        std::vector<Scalar> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t t = 0; t < r.size(); ++t) {
            r[t] = a.coeff(t) + b.coeff(t);
        }
        return UPoly(std::move(r));
    }
    friend UPoly operator-(const UPoly &a, const UPoly &b)
    {
        std::vector<Scalar> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t t = 0; t < r.size(); ++t) {
            r[t] = a.coeff(t) - b.coeff(t);
        }
        return UPoly(std::move(r));
    }
    friend UPoly operator*(const UPoly &a, const UPoly &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return {};
        }
        std::vector<Scalar> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                r[i + j] += a.c_[i] * b.c_[j];
            }
        }
        return UPoly(std::move(r));
    }
    friend bool operator==(const UPoly &a, const UPoly &b)
    {
        return a.c_ == b.c_;
    }

    UPoly derivative() const
    {
        std::vector<Scalar> r;
        for (std::size_t t = 1; t < c_.size(); ++t) {
            r.push_back(c_[t] * Scalar(static_cast<long>(t)));
        }
        return UPoly(std::move(r));
    }
    UPoly monic() const
    {
        if (is_zero()) {
            return {};
        }
        const Scalar inv = lead().inverse();
        std::vector<Scalar> r(c_);
        for (auto &v : r) {
            v *= inv;
        }
        return UPoly(std::move(r));
    }

    /// Quotient and remainder.
    std::pair<UPoly, UPoly> divmod(const UPoly &d) const
    {
        if (d.is_zero()) {
            throw precondition_violation("polynomial division by zero");
        }
        std::vector<Scalar> rem(c_);
        const int dd = d.degree();
        std::vector<Scalar> q(std::max(0, degree() - dd + 1));
        const Scalar inv = d.lead().inverse();
        for (int t = degree(); t >= dd; --t) {
            const Scalar f = rem[static_cast<std::size_t>(t)] * inv;
            if (f.is_zero()) {
                continue;
            }
            q[static_cast<std::size_t>(t - dd)] = f;
            for (int s = 0; s <= dd; ++s) {
                rem[static_cast<std::size_t>(t - dd + s)] -= f * d.c_[static_cast<std::size_t>(s)];
            }
        }
        return {UPoly(std::move(q)), UPoly(std::move(rem))};
    }

    /// p(M) by Horner's scheme.
    Matrix evaluate(const Matrix &m) const
    {
        Matrix r(m.rows(), m.cols());
        const Matrix id = Matrix::identity(m.rows());
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
            r = r * m + id * *it;
        }
        return r;
    }

private:
    void trim()
    {
        while (!c_.empty() && c_.back().is_zero()) {
            c_.pop_back();
        }
    }
    std::vector<Scalar> c_;
};

/// Monic gcd.
inline UPoly gcd(UPoly a, UPoly b)
{
    while (!b.is_zero()) {
        auto r = a.divmod(b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// p / gcd(p, p'): same roots, each simple.
inline UPoly squarefree_part(const UPoly &p)
{
    if (p.degree() <= 0) {
        return p.monic();
    }
    return p.divmod(gcd(p, p.derivative())).first.monic();
}

/// Characteristic polynomial det(z Id - M) via reduction to upper
/// Hessenberg form and the standard recurrence on leading principal minors.
inline UPoly characteristic_polynomial(const Matrix &m)
{
    if (!m.is_square()) {
        throw dimension_mismatch("characteristic polynomial of a non-square matrix");
    }
    const std::size_t n = m.rows();
    Matrix h = m;
    // similarity transform to Hessenberg form
    for (std::size_t c = 0; c + 2 <= n; ++c) {
        std::size_t p = c + 1;
        while (p < n && h(p, c).is_zero()) {
            ++p;
        }
        if (p == n) {
            continue;
        }
        if (p != c + 1) {
            h.swap_rows(p, c + 1);
            for (std::size_t i = 0; i < n; ++i) {
                std::swap(h(i, p), h(i, c + 1));
            }
        }
        const Scalar inv = h(c + 1, c).inverse();
        for (std::size_t r = c + 2; r < n; ++r) {
            if (h(r, c).is_zero()) {
                continue;
            }
            const Scalar f = h(r, c) * inv;
            // row_r -= f * row_{c+1}; col_{c+1} += f * col_r
            for (std::size_t j = 0; j < n; ++j) {
                if (!h(c + 1, j).is_zero()) {
                    h(r, j) -= f * h(c + 1, j);
                }
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (!h(i, r).is_zero()) {
                    h(i, c + 1) += f * h(i, r);
                }
            }
        }
    }
    std::vector<UPoly> p(n + 1);
    p[0] = UPoly({Scalar(1)});
    for (std::size_t k = 1; k <= n; ++k) {
        const UPoly lin({-h(k - 1, k - 1), Scalar(1)});
        UPoly acc = lin * p[k - 1];
        Scalar prod(1);
        for (std::size_t i = 1; i < k; ++i) {
            prod *= h(k - i, k - i - 1);
            if (prod.is_zero()) {
                break;
            }
            const Scalar c = prod * h(k - i - 1, k - 1);
            if (!c.is_zero()) {
                acc = acc - UPoly({c}) * p[k - i - 1];
            }
        }
        p[k] = std::move(acc);
    }
    return p[n];
}

inline std::string to_string(const Matrix &m)
{
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out += (j == 0 ? "" : " ") + to_string(m(i, j));
        }
        out += "\n";
    }
    return out;
}

inline std::ostream &operator<<(std::ostream &os, const Matrix &m)
{
    return os << to_string(m);
}

} // namespace fgerm
