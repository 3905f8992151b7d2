#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fgerm/error.hpp"
#include "fgerm/laurent_poly.hpp"
#include "fgerm/matrix.hpp"
#include "fgerm/vector_field.hpp"

namespace fgerm
{

/// k-jet of a formal diffeomorphism (phi_1, ..., phi_n) of (C^n, 0).
///
/// Components lie in m, carry no term of degree > order, and the linear
/// part is invertible.
class FormalDiffeo
{
public:
    FormalDiffeo(std::vector<LaurentPoly> components, TruncationOrder order)
        : order_(order), components_(std::move(components))
    {
        if (components_.empty()) {
            throw precondition_violation("diffeomorphism dimension must be positive");
        }
        for (auto &c : components_) {
            if (c.dim() != components_.size()) {
                throw dimension_mismatch("diffeomorphism component in a ring of the wrong dimension");
            }
            if (!c.in_maximal_ideal()) {
                throw precondition_violation("diffeomorphism components need zero constant term and no negative "
                                             "exponents");
            }
            c = truncate(c, order_);
        }
        if (linear_part().rank() != components_.size()) {
            throw precondition_violation("diffeomorphism has a singular linear part");
        }
    }

    static FormalDiffeo identity(std::size_t dim, TruncationOrder order)
    {
        std::vector<LaurentPoly> c;
        for (std::size_t i = 0; i < dim; ++i) {
            c.push_back(LaurentPoly::variable(dim, i));
        }
        return FormalDiffeo(std::move(c), order);
    }
    /// x -> A x
    static FormalDiffeo linear(const Matrix &a, TruncationOrder order)
    {
        const std::size_t n = a.rows();
        std::vector<LaurentPoly> c(n, LaurentPoly(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                c[i] += LaurentPoly::variable(n, j) * a(i, j);
            }
        }
        return FormalDiffeo(std::move(c), order);
    }

    std::size_t dim() const noexcept
    {
        return components_.size();
    }
    TruncationOrder order() const noexcept
    {
        return order_;
    }
    const std::vector<LaurentPoly> &components() const noexcept
    {
        return components_;
    }
    const LaurentPoly &operator[](std::size_t i) const
    {
        return components_.at(i);
    }

    /// Matrix A of the degree-one jet: phi(x) = A x + O(|x|^2).
    Matrix linear_part() const
    {
        const std::size_t n = dim();
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Exponents e(n, 0);
                e[j] = 1;
                a(i, j) = components_[i].coeff(e);
            }
        }
        return a;
    }
    bool is_unipotent() const
    {
        return linear_part().is_unipotent();
    }
    bool is_identity() const
    {
        return *this == identity(dim(), order_);
    }
    /// Same germ at a lower jet order.
    FormalDiffeo truncated(TruncationOrder k) const
    {
        return FormalDiffeo(components_, k);
    }

    friend bool operator==(const FormalDiffeo &a, const FormalDiffeo &b)
    {
        return a.order_ == b.order_ && a.components_ == b.components_;
    }
    friend bool operator!=(const FormalDiffeo &a, const FormalDiffeo &b)
    {
        return !(a == b);
    }

private:
    TruncationOrder order_;
    std::vector<LaurentPoly> components_;
};

namespace detail
{
inline void check_compatible(const FormalDiffeo &a, const FormalDiffeo &b)
{
    if (a.dim() != b.dim() || a.order() != b.order()) {
        throw dimension_mismatch("diffeomorphisms differ in dimension or jet order");
    }
}
} // namespace detail

/// phi o psi: component i is phi_i(psi_1, ..., psi_n).
inline FormalDiffeo compose(const FormalDiffeo &phi, const FormalDiffeo &psi)
{
    detail::check_compatible(phi, psi);
    std::vector<LaurentPoly> c;
    c.reserve(phi.dim());
    for (const auto &p : phi.components()) {
        c.push_back(substitute(p, psi.components(), phi.order()));
    }
    return FormalDiffeo(std::move(c), phi.order());
}

/// Compositional inverse, one degree per fixed-point step:
/// psi <- A^{-1} (x - N(psi)) where phi = A x + N(x).
inline FormalDiffeo invert(const FormalDiffeo &phi)
{
    const std::size_t n = phi.dim();
    const TruncationOrder k = phi.order();
    const Matrix a = phi.linear_part();
    const Matrix ainv = a.inverse();

    std::vector<LaurentPoly> nonlinear;
    for (std::size_t i = 0; i < n; ++i) {
        LaurentPoly p = phi[i];
        for (std::size_t j = 0; j < n; ++j) {
            p -= LaurentPoly::variable(n, j) * a(i, j);
        }
        nonlinear.push_back(std::move(p));
    }

    auto apply_matrix = [&](const Matrix &m, const std::vector<LaurentPoly> &v) {
        std::vector<LaurentPoly> r(n, LaurentPoly(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (!m(i, j).is_zero()) {
                    r[i] += v[j] * m(i, j);
                }
            }
        }
        return r;
    };

    std::vector<LaurentPoly> x;
    for (std::size_t i = 0; i < n; ++i) {
        x.push_back(LaurentPoly::variable(n, i));
    }
    std::vector<LaurentPoly> psi = apply_matrix(ainv, x);
    for (int step = 1; step < k.value(); ++step) {
        std::vector<LaurentPoly> rhs = x;
        for (std::size_t i = 0; i < n; ++i) {
            rhs[i] -= substitute(nonlinear[i], psi, k);
        }
        psi = apply_matrix(ainv, rhs);
    }
    return FormalDiffeo(std::move(psi), k);
}

/// a o b o a^{-1} o b^{-1}
inline FormalDiffeo group_commutator(const FormalDiffeo &a, const FormalDiffeo &b)
{
    detail::check_compatible(a, b);
    return compose(compose(a, b), compose(invert(a), invert(b)));
}

/// exp(tX) for a formal nilpotent field: component i is
/// sum_j t^j/j! X^j(x_i) mod m^{k+1}. The sum is finite.
inline FormalDiffeo exp_field(const VectorField &x, const Scalar &t, TruncationOrder k)
{
    if (!x.is_formal()) {
        throw precondition_violation("exponential of a non-formal vector field");
    }
    if (!is_nilpotent_field(x)) {
        throw precondition_violation("exponential needs a nilpotent linear part");
    }
    const std::size_t n = x.dim();
    const VectorField xt = truncate(x, k);
    // X acts nilpotently on m/m^{k+1}, whose dimension bounds the iteration count
    const std::size_t max_steps = jet_basis(n, k).size() + 1;
    std::vector<LaurentPoly> c;
    for (std::size_t i = 0; i < n; ++i) {
        LaurentPoly term = LaurentPoly::variable(n, i);
        LaurentPoly sum = term;
        Scalar tj(1);
        for (std::size_t j = 1; j <= max_steps; ++j) {
            term = apply(xt, term, k);
            if (term.is_zero()) {
                break;
            }
            tj *= t;
            sum += term * (tj * inverse_factorial(static_cast<unsigned>(j)));
        }
        c.push_back(std::move(sum));
    }
    return FormalDiffeo(std::move(c), k);
}

/// Infinitesimal generator of a unipotent diffeomorphism, truncated at its
/// jet order.
///
/// Applies log(phi_k) = sum_j (-1)^{j+1} (phi_k - Id)^j / j to each
/// coordinate x_i, where phi_k(g) = g o phi is the jet action; the result is
/// column x_i of the jet-matrix logarithm.
inline VectorField log_diffeo(const FormalDiffeo &phi)
{
    if (!phi.is_unipotent()) {
        throw precondition_violation("logarithm needs a unipotent diffeomorphism");
    }
    const std::size_t n = phi.dim();
    const TruncationOrder k = phi.order();
    const std::size_t max_steps = jet_basis(n, k).size() + 1;
    std::vector<LaurentPoly> c;
    for (std::size_t i = 0; i < n; ++i) {
        LaurentPoly term = LaurentPoly::variable(n, i);
        LaurentPoly sum(n);
        for (std::size_t j = 1; j <= max_steps; ++j) {
            term = substitute(term, phi.components(), k) - term;
            if (term.is_zero()) {
                break;
            }
            sum += term * Scalar::rational(j % 2 == 1 ? 1 : -1, static_cast<long>(j));
        }
        c.push_back(std::move(sum));
    }
    return VectorField(std::move(c));
}

/// Matrix of a linear operator on m/m^{k+1} in the graded-lex monomial basis.
struct JetMatrix {
    std::size_t dim;
    TruncationOrder order;
    std::vector<Exponents> basis;
    Matrix matrix;
};

namespace detail
{
inline std::map<Exponents, std::size_t> basis_index(const std::vector<Exponents> &basis)
{
    std::map<Exponents, std::size_t> idx;
    for (std::size_t t = 0; t < basis.size(); ++t) {
        idx.emplace(basis[t], t);
    }
    return idx;
}

inline void write_column(Matrix &m, std::size_t col, const LaurentPoly &p,
                         const std::map<Exponents, std::size_t> &index)
{
    for (const auto &[e, c] : p.terms()) {
        auto it = index.find(e);
        if (it == index.end()) {
            throw precondition_violation("jet image leaves m/m^{k+1}");
        }
        m(it->second, col) = c;
    }
}
} // namespace detail

/// Jet action g -> g o phi on m/m^{k+1}; column t is the image of basis
/// monomial t.
inline JetMatrix to_jet_matrix(const FormalDiffeo &phi)
{
    const std::size_t n = phi.dim();
    const TruncationOrder k = phi.order();
    auto basis = jet_basis(n, k);
    const auto index = detail::basis_index(basis);
    Matrix m(basis.size(), basis.size());
    // image(x^e) = image(x^e / x_i) * phi_i, sharing lower-degree images
    std::vector<LaurentPoly> image;
    image.reserve(basis.size());
    for (std::size_t t = 0; t < basis.size(); ++t) {
        const Exponents &e = basis[t];
        std::size_t i = 0;
        while (e[i] == 0) {
            ++i;
        }
        if (total_degree(e) == 1) {
            image.push_back(phi[i]);
        } else {
            Exponents lower(e);
            lower[i] -= 1;
            image.push_back(mul_truncated(image[index.at(lower)], phi[i], k));
        }
        detail::write_column(m, t, image.back(), index);
    }
    return JetMatrix{n, k, std::move(basis), std::move(m)};
}

/// Derivation action g -> X(g) on m/m^{k+1}.
inline JetMatrix field_to_jet_matrix(const VectorField &x, TruncationOrder k)
{
    if (!x.is_formal()) {
        throw precondition_violation("jet action of a non-formal vector field");
    }
    const std::size_t n = x.dim();
    auto basis = jet_basis(n, k);
    const auto index = detail::basis_index(basis);
    Matrix m(basis.size(), basis.size());
    for (std::size_t t = 0; t < basis.size(); ++t) {
        detail::write_column(m, t, apply(x, LaurentPoly::monomial(basis[t], Scalar(1)), k), index);
    }
    return JetMatrix{n, k, std::move(basis), std::move(m)};
}

/// Dense row-major export with the basis order as a header line.
inline std::string to_string(const JetMatrix &j)
{
    std::string out = "# basis:";
    for (const auto &e : j.basis) {
        out += " " + detail::monomial_text(e);
    }
    out += "\n" + to_string(j.matrix);
    return out;
}

inline std::string to_string(const FormalDiffeo &phi)
{
    std::string out = "(";
    for (std::size_t i = 0; i < phi.dim(); ++i) {
        out += (i == 0 ? "" : ", ") + to_string(phi[i]);
    }
    return out + ")";
}

inline std::ostream &operator<<(std::ostream &os, const FormalDiffeo &phi)
{
    return os << to_string(phi);
}

/// Binary tree of group commutators over generator leaves (optionally
/// inverted). Immutable; subtrees are shared.
class CommutatorWord
{
public:
    struct Leaf {
        std::size_t index;
        bool inverse;
    };
    struct Node;

    static CommutatorWord leaf(std::size_t index, bool inverse = false);
    static CommutatorWord commutator(CommutatorWord a, CommutatorWord b);

    bool is_leaf() const;
    const Leaf &as_leaf() const;
    const Node &as_node() const;
    /// Nesting depth; a leaf has depth 0.
    std::size_t depth() const;
    /// Largest leaf index.
    std::size_t max_index() const;

private:
    struct Repr;
    explicit CommutatorWord(std::shared_ptr<const Repr> r) : repr_(std::move(r)) {}
    std::shared_ptr<const Repr> repr_;
};

struct CommutatorWord::Node {
    CommutatorWord left;
    CommutatorWord right;
};

struct CommutatorWord::Repr {
    std::variant<Leaf, Node> v;
};

inline CommutatorWord CommutatorWord::leaf(std::size_t index, bool inverse)
{
    return CommutatorWord(std::make_shared<const Repr>(Repr{Leaf{index, inverse}}));
}

inline CommutatorWord CommutatorWord::commutator(CommutatorWord a, CommutatorWord b)
{
    return CommutatorWord(std::make_shared<const Repr>(Repr{Node{std::move(a), std::move(b)}}));
}

inline bool CommutatorWord::is_leaf() const
{
    return std::holds_alternative<Leaf>(repr_->v);
}

inline const CommutatorWord::Leaf &CommutatorWord::as_leaf() const
{
    return std::get<Leaf>(repr_->v);
}

inline const CommutatorWord::Node &CommutatorWord::as_node() const
{
    return std::get<Node>(repr_->v);
}

inline std::size_t CommutatorWord::depth() const
{
    if (is_leaf()) {
        return 0;
    }
    return 1 + std::max(as_node().left.depth(), as_node().right.depth());
}

inline std::size_t CommutatorWord::max_index() const
{
    if (is_leaf()) {
        return as_leaf().index;
    }
    return std::max(as_node().left.max_index(), as_node().right.max_index());
}

/// Text form: leaves `3` or `~3` (inverse), nodes `[a,b]`.
inline std::string to_string(const CommutatorWord &w)
{
    if (w.is_leaf()) {
        return (w.as_leaf().inverse ? "~" : "") + std::to_string(w.as_leaf().index);
    }
    return "[" + to_string(w.as_node().left) + "," + to_string(w.as_node().right) + "]";
}

inline FormalDiffeo evaluate_word(const CommutatorWord &w, std::span<const FormalDiffeo> gens)
{
    if (gens.empty()) {
        throw precondition_violation("no generators to evaluate a word on");
    }
    for (const auto &g : gens) {
        detail::check_compatible(g, gens.front());
    }
    if (w.max_index() >= gens.size()) {
        throw precondition_violation("word refers to generator " + std::to_string(w.max_index()) + " but only " +
                                     std::to_string(gens.size()) + " are given");
    }
    auto eval = [&](auto &&self, const CommutatorWord &v) -> FormalDiffeo {
        if (v.is_leaf()) {
            const auto &l = v.as_leaf();
            return l.inverse ? invert(gens[l.index]) : gens[l.index];
        }
        return group_commutator(self(self, v.as_node().left), self(self, v.as_node().right));
    };
    return eval(eval, w);
}

} // namespace fgerm
