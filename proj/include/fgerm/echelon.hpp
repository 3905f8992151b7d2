#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "fgerm/scalar.hpp"

namespace fgerm
{

/// Sparse vector over Q(i) indexed by an ordered key.
template <typename Key, typename Compare = std::less<Key>>
using SparseVector = std::map<Key, Scalar, Compare>;

/// Incremental reduced row echelon form of sparse vectors.
///
/// Every stored row has a pivot key with coefficient 1, and no pivot key
/// occurs in any other stored row. Pivots are the greatest key of a row
/// under `Compare`.
template <typename Key, typename Compare = std::less<Key>>
class SparseEchelon
{
public:
    using Vector = SparseVector<Key, Compare>;

    std::size_t rank() const noexcept
    {
        return rows_.size();
    }

    /// Residue of `v` after eliminating every pivot.
    Vector reduce(Vector v) const
    {
        // rows are fully reduced, so one pass in any order suffices
        std::vector<std::pair<const Vector *, Scalar>> hits;
        for (const auto &[k, c] : v) {
            auto it = rows_.find(k);
            if (it != rows_.end()) {
                hits.emplace_back(&it->second, c);
            }
        }
        for (const auto &[row, f] : hits) {
            axpy(v, *row, -f);
        }
        return v;
    }

    bool contains(const Vector &v) const
    {
        return reduce(v).empty();
    }

    /// Inserts `v` if independent; returns true iff the rank grew.
    bool insert(const Vector &v)
    {
        Vector r = reduce(v);
        if (r.empty()) {
            return false;
        }
        const Key pivot = r.rbegin()->first;
        const Scalar inv = r.rbegin()->second.inverse();
        for (auto &[k, c] : r) {
            c *= inv;
        }
        for (auto &[k, row] : rows_) {
            auto it = row.find(pivot);
            if (it != row.end()) {
                const Scalar f = it->second;
                axpy(row, r, -f);
            }
        }
        rows_.emplace(pivot, std::move(r));
        return true;
    }

    const std::map<Key, Vector, Compare> &rows() const noexcept
    {
        return rows_;
    }

private:
    static void axpy(Vector &dst, const Vector &src, const Scalar &f)
    {
        for (const auto &[k, c] : src) {
            auto [it, inserted] = dst.try_emplace(k, f * c);
            if (!inserted) {
                it->second += f * c;
                if (it->second.is_zero()) {
                    dst.erase(it);
                }
            }
        }
    }

    std::map<Key, Vector, Compare> rows_;
};

} // namespace fgerm
