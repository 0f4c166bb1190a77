#pragma once

// Linear algebra over Z/p^r: Howell canonical forms of submodules of
// (Z/p^r)^k, membership, coset normal forms and orders.

#include "lcft/residue_field.hpp"

#include <optional>
#include <vector>

namespace lcft {

using ZVec = std::vector<Int>;

class HowellForm {
public:
    HowellForm() = default;
    /// Canonical form of the span of `gens` in (Z/p^r)^cols.
    HowellForm(Int p, int r, int cols, std::vector<ZVec> gens);

    Int p() const { return p_; }
    int r() const { return r_; }
    int cols() const { return cols_; }
    Int modulus() const { return q_; }
    const std::vector<ZVec>& rows() const { return rows_; }
    const std::vector<int>& pivot_columns() const { return piv_col_; }
    /// p-adic valuation of each pivot entry.
    const std::vector<int>& pivot_valuations() const { return piv_val_; }

    bool contains(ZVec x) const;
    /// Canonical representative of x modulo the module.
    ZVec reduce(ZVec x) const;
    /// log_p of the number of elements of the module.
    int log_order() const;
    bool contains(const HowellForm& other) const;

    bool operator==(const HowellForm& o) const {
        return p_ == o.p_ && r_ == o.r_ && cols_ == o.cols_ && rows_ == o.rows_;
    }
    bool operator!=(const HowellForm& o) const { return !(*this == o); }

    ZVec normalize(ZVec x) const;

private:
    Int mulmod(Int a, Int b) const {
        return static_cast<Int>(static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b) %
                                static_cast<unsigned __int128>(q_));
    }

    Int p_ = 2;
    int r_ = 1;
    int cols_ = 0;
    Int q_ = 2;
    std::vector<ZVec> rows_;
    std::vector<int> piv_col_;
    std::vector<int> piv_val_;
};

/// Coefficients x with sum_i x_i gens_i + (element of span(relations)) = target
/// in (Z/p^r)^cols, or nullopt when target is outside the span.
std::optional<ZVec> solve_combination(Int p, int r, int cols, const std::vector<ZVec>& gens,
                                      const std::vector<ZVec>& relations, const ZVec& target);

/// Inverse of a unit modulo m (m = p^r).
Int inverse_mod(Int a, Int m);
/// p-adic valuation of a nonzero residue modulo p^r, r for zero.
int zp_valuation(Int a, Int p, int r);

} // namespace lcft
