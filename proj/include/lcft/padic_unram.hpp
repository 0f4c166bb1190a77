#pragma once

// The absolutely unramified field F = Frac W(F_q) at finite p-adic precision.
// O_F/p^N is realized as (Z/p^N)[s]/(M(s)) with M the lift of the residue
// modulus; elements carry capped relative precision.

#include "lcft/local_ring.hpp"
#include "lcft/residue_field.hpp"
#include "lcft/witt.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace lcft {

/// O_F / p^N together with its Frobenius.
class UnramField {
public:
    static std::shared_ptr<const UnramField> make(FieldSpecPtr spec, int precision);

    const FieldSpecPtr& spec() const { return spec_; }
    Int p() const { return spec_->p; }
    int f() const { return spec_->f; }
    int precision() const { return N_; }
    const LocalRing& local() const { return local_; }
    const TowerRing& ring() const { return local_.ring(); }
    /// The arithmetic Frobenius as a ring automorphism of O_F / p^N.
    const TowerHom& frobenius_hom() const { return frob_; }

    /// Residue field element <-> residue vector in the tower.
    Elem residue_vec(const FqElem& a) const;
    FqElem to_fq(const Elem& residue) const;

    /// Tower levels (empty when f = 1), reusable as the base of bigger towers.
    std::vector<TowerLevel> levels() const { return local_.ring().levels(); }

private:
    UnramField(FieldSpecPtr spec, int precision);

    FieldSpecPtr spec_;
    int N_;
    LocalRing local_;
    TowerHom frob_;
};

using UnramFieldPtr = std::shared_ptr<const UnramField>;

/// An element p^v * u of F with u a unit known modulo p^rel, or zero known
/// modulo p^v ("zero to precision"). Exact zero is distinguished.
class UnramElem {
public:
    UnramElem() = default;

    static UnramElem zero(UnramFieldPtr F);
    static UnramElem from_int(UnramFieldPtr F, Int c);
    /// Element of O_F / p^N given by tower coefficients, absolute precision `abs_prec`.
    static UnramElem from_ring(UnramFieldPtr F, const Elem& a, int abs_prec = -1);
    /// Element with the given s-coefficients (integers), full precision.
    static UnramElem from_coeffs(UnramFieldPtr F, const std::vector<Int>& coeffs);

    const UnramFieldPtr& field() const { return F_; }
    bool is_zero() const { return zero_; }
    bool is_exact_zero() const { return zero_ && exact_; }
    /// Valuation; for zero-to-precision this is the absolute precision.
    int valuation() const { return v_; }
    int relative_precision() const { return rel_; }
    int absolute_precision() const { return zero_ ? v_ : v_ + rel_; }
    const Elem& unit() const { return u_; }
    bool is_unit() const { return !zero_ && v_ == 0; }
    bool is_principal_unit() const;

    /// The element in O_F / p^k for k <= absolute precision (requires v >= 0).
    Elem to_ring(int k) const;
    /// Teichmuller digits d_0, d_1, ... with x = sum tau(d_i) p^i (requires v >= 0).
    std::vector<FqElem> teichmuller_digits(int count) const;
    FqElem residue() const;

    UnramElem operator+(const UnramElem& o) const;
    UnramElem operator-(const UnramElem& o) const;
    UnramElem operator-() const;
    UnramElem operator*(const UnramElem& o) const;
    UnramElem operator/(const UnramElem& o) const;
    UnramElem pow(Int e) const;

    /// Same value to precision min of both.
    bool equals(const UnramElem& o) const;
    /// Truncation to a lower absolute precision.
    UnramElem with_absolute_precision(int k) const;

    std::string to_string() const;

private:
    void normalize(Elem s, int base_val, int digits);

    UnramFieldPtr F_;
    bool zero_ = true;
    bool exact_ = false;
    int v_ = 0;
    int rel_ = 0;
    Elem u_;
};

enum class QqOp { add, sub, mul, div };

UnramElem qq_arith(const UnramElem& a, const UnramElem& b, QqOp op);
UnramElem qq_teichmuller(const FqElem& a, UnramFieldPtr F);
/// Frobenius via the Teichmuller digit action d -> d^p.
UnramElem qq_frobenius(const UnramElem& x);

using UnramPoly = std::vector<UnramElem>; // lowest degree first

/// Sylvester-matrix resultant with minimal-valuation pivoting.
UnramElem poly_resultant(const UnramPoly& g, const UnramPoly& h);
/// Determinant of a square matrix of UnramElems.
UnramElem unram_determinant(std::vector<std::vector<UnramElem>> m);
/// Roots in O_F of an integral polynomial; non-squarefree input is rejected.
std::vector<UnramElem> hensel_roots(const UnramPoly& g);

/// (a_0, ..., a_{n-1}) -> sum p^i tau(a_i^{p^{-i}}) mod p^n.
UnramElem witt_to_int(const WittFq& a, UnramFieldPtr F);
/// Inverse of witt_to_int on O_F / p^n (x needs absolute precision >= n).
WittFq int_to_witt(const UnramElem& x, int n);

} // namespace lcft
