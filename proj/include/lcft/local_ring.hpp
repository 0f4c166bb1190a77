#pragma once

// Fixed-precision towers of p-adic rings
//
//     Z/p^N [x_0]/(m_0) [x_1]/(m_1) ... [x_{L-1}]/(m_{L-1})
//
// with monic moduli whose coefficients lie in the level below. Unramified
// levels come from lifts of irreducible polynomials over the residue field;
// optionally the top level is Eisenstein. Elements are flat coefficient
// arrays: a level-l element is D_l consecutive chunks, one per power of x_l.
//
// These are the workhorse rings behind O_F, O_L = O_F[x]/(g), the unramified
// stand-ins O_M and the composite O_{LM}.

#include "lcft/residue_field.hpp"

#include <optional>
#include <span>
#include <vector>

namespace lcft {

using Elem = std::vector<Int>;

struct TowerLevel {
    int degree = 1;
    /// m_0..m_{D-1} of x^D + sum m_i x^i, each an element of the level below.
    std::vector<Elem> modulus;
};

class TowerRing {
public:
    TowerRing() = default;
    TowerRing(Int p, int precision, std::vector<TowerLevel> levels);

    Int p() const { return p_; }
    int precision() const { return N_; }
    Int modulus_int() const { return q_; }
    int num_levels() const { return static_cast<int>(levels_.size()); }
    const std::vector<TowerLevel>& levels() const { return levels_; }
    const TowerLevel& level(int l) const { return levels_[l]; }
    /// Number of integers in an element of the subring generated by the first `nlev` levels.
    int size_at(int nlev) const { return sizes_[nlev]; }
    int size() const { return sizes_.back(); }

    Elem zero() const { return Elem(size(), 0); }
    Elem one() const;
    Elem from_int(Int c) const;
    /// The generator x_l embedded in the full ring.
    Elem variable(int l) const;
    /// Pads an element of the first `nlev` levels to a full element.
    Elem embed(const Elem& sub) const;

    Int reduce_int(Int a) const;
    Int mulmod(Int a, Int b) const { return static_cast<Int>((static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b)) % static_cast<unsigned __int128>(q_)); }

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem scale(const Elem& a, Int c) const;
    Elem pow(const Elem& a, std::uint64_t e) const;
    bool is_zero(const Elem& a) const;

    /// Raw multiplication in the subring of the first `nlev` levels.
    void mul_raw(int nlev, const Int* a, const Int* b, Int* out) const;
    Elem mul_sub(int nlev, const Elem& a, const Elem& b) const;
    /// Multiplies a full element by an element of the first `nlev` levels.
    Elem mul_by_sub(const Elem& a, int nlev, const Elem& sub) const;

    /// Same tower with every integer reduced to a lower precision.
    TowerRing with_precision(int precision) const;
    Elem reduce_to(const Elem& a, const TowerRing& lower) const;

private:
    Int p_ = 0;
    int N_ = 0;
    Int q_ = 1;
    std::vector<TowerLevel> levels_;
    std::vector<int> sizes_{1};
};

/// Ring automorphism (or endomorphism) of a tower given by the images of the
/// level generators; each image lives in the subring up to its own level.
/// Missing images mean the identity on that generator.
class TowerHom {
public:
    TowerHom() = default;
    TowerHom(const TowerRing& ring, std::vector<std::optional<Elem>> images);

    Elem apply(const TowerRing& ring, const Elem& a) const;
    const std::vector<std::optional<Elem>>& images() const { return images_; }

private:
    void apply_level(const TowerRing& ring, int nlev, const Int* a, Int* out) const;

    std::vector<std::optional<Elem>> images_;
    std::vector<std::vector<Elem>> powers_; // powers_[l][i] = image_l^i (subring up to level l)
};

/// Composition: (g o f)(x) = g(f(x)).
TowerHom compose(const TowerRing& ring, const TowerHom& g, const TowerHom& f);

/// A complete DVR quotient built on a tower: all levels unramified, or
/// unramified levels below an Eisenstein top level with uniformizer x_top.
class LocalRing {
public:
    LocalRing() = default;
    /// Unramified tower; uniformizer p.
    explicit LocalRing(TowerRing ring);
    /// Eisenstein top level; eps = x^e / p as an element of this ring, given exactly.
    LocalRing(TowerRing ring, Elem eps);

    const TowerRing& ring() const { return ring_; }
    Int p() const { return ring_.p(); }
    int precision() const { return ring_.precision(); }
    bool ramified() const { return ramified_; }
    int e() const { return e_; }
    /// Residue field F_p-dimension (an element's residue is its first R integers mod p).
    int residue_dim() const { return R_; }
    Int residue_order() const { return ipow(p(), R_); }
    /// Number of levels of the unramified part.
    int unram_levels() const { return ramified_ ? ring_.num_levels() - 1 : ring_.num_levels(); }
    /// Valuation cap: e * N.
    int max_valuation() const { return e_ * precision(); }

    Elem uniformizer() const;
    const Elem& eps() const { return eps_; }
    int valuation(const Elem& a) const;
    static int vp_int(Int a, Int p, int cap);

    /// Residue of a (an element of the residue field as R integers in [0,p)).
    Elem residue(const Elem& a) const;
    /// Residue of a / pi^j; requires valuation(a) >= j.
    Elem leading_digit(const Elem& a, int j) const;
    /// Teichmuller representative of a residue, in the unramified part.
    Elem teichmuller(const Elem& residue) const;
    Elem teichmuller_index(Int index) const;
    Elem residue_from_index(Int index) const;
    Int residue_index(const Elem& residue) const;
    /// The residue field as a precision-1 tower.
    const TowerRing& residue_ring() const { return residue_ring_; }
    /// Unramified part of the tower at this precision.
    const TowerRing& unram_ring() const { return unram_ring_; }

    bool is_unit(const Elem& a) const;
    Elem inverse(const Elem& u) const; // u must be a unit
    /// a / pi for valuation(a) >= 1; the top pi-adic digit becomes unknown.
    Elem div_by_pi(const Elem& a) const;
    Elem pi_power(int k) const;

    LocalRing with_precision(int precision) const;

private:
    void init_common();

    TowerRing ring_;
    bool ramified_ = false;
    int e_ = 1;
    int R_ = 1;
    Elem eps_;
    Elem p_over_pi_;
    TowerRing residue_ring_;
    TowerRing unram_ring_;
    Elem residue_eps_inv_;
};

/// Determinant of a square matrix over an unramified LocalRing, by elimination
/// with minimal-valuation pivots. `lost_digits` returns the p-adic precision
/// consumed by non-unit pivots (the result is exact modulo p^{N - lost}).
Elem local_determinant(const LocalRing& R, std::vector<std::vector<Elem>> m, int* lost_digits = nullptr);

struct LocalRoot {
    Elem value;
    int precision; // value is correct modulo pi^precision
};

/// All roots in the integers of R of the polynomial with coefficients
/// `coeffs` (lowest first), each determined at least modulo pi^target.
/// Clusters that cannot be separated at the available precision raise
/// PrecisionError. Residue roots are found by enumeration, bounded by `budget`.
std::vector<LocalRoot> local_roots(const LocalRing& R, const std::vector<Elem>& coeffs, int target,
                                   Int budget = 1000000);

/// Newton iteration from `seed`, which must satisfy f(seed) = 0 mod pi and
/// f'(seed) a unit. Returns the root to full precision.
Elem hensel_lift(const LocalRing& R, const std::vector<Elem>& coeffs, const Elem& seed);

/// Evaluates a polynomial with coefficients in R at x.
Elem poly_eval(const TowerRing& ring, const std::vector<Elem>& coeffs, const Elem& x);

} // namespace lcft
