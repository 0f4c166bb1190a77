#pragma once

// Principal units modulo p^n-th powers: the Artin-Hasse exponential, the map
// E_{n,pi} from Witt vectors, its inverse by digit peeling, finite
// presentations of unit quotients, and subgroups in Howell form.

#include "lcft/local_ring.hpp"
#include "lcft/padic_unram.hpp"
#include "lcft/witt.hpp"
#include "lcft/zmod.hpp"

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <vector>

namespace lcft {

struct AHSeries {
    Int p = 0;
    int D = 0;
    int N = 0;
    std::vector<mpq_class> exact; // c_0..c_D as rationals
    std::vector<Int> coeffs;      // c_k mod p^N
};

/// Coefficients of E(X) = exp(sum_i X^{p^i} / p^i) up to degree D, reduced
/// mod p^N. Integrality is asserted; cached per (p, D, N).
std::shared_ptr<const AHSeries> ah_series(Int p, int D, int N);
/// Smallest power of p exceeding `budget`.
int ah_degree_for(Int p, int budget);
/// E(x) in R for valuation(x) >= 1, truncated so the tail vanishes at R's precision.
Elem ah_eval(const LocalRing& R, const Elem& x);

/// E_{n,pi} on O_F / p^N and its inverse by digit peeling (odd p).
class EnPiMap {
public:
    EnPiMap(UnramFieldPtr F, int n, Elem pi);

    const UnramFieldPtr& field() const { return F_; }
    int n() const { return n_; }
    const Elem& pi() const { return pi_; }
    Elem apply(const std::vector<Elem>& lifts) const;
    Elem apply(const WittFq& a) const;
    /// a with u = E_{n,pi}(a) mod U_{n+1}; u must be a principal unit.
    WittFq peel(const Elem& u) const;

private:
    UnramFieldPtr F_;
    int n_;
    Elem pi_;
    Elem res_inv_; // residue of (pi/p)^{-1}
};

/// A finite quotient of principal units presented as (Z/p^r)^K / relations.
///
/// `filtered`: U_1/U_m of a local ring, additionally modulo p^r-th powers,
/// with generators 1 + tau(e_b) pi^j (e_b the F_p-basis of the residue field)
/// and coordinates obtained by peeling leading digits.
/// `witt`: U_{1,F}/U_{1,F}^{p^n} for unramified F and odd p, in the
/// coordinates of W_n(F_q) = O_F/p^n transported through E_{n,pi}^{-1}.
class UnitQuotient {
public:
    enum class Kind { filtered, witt };

    static std::shared_ptr<const UnitQuotient> filtered(const LocalRing& R, int m, int r);

    Kind kind() const { return kind_; }
    Int p() const { return p_; }
    int r() const { return r_; }
    int rank() const { return K_; }
    int level() const { return m_; }
    const HowellForm& relations() const { return relations_; }
    /// log_p of the group order.
    int log_order() const { return r_ * K_ - relations_.log_order(); }
    /// Coordinates (not reduced) of a principal unit of the ring.
    ZVec coords(const Elem& u) const;
    ZVec normal_form(const ZVec& x) const { return relations_.reduce(x); }
    const LocalRing& ring() const { return R_; }
    /// The generators 1 + tau(e_b) pi^j in coordinate order.
    const std::vector<Elem>& generators() const { return gens_; }

private:
    friend class UnitContext;
    UnitQuotient() = default;

    Kind kind_ = Kind::filtered;
    Int p_ = 0;
    int r_ = 1;
    int K_ = 0;
    int m_ = 0;
    LocalRing R_;
    HowellForm relations_;
    std::vector<Elem> gens_;
    std::vector<std::vector<Elem>> inv_powers_; // per generator: g^{-c}, c = 0..p-1
    std::shared_ptr<const EnPiMap> en_;
};

using UnitQuotientPtr = std::shared_ptr<const UnitQuotient>;

/// A class in a unit quotient.
struct UnitClass {
    UnitQuotientPtr quotient;
    ZVec coords;                 // normal form
    std::optional<WittFq> witt;  // Witt coordinates when known
};

class UnitSubgroup {
public:
    UnitSubgroup() = default;
    UnitSubgroup(UnitQuotientPtr Q, const std::vector<ZVec>& generators);

    static UnitSubgroup trivial(UnitQuotientPtr Q) { return UnitSubgroup(std::move(Q), {}); }
    static UnitSubgroup full(UnitQuotientPtr Q);

    const UnitQuotientPtr& quotient() const { return Q_; }
    /// Howell form of the generators together with the relations.
    const HowellForm& form() const { return form_; }
    int log_order() const { return form_.log_order() - Q_->relations().log_order(); }
    /// [U : A] as a power of p.
    Int index_in_full() const;
    int log_index() const { return Q_->log_order() - log_order(); }

    bool contains(const ZVec& x) const { return form_.contains(x); }
    bool contains(const UnitSubgroup& o) const;
    bool operator==(const UnitSubgroup& o) const;
    bool operator!=(const UnitSubgroup& o) const { return !(*this == o); }

    UnitSubgroup operator+(const UnitSubgroup& o) const;
    /// log_p [U : A intersect B], from |A cap B| = |A| |B| / |A + B|.
    int log_index_of_intersection(const UnitSubgroup& o) const;

private:
    void check_same(const UnitSubgroup& o) const;

    UnitQuotientPtr Q_;
    HowellForm form_;
};

enum class SubgroupQuery { equal, contains, index_in_full };

UnitSubgroup subgroup_from_generators(UnitQuotientPtr Q, const std::vector<UnitClass>& classes);
/// equal / contains answer 0 or 1; index_in_full answers [U : A].
Int subgroup_query(const UnitSubgroup& a, const UnitSubgroup& b, SubgroupQuery op);

/// U_{1,F}/U_{1,F}^{p^n} for F = Frac W(F_q) with uniformizer pi = p * u0.
class UnitContext {
public:
    /// precision defaults to n + 3.
    UnitContext(FieldSpecPtr spec, int n, std::optional<int> precision = std::nullopt,
                std::optional<UnramElem> pi_unit = std::nullopt);

    const FieldSpecPtr& spec() const { return spec_; }
    Int p() const { return spec_->p; }
    int n() const { return n_; }
    int precision() const { return N_; }
    const UnramFieldPtr& field() const { return F_; }
    const Elem& pi() const { return pi_; }

    /// The quotient used for classes and subgroups: Witt coordinates for odd
    /// p, the filtered presentation for p = 2 (where E_{n,pi} is not onto).
    const UnitQuotientPtr& quotient() const { return Q_; }
    /// The filtered presentation (available for every p).
    const UnitQuotientPtr& filtered_quotient() const { return filtered_; }

    /// prod_i E(lift_i^{p^{n-i}} pi)^{p^i} with Teichmuller lifts.
    UnramElem e_n_pi(const WittFq& a) const;
    /// Same product with caller-supplied lifts of the components.
    UnramElem e_n_pi_lifts(const std::vector<Elem>& lifts) const;
    /// The Witt vector a with u = E_{n,pi}(a) mod U^{p^n}.
    WittFq unit_to_witt(const UnramElem& u) const;

    UnitClass class_of(const UnramElem& u) const;
    UnitClass class_of_witt(const WittFq& a) const;

    /// Subgroup generated by the classes of E_{n,pi}(F(w) wp(x)), x over W_n(k).
    UnitSubgroup theorem_subgroup(const WittFq& w, Int enumeration_bound = 10000) const;

    /// Principal part u / tau(residue(u)) of a unit of O_F.
    UnramElem principal_part(const UnramElem& u) const;
    Elem to_elem(const UnramElem& u) const;

private:
    WittFq match_witt(const Elem& u) const;

    FieldSpecPtr spec_;
    int n_;
    int N_;
    UnramFieldPtr F_;
    Elem pi_;
    std::shared_ptr<const EnPiMap> en_;
    UnitQuotientPtr Q_;
    UnitQuotientPtr filtered_;
};

/// Level m with U_m contained in U_1^{p^n} for ramification index e.
int power_level(Int p, int e, int n);

} // namespace lcft
