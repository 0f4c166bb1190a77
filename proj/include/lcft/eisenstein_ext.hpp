#pragma once

// Totally ramified extensions L = F[x]/(g), g Eisenstein of p-power degree,
// over an unramified tower F: element arithmetic, norms, traces, Galois
// automorphisms from Hensel roots, the cyclotomic catalog and base change.

#include "lcft/local_ring.hpp"
#include "lcft/padic_unram.hpp"

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lcft {

class EisensteinExt;
using ExtPtr = std::shared_ptr<const EisensteinExt>;

class EisensteinExt {
public:
    /// g = x^e + sum_{i<e} g[i] x^i with g[i] in the unramified tower `base`.
    static ExtPtr make(const LocalRing& base, std::vector<Elem> g, std::string provenance = "input");
    /// Monic g with e + 1 coefficients over the unramified field F.
    static ExtPtr make(UnramFieldPtr F, const UnramPoly& g, std::string provenance = "input");
    /// Monic integer polynomial (lowest first) over Q_{p^f} at precision N.
    static ExtPtr make_integral(FieldSpecPtr spec, int precision, const std::vector<mpz_class>& g,
                                std::string provenance = "input");

    Int p() const { return base_.p(); }
    int degree() const { return e_; }
    int precision() const { return base_.precision(); }
    const LocalRing& base() const { return base_; }
    const LocalRing& local() const { return L_; }
    const TowerRing& ring() const { return L_.ring(); }
    /// Lower coefficients g_0..g_{e-1} as base elements.
    const std::vector<Elem>& coeffs() const { return g_; }
    /// F when the base is a plain unramified field.
    const UnramFieldPtr& base_field() const { return F_; }
    /// The integer polynomial when g has coefficients in Z (lowest first, monic).
    const std::optional<std::vector<mpz_class>>& integer_poly() const { return gz_; }
    const std::string& provenance() const { return provenance_; }

    Elem pi() const { return L_.uniformizer(); }
    Elem from_base(const Elem& c) const;
    /// Coefficient of pi_L^i as a base element.
    Elem coefficient(const Elem& a, int i) const;
    /// g as polynomial coefficients in this ring (lowest first, monic).
    std::vector<Elem> poly_in_ring() const;
    /// The image of an element of `smaller` whose base tower is a prefix of ours.
    Elem lift_from(const EisensteinExt& smaller, const Elem& a) const;

private:
    EisensteinExt() = default;

    LocalRing base_;
    LocalRing L_;
    int e_ = 1;
    std::vector<Elem> g_;
    UnramFieldPtr F_;
    std::optional<std::vector<mpz_class>> gz_;
    std::string provenance_;
};

/// An element of L with its host.
class ExtElem {
public:
    ExtElem(ExtPtr L, Elem v);
    static ExtElem from_base(ExtPtr L, const Elem& c) { return ExtElem(L, L->from_base(c)); }

    const ExtPtr& host() const { return L_; }
    const Elem& value() const { return v_; }
    int valuation() const { return L_->local().valuation(v_); }
    ExtElem operator+(const ExtElem& o) const;
    ExtElem operator-(const ExtElem& o) const;
    ExtElem operator*(const ExtElem& o) const;
    ExtElem inverse() const;
    ExtElem pow(std::uint64_t k) const;
    bool operator==(const ExtElem& o) const { return L_ == o.L_ && v_ == o.v_; }

private:
    ExtPtr L_;
    Elem v_;
};

/// Matrix of multiplication by a on the base basis 1, x, ..., x^{e-1} (columns).
std::vector<std::vector<Elem>> ext_mul_matrix(const EisensteinExt& L, const Elem& a);
/// N_{L/base}(a) as the determinant of multiplication; `lost` as in local_determinant.
Elem ext_norm(const EisensteinExt& L, const Elem& a, int* lost = nullptr);
Elem ext_trace(const EisensteinExt& L, const Elem& a);
UnramElem ext_norm(const ExtElem& u);
UnramElem ext_trace(const ExtElem& u);

/// sigma: base fixed, pi_L -> image (a root of g in L).
struct ExtAutomorphism {
    Elem image;
    int precision = 0; // image correct modulo pi_L^precision
    TowerHom hom;

    Elem apply(const EisensteinExt& L, const Elem& a) const { return hom.apply(L.ring(), a); }
};

ExtAutomorphism ext_automorphism(const EisensteinExt& L, const Elem& image, int precision);
/// All automorphisms from the roots of g in L; the identity comes first.
std::vector<ExtAutomorphism> ext_automorphisms(const EisensteinExt& L, Int budget = 1000000);
/// Index of the automorphism whose image is closest to y.
int nearest_automorphism(const EisensteinExt& L, const std::vector<ExtAutomorphism>& autos, const Elem& y);
/// prod_sigma sigma(a): the conjugate-product norm (needs L/F Galois).
Elem ext_norm_by_conjugates(const EisensteinExt& L, const std::vector<ExtAutomorphism>& autos, const Elem& a);

struct CyclicStructure {
    bool galois = false;
    bool cyclic = false;
    /// powers[k] = sigma^k for a generator sigma (when cyclic).
    std::vector<ExtAutomorphism> powers;
    /// Multiplication table: table[i][j] = index of autos[i] o autos[j].
    std::vector<std::vector<int>> table;
    std::vector<ExtAutomorphism> autos;
};

CyclicStructure ext_is_cyclic(const EisensteinExt& L);

/// Minimal polynomial over Z of the prime prod_{h^{p-1}=1}(1 - zeta^h) of the
/// degree p^n subfield of Q(zeta_{p^{n+1}}) (p odd, n <= 2).
std::vector<mpz_class> cyclotomic_catalog_poly(Int p, int n);
ExtPtr cyclotomic_catalog(Int p, int n, int precision, int f = 1);
/// The same integral polynomial over Q_{p^f'}.
ExtPtr base_change_unramified(const EisensteinExt& L, int f_new);

/// Working precision used for extensions of degree e when classes are taken mod U^{p^n}.
int default_ext_precision(Int p, int e, int n);

/// Polynomial string such as "x^3 - 6*x^2 + 9*x - 3".
std::string poly_to_string(const std::vector<mpz_class>& g);
/// Parses an integer polynomial in x; throws DomainError on malformed input.
std::vector<mpz_class> parse_int_poly(const std::string& s);

} // namespace lcft
