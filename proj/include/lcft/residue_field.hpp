#pragma once

// Residue fields of characteristic p: finite fields F_q = F_p[s]/(m(s)) and
// the imperfect rational function field F_p(t).

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lcft {

using Int = std::int64_t;

bool is_prime(Int n);
Int ipow(Int base, int exp);

/// Dense polynomials over F_p, lowest degree first, no trailing zeros
/// (the zero polynomial is the empty vector).
namespace fp {
using Poly = std::vector<Int>;

Int reduce(Int a, Int p);
Int inverse(Int a, Int p);
void trim(Poly& a);
int degree(const Poly& a); // -1 for zero
Poly add(const Poly& a, const Poly& b, Int p);
Poly sub(const Poly& a, const Poly& b, Int p);
Poly mul(const Poly& a, const Poly& b, Int p);
Poly scale(const Poly& a, Int c, Int p);
/// Quotient and remainder; b must be nonzero.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, Int p);
Poly gcd(Poly a, Poly b, Int p); // monic or zero
Poly make_monic(const Poly& a, Int p);
} // namespace fp

/// A finite field F_q, q = p^f, given by a monic irreducible modulus.
struct FieldSpec {
    Int p = 0;
    int f = 0;
    std::vector<Int> modulus; // f+1 coefficients c_0..c_f, c_f = 1

    /// Field of order p^f using the lexicographically smallest monic
    /// irreducible modulus (coefficients compared from c_0 upwards).
    static std::shared_ptr<const FieldSpec> make(Int p, int f);
    /// Field with a caller-supplied modulus; irreducibility is verified.
    static std::shared_ptr<const FieldSpec> with_modulus(Int p, std::vector<Int> modulus);

    Int order() const;
    bool operator==(const FieldSpec& o) const { return p == o.p && modulus == o.modulus; }
};

using FieldSpecPtr = std::shared_ptr<const FieldSpec>;

bool is_irreducible_fp(const fp::Poly& m, Int p);

/// Element of F_q: a polynomial residue in s of degree < f.
class FqElem {
public:
    FqElem() = default;
    FqElem(FieldSpecPtr spec, std::vector<Int> coeffs);

    static FqElem zero(FieldSpecPtr spec);
    static FqElem one(FieldSpecPtr spec);
    static FqElem from_int(FieldSpecPtr spec, Int c);
    /// The class of s (the root of the modulus).
    static FqElem generator(FieldSpecPtr spec);
    /// Inverse of index(): i = c_0 p^{f-1} + c_1 p^{f-2} + ... + c_{f-1}.
    static FqElem from_index(FieldSpecPtr spec, Int index);

    Int index() const;
    const std::vector<Int>& coeffs() const { return c_; }
    const FieldSpecPtr& spec() const { return spec_; }
    Int characteristic() const { return spec_->p; }

    FqElem zero_like() const { return zero(spec_); }
    FqElem one_like() const { return one(spec_); }
    FqElem constant_like(Int c) const { return from_int(spec_, c); }

    bool is_zero() const;
    FqElem operator+(const FqElem& o) const;
    FqElem operator-(const FqElem& o) const;
    FqElem operator-() const;
    FqElem operator*(const FqElem& o) const;
    FqElem operator/(const FqElem& o) const;
    FqElem& operator+=(const FqElem& o) { return *this = *this + o; }
    FqElem& operator*=(const FqElem& o) { return *this = *this * o; }
    bool operator==(const FqElem& o) const;
    bool operator!=(const FqElem& o) const { return !(*this == o); }
    /// Deterministic element ordering: lexicographic on (c_0, c_1, ...).
    bool operator<(const FqElem& o) const;

    FqElem pow(Int e) const; // negative e allowed for nonzero elements
    FqElem inverse() const;
    FqElem frobenius() const { return pow(spec_->p); }

    std::string to_string() const;

private:
    void check_same(const FqElem& o) const;

    FieldSpecPtr spec_;
    std::vector<Int> c_;
};

enum class FieldOp { add, sub, mul, div };

FqElem fq_arith(const FqElem& a, const FqElem& b, FieldOp op);
FqElem fq_frobenius(const FqElem& a);
FqElem fq_pth_root(const FqElem& a);
/// The Artin-Schreier operator a -> a^p - a.
FqElem fq_wp(const FqElem& a);
/// Absolute trace to F_p, returned as an element of F_p.
Int fq_trace(const FqElem& a);
/// Smallest x (in the element ordering) with x^p - x = b, if any.
std::optional<FqElem> fq_solve_wp(const FqElem& b);
/// All q elements in index order.
std::vector<FqElem> fq_elements(const FieldSpecPtr& spec);
/// The F_p-basis 1, s, ..., s^{f-1}.
std::vector<FqElem> fq_basis(const FieldSpecPtr& spec);
/// Parses sums of terms c, c*s^k, c s^k, s (as printed by to_string).
FqElem parse_fq(const FieldSpecPtr& spec, const std::string& text);

/// Element of F_p(t) in reduced form: gcd(num, den) = 1 and den monic.
class RatFuncElem {
public:
    RatFuncElem() = default;
    RatFuncElem(Int p, fp::Poly num, fp::Poly den);

    static RatFuncElem constant(Int p, Int c);
    static RatFuncElem t(Int p);

    const fp::Poly& numerator() const { return num_; }
    const fp::Poly& denominator() const { return den_; }
    Int characteristic() const { return p_; }

    RatFuncElem zero_like() const { return constant(p_, 0); }
    RatFuncElem one_like() const { return constant(p_, 1); }
    RatFuncElem constant_like(Int c) const { return constant(p_, c); }

    bool is_zero() const { return num_.empty(); }
    RatFuncElem operator+(const RatFuncElem& o) const;
    RatFuncElem operator-(const RatFuncElem& o) const;
    RatFuncElem operator-() const;
    RatFuncElem operator*(const RatFuncElem& o) const;
    RatFuncElem operator/(const RatFuncElem& o) const;
    bool operator==(const RatFuncElem& o) const = default;

    RatFuncElem pow(Int e) const;
    RatFuncElem frobenius() const { return pow(p_); }

    std::string to_string() const;

private:
    void normalize();
    void check_same(const RatFuncElem& o) const;

    Int p_ = 0;
    fp::Poly num_;
    fp::Poly den_{1};
};

RatFuncElem ratfunc_arith(const RatFuncElem& a, const RatFuncElem& b, FieldOp op);
RatFuncElem ratfunc_frobenius(const RatFuncElem& a);
RatFuncElem ratfunc_wp(const RatFuncElem& a);

} // namespace lcft
