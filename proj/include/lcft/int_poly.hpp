#pragma once

// Sparse multivariate polynomials with arbitrary-precision integer coefficients.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lcft {

class IntPoly {
public:
    using Monomial = std::vector<std::uint16_t>;

    IntPoly() = default;
    explicit IntPoly(int nvars) : nvars_(nvars) {}

    static IntPoly constant(int nvars, const mpz_class& c);
    static IntPoly variable(int nvars, int index);

    int nvars() const { return nvars_; }
    const std::map<Monomial, mpz_class>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    IntPoly operator+(const IntPoly& o) const;
    IntPoly operator-(const IntPoly& o) const;
    IntPoly operator*(const IntPoly& o) const;
    IntPoly operator*(const mpz_class& c) const;
    IntPoly pow(unsigned e) const;
    /// Divides every coefficient by d; throws CheckFailure if any division is inexact.
    IntPoly divide_exact(const mpz_class& d) const;

    bool operator==(const IntPoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    /// Coefficient of the monomial, zero if absent.
    mpz_class coefficient(const Monomial& m) const;
    void add_term(const Monomial& m, const mpz_class& c);

    std::string to_string(const std::vector<std::string>& names) const;

private:
    int nvars_ = 0;
    std::map<Monomial, mpz_class> terms_;
};

} // namespace lcft
