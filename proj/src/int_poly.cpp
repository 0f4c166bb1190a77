#include "lcft/int_poly.hpp"

#include "lcft/errors.hpp"

#include <sstream>

namespace lcft {

IntPoly IntPoly::constant(int nvars, const mpz_class& c) {
    IntPoly r(nvars);
    r.add_term(Monomial(nvars, 0), c);
    return r;
}

IntPoly IntPoly::variable(int nvars, int index) {
    IntPoly r(nvars);
    Monomial m(nvars, 0);
    m[index] = 1;
    r.add_term(m, 1);
    return r;
}

void IntPoly::add_term(const Monomial& m, const mpz_class& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

mpz_class IntPoly::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? mpz_class(0) : it->second;
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    IntPoly r = *this;
    r.nvars_ = std::max(nvars_, o.nvars_);
    for (const auto& [m, c] : o.terms_) r.add_term(m, c);
    return r;
}

IntPoly IntPoly::operator-(const IntPoly& o) const {
    IntPoly r = *this;
    r.nvars_ = std::max(nvars_, o.nvars_);
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
    IntPoly r(std::max(nvars_, o.nvars_));
    Monomial prod(r.nvars_, 0);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            for (int i = 0; i < r.nvars_; ++i) prod[i] = static_cast<std::uint16_t>(ma[i] + mb[i]);
            r.add_term(prod, ca * cb);
        }
    }
    return r;
}

IntPoly IntPoly::operator*(const mpz_class& c) const {
    IntPoly r(nvars_);
    if (c == 0) return r;
    for (const auto& [m, a] : terms_) r.terms_.emplace(m, a * c);
    return r;
}

IntPoly IntPoly::pow(unsigned e) const {
    IntPoly r = constant(nvars_, 1), b = *this;
    while (e > 0) {
        if (e & 1u) r = r * b;
        e >>= 1u;
        if (e > 0) b = b * b;
    }
    return r;
}

IntPoly IntPoly::divide_exact(const mpz_class& d) const {
    IntPoly r(nvars_);
    for (const auto& [m, c] : terms_) {
        if (mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t()) == 0)
            throw CheckFailure("inexact division while solving the ghost identity");
        r.terms_.emplace(m, mpz_class(c / d));
    }
    return r;
}

std::string IntPoly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        mpz_class a = abs(c);
        bool unit_monomial = true;
        for (auto e : m)
            if (e) unit_monomial = false;
        if (a != 1 || unit_monomial) os << a.get_str();
        bool need_dot = a != 1;
        for (int i = 0; i < nvars_; ++i) {
            if (m[i] == 0) continue;
            if (need_dot) os << "*";
            os << names.at(i);
            if (m[i] > 1) os << "^" << m[i];
            need_dot = true;
        }
    }
    return os.str();
}

} // namespace lcft
