#include "lcft/eisenstein_ext.hpp"

#include "lcft/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lcft {

namespace {

int log_p_exact(Int p, int e) {
    int m = 0;
    Int x = e;
    while (x > 1 && x % p == 0) {
        x /= p;
        ++m;
    }
    return x == 1 ? m : -1;
}

Int mpz_mod(const mpz_class& a, Int q) {
    mpz_class r = a % mpz_class(static_cast<long>(q));
    if (r < 0) r += static_cast<long>(q);
    return static_cast<Int>(r.get_si());
}

} // namespace

// ---------------------------------------------------------------- construction

ExtPtr EisensteinExt::make(const LocalRing& base, std::vector<Elem> g, std::string provenance) {
    if (base.ramified()) throw DomainError("the base of an Eisenstein extension must be unramified");
    const int e = static_cast<int>(g.size());
    const Int p = base.p();
    if (e < 2 || log_p_exact(p, e) < 0)
        throw DomainError("degree " + std::to_string(e) + " is not a power of p = " + std::to_string(p));
    const TowerRing& br = base.ring();
    for (auto& c : g) {
        if (static_cast<int>(c.size()) > br.size()) throw DomainError("coefficient outside the base ring");
        c = br.embed(c);
        for (auto& x : c) x = br.reduce_int(x);
    }
    for (int i = 0; i < e; ++i) {
        const int v = base.valuation(g[i]);
        if (i > 0 && v < 1)
            throw DomainError("not Eisenstein: coefficient of x^" + std::to_string(i) + " has valuation 0");
        if (i == 0 && v != 1)
            throw DomainError("not Eisenstein: coefficient of x^0 has valuation " + std::to_string(v) +
                              " instead of 1");
    }
    std::shared_ptr<EisensteinExt> L(new EisensteinExt());
    L->base_ = base;
    L->e_ = e;
    L->g_ = g;
    L->provenance_ = std::move(provenance);
    auto levels = br.levels();
    levels.push_back(TowerLevel{e, g});
    TowerRing ring(p, base.precision(), levels);
    // eps = x^e / p = -sum (g_i / p) x^i.
    const int s = br.size();
    Elem eps(ring.size(), 0);
    for (int i = 0; i < e; ++i)
        for (int j = 0; j < s; ++j) eps[i * s + j] = ring.reduce_int(-(g[i][j] / p));
    L->L_ = LocalRing(ring, eps);
    return L;
}

ExtPtr EisensteinExt::make(UnramFieldPtr F, const UnramPoly& g, std::string provenance) {
    if (g.size() < 2) throw DomainError("polynomial must have positive degree");
    const int N = F->precision();
    if (!g.back().equals(UnramElem::from_int(F, 1)) || g.back().absolute_precision() < 1)
        throw DomainError("polynomial must be monic");
    std::vector<Elem> c;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        if (g[i].field()->spec() != F->spec() && !(*g[i].field()->spec() == *F->spec()))
            throw DomainError("coefficient from a different field");
        if (g[i].is_zero()) {
            c.push_back(F->ring().zero());
            continue;
        }
        if (g[i].valuation() < 0) throw DomainError("coefficients must be integral");
        Elem x = g[i].to_ring(std::min(N, g[i].absolute_precision()));
        x.resize(F->ring().size(), 0);
        c.push_back(x);
    }
    auto L = make(F->local(), c, std::move(provenance));
    std::const_pointer_cast<EisensteinExt>(L)->F_ = F;
    return L;
}

ExtPtr EisensteinExt::make_integral(FieldSpecPtr spec, int precision, const std::vector<mpz_class>& g,
                                    std::string provenance) {
    if (g.size() < 2 || g.back() != 1) throw DomainError("polynomial must be monic of positive degree");
    const auto F = UnramField::make(spec, precision);
    std::vector<Elem> c;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) c.push_back(F->ring().from_int(mpz_mod(g[i], F->ring().modulus_int())));
    auto L = make(F->local(), c, std::move(provenance));
    auto m = std::const_pointer_cast<EisensteinExt>(L);
    m->F_ = F;
    m->gz_ = g;
    return L;
}

Elem EisensteinExt::from_base(const Elem& c) const { return ring().embed(c); }

Elem EisensteinExt::coefficient(const Elem& a, int i) const {
    const int s = base_.ring().size();
    return Elem(a.begin() + i * s, a.begin() + (i + 1) * s);
}

std::vector<Elem> EisensteinExt::poly_in_ring() const {
    std::vector<Elem> out;
    for (const auto& c : g_) out.push_back(from_base(c));
    out.push_back(ring().one());
    return out;
}

Elem EisensteinExt::lift_from(const EisensteinExt& smaller, const Elem& a) const {
    if (smaller.e_ != e_) throw DomainError("extensions of different degree");
    const int s = base_.ring().size();
    const int t = smaller.base_.ring().size();
    if (t > s) throw DomainError("cannot lift into a smaller base");
    Elem out(ring().size(), 0);
    for (int i = 0; i < e_; ++i)
        for (int j = 0; j < t; ++j) out[i * s + j] = ring().reduce_int(a[i * t + j]);
    return out;
}

// ---------------------------------------------------------------- elements

ExtElem::ExtElem(ExtPtr L, Elem v) : L_(std::move(L)), v_(std::move(v)) {
    if (static_cast<int>(v_.size()) != L_->ring().size()) throw DomainError("element size does not match the extension");
}

ExtElem ExtElem::operator+(const ExtElem& o) const { return ExtElem(L_, L_->ring().add(v_, o.v_)); }
ExtElem ExtElem::operator-(const ExtElem& o) const { return ExtElem(L_, L_->ring().sub(v_, o.v_)); }
ExtElem ExtElem::operator*(const ExtElem& o) const { return ExtElem(L_, L_->ring().mul(v_, o.v_)); }
ExtElem ExtElem::inverse() const {
    if (!L_->local().is_unit(v_)) throw DomainError("only units of O_L are inverted");
    return ExtElem(L_, L_->local().inverse(v_));
}
ExtElem ExtElem::pow(std::uint64_t k) const { return ExtElem(L_, L_->ring().pow(v_, k)); }

// ---------------------------------------------------------------- norm, trace

std::vector<std::vector<Elem>> ext_mul_matrix(const EisensteinExt& L, const Elem& a) {
    const int e = L.degree();
    std::vector<std::vector<Elem>> m(e, std::vector<Elem>(e));
    Elem col = a;
    const Elem x = L.pi();
    for (int j = 0; j < e; ++j) {
        for (int i = 0; i < e; ++i) m[i][j] = L.coefficient(col, i);
        if (j + 1 < e) col = L.ring().mul(col, x);
    }
    return m;
}

Elem ext_norm(const EisensteinExt& L, const Elem& a, int* lost) {
    return local_determinant(L.base(), ext_mul_matrix(L, a), lost);
}

Elem ext_trace(const EisensteinExt& L, const Elem& a) {
    const auto m = ext_mul_matrix(L, a);
    Elem t = L.base().ring().zero();
    for (int i = 0; i < L.degree(); ++i) t = L.base().ring().add(t, m[i][i]);
    return t;
}

UnramElem ext_norm(const ExtElem& u) {
    const auto& L = *u.host();
    if (!L.base_field()) throw Unsupported("norm as UnramElem needs a plain unramified base");
    int lost = 0;
    const Elem n = ext_norm(L, u.value(), &lost);
    return UnramElem::from_ring(L.base_field(), n, L.precision() - lost);
}

UnramElem ext_trace(const ExtElem& u) {
    const auto& L = *u.host();
    if (!L.base_field()) throw Unsupported("trace as UnramElem needs a plain unramified base");
    return UnramElem::from_ring(L.base_field(), ext_trace(L, u.value()));
}

// ---------------------------------------------------------------- automorphisms

ExtAutomorphism ext_automorphism(const EisensteinExt& L, const Elem& image, int precision) {
    if (L.local().valuation(image) != 1) throw DomainError("image of pi_L must have valuation 1");
    std::vector<std::optional<Elem>> images(L.ring().num_levels());
    images.back() = image;
    return ExtAutomorphism{image, precision, TowerHom(L.ring(), images)};
}

namespace {

int different_bound(Int p, int e) { return e - 1 + e * log_p_exact(p, e); }

} // namespace

std::vector<ExtAutomorphism> ext_automorphisms(const EisensteinExt& L, Int budget) {
    const int target = L.local().max_valuation() - 2 * different_bound(L.p(), L.degree());
    if (target < 2) throw PrecisionError("precision too low to separate the roots of g", (2 - target) / L.degree() + 1);
    const auto roots = local_roots(L.local(), L.poly_in_ring(), target, budget);
    std::vector<ExtAutomorphism> out;
    const Elem x = L.pi();
    int id = -1, best = -1;
    for (const auto& r : roots) {
        out.push_back(ext_automorphism(L, r.value, r.precision));
        const int v = L.local().valuation(L.ring().sub(r.value, x));
        if (v > best) best = v, id = static_cast<int>(out.size()) - 1;
    }
    if (id < 0) throw CheckFailure("pi_L is not among the roots of its own polynomial");
    std::rotate(out.begin(), out.begin() + id, out.begin() + id + 1);
    return out;
}

int nearest_automorphism(const EisensteinExt& L, const std::vector<ExtAutomorphism>& autos, const Elem& y) {
    int best = -1, bv = -1;
    for (std::size_t j = 0; j < autos.size(); ++j) {
        const int v = L.local().valuation(L.ring().sub(y, autos[j].image));
        if (v > bv) bv = v, best = static_cast<int>(j);
    }
    return best;
}

Elem ext_norm_by_conjugates(const EisensteinExt& L, const std::vector<ExtAutomorphism>& autos, const Elem& a) {
    if (static_cast<int>(autos.size()) != L.degree()) throw DomainError("conjugate-product norm needs L/F Galois");
    Elem acc = L.ring().one();
    for (const auto& s : autos) acc = L.ring().mul(acc, s.apply(L, a));
    return L.coefficient(acc, 0);
}

CyclicStructure ext_is_cyclic(const EisensteinExt& L) {
    CyclicStructure cs;
    cs.autos = ext_automorphisms(L);
    const int k = static_cast<int>(cs.autos.size());
    cs.galois = k == L.degree();
    cs.table.assign(k, std::vector<int>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) cs.table[i][j] = nearest_automorphism(L, cs.autos, cs.autos[i].apply(L, cs.autos[j].image));
    if (!cs.galois) return cs;
    for (int g = 1; g < k; ++g) {
        int order = 1;
        for (int idx = g; idx != 0 && order <= k; idx = cs.table[g][idx]) ++order;
        if (order != k) continue;
        cs.cyclic = true;
        int idx = 0;
        for (int t = 0; t < k; ++t) {
            cs.powers.push_back(cs.autos[idx]);
            idx = cs.table[g][idx];
        }
        break;
    }
    return cs;
}

// ---------------------------------------------------------------- catalog

std::vector<mpz_class> cyclotomic_catalog_poly(Int p, int n) {
    if (p == 2 || !is_prime(p)) throw Unsupported("cyclotomic catalog needs an odd prime");
    if (n < 1 || n > 2) throw Unsupported("cyclotomic catalog covers n = 1, 2");
    const int P = static_cast<int>(ipow(p, n + 1));
    const int deg = static_cast<int>(ipow(p, n));
    // Arithmetic in Z[y]/(y^P - 1); the coefficients of g end up rational after
    // reduction modulo the cyclotomic polynomial.
    using Cyc = std::vector<mpz_class>;
    auto mul = [&](const Cyc& a, const Cyc& b) {
        Cyc r(P, 0);
        for (int i = 0; i < P; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < P; ++j)
                if (b[j] != 0) r[(i + j) % P] += a[i] * b[j];
        }
        return r;
    };
    std::vector<int> H;
    for (int a = 1; a < P; ++a) {
        if (a % p == 0) continue;
        Int x = 1;
        for (Int k = 0; k < p - 1; ++k) x = x * a % P;
        if (x == 1) H.push_back(a);
    }
    std::vector<Cyc> gx{Cyc(P, 0)}; // polynomial in x over Z[y]/(y^P-1)
    gx[0][0] = 1;
    for (int k = 0; k < deg; ++k) {
        const int b = 1 + static_cast<int>(p) * k;
        Cyc theta(P, 0);
        theta[0] = 1;
        for (int h : H) {
            Cyc f(P, 0);
            f[0] = 1;
            f[(h * b) % P] -= 1;
            theta = mul(theta, f);
        }
        std::vector<Cyc> next(gx.size() + 1, Cyc(P, 0));
        for (std::size_t i = 0; i < gx.size(); ++i) {
            for (int t = 0; t < P; ++t) next[i + 1][t] += gx[i][t];
            const Cyc prod = mul(gx[i], theta);
            for (int t = 0; t < P; ++t) next[i][t] -= prod[t];
        }
        gx = std::move(next);
    }
    // Reduce modulo Phi(y) = sum_{j<p} y^{j P/p}: y^{k + (p-1)P/p} = -sum_{j<p-1} y^{k + jP/p}.
    const int step = P / static_cast<int>(p);
    std::vector<mpz_class> out;
    for (auto c : gx) {
        for (int t = P - 1; t >= (static_cast<int>(p) - 1) * step; --t) {
            if (c[t] == 0) continue;
            const mpz_class v = c[t];
            c[t] = 0;
            const int k = t - (static_cast<int>(p) - 1) * step;
            for (int j = 0; j < static_cast<int>(p) - 1; ++j) c[k + j * step] -= v;
        }
        for (int t = 1; t < P; ++t)
            if (c[t] != 0) throw CheckFailure("catalog polynomial has a non-rational coefficient");
        out.push_back(c[0]);
    }
    return out;
}

ExtPtr cyclotomic_catalog(Int p, int n, int precision, int f) {
    return EisensteinExt::make_integral(FieldSpec::make(p, f), precision, cyclotomic_catalog_poly(p, n),
                                        f == 1 ? "catalog" : "base_change");
}

ExtPtr base_change_unramified(const EisensteinExt& L, int f_new) {
    if (!L.integer_poly()) throw Unsupported("base change needs a polynomial with integer coefficients");
    return EisensteinExt::make_integral(FieldSpec::make(L.p(), f_new), L.precision(), *L.integer_poly(), "base_change");
}

int default_ext_precision(Int p, int e, int n) {
    const int diff = different_bound(p, e);
    return n + 4 + (2 * diff + e - 1) / e;
}

// ---------------------------------------------------------------- text form

std::string poly_to_string(const std::vector<mpz_class>& g) {
    std::ostringstream os;
    bool first = true;
    for (int i = static_cast<int>(g.size()) - 1; i >= 0; --i) {
        const mpz_class& c = g[i];
        if (c == 0) continue;
        const mpz_class a = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (i == 0 || a != 1) {
            os << a.get_str();
            if (i > 0) os << "*";
        }
        if (i >= 1) os << "x";
        if (i >= 2) os << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

std::vector<mpz_class> parse_int_poly(const std::string& src) {
    std::string s;
    for (char ch : src)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw DomainError("empty polynomial");
    // Comma-separated coefficient list, lowest degree first.
    if (s.find('x') == std::string::npos && s.find(',') != std::string::npos) {
        std::vector<mpz_class> out;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            mpz_class v;
            if (tok.empty() || v.set_str(tok, 10) != 0) throw DomainError("malformed coefficient '" + tok + "'");
            out.push_back(v);
        }
        return out;
    }
    std::vector<mpz_class> out;
    std::size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
        } else if (i != 0) {
            throw DomainError("malformed polynomial near position " + std::to_string(i));
        }
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        mpz_class c = 1;
        const bool has_num = j > i;
        if (has_num) c = mpz_class(s.substr(i, j - i));
        i = j;
        int deg = 0;
        if (i < s.size() && s[i] == '*') {
            if (!has_num) throw DomainError("malformed polynomial near position " + std::to_string(i));
            ++i;
            if (i >= s.size() || s[i] != 'x') throw DomainError("expected x after *");
        }
        if (i < s.size() && s[i] == 'x') {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::size_t k = i;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == i) throw DomainError("missing exponent");
                deg = std::stoi(s.substr(i, k - i));
                i = k;
            }
        } else if (!has_num) {
            throw DomainError("malformed polynomial near position " + std::to_string(i));
        }
        if (static_cast<int>(out.size()) <= deg) out.resize(deg + 1, 0);
        out[deg] += sign * c;
    }
    while (out.size() > 1 && out.back() == 0) out.pop_back();
    return out;
}

} // namespace lcft
