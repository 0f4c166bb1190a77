#pragma once

// Truncated p-typical Witt vectors W_n(k) over a residue field k of
// characteristic p. Ring operations evaluate the universal sum and product
// polynomials, computed once over Z from the ghost identity.

#include "lcft/errors.hpp"
#include "lcft/int_poly.hpp"
#include "lcft/residue_field.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace lcft {

inline constexpr int kDefaultWittLengthBound = 4;

/// Universal Witt polynomials S_i, P_i in the variables X_0..X_{n-1}, Y_0..Y_{n-1}
/// (variable X_j has index j, Y_j has index n + j).
struct StructurePolys {
    struct ReducedTerm {
        IntPoly::Monomial exponents;
        Int coeff; // in 1..p-1
    };
    using Reduced = std::vector<ReducedTerm>;

    Int p = 0;
    int n = 0;
    std::vector<IntPoly> sum;
    std::vector<IntPoly> prod;
    std::vector<Reduced> sum_mod_p;
    std::vector<Reduced> prod_mod_p;
    std::vector<int> max_exponent; // per variable, over all reduced polynomials
};

/// Ghost component w_i(Z) = sum_{j<=i} p^j Z_j^{p^{i-j}}, where Z_j is the
/// polynomial at offset+j (as a variable) -- used for both X and Y blocks.
IntPoly ghost_component(Int p, int i, const std::vector<IntPoly>& z);

/// True iff w_i(S) = w_i(X) + w_i(Y) and w_i(P) = w_i(X) w_i(Y) for all i < n.
bool verify_ghost_identity(const StructurePolys& s);

/// Cached, thread-safe construction. Throws DomainError if n exceeds `bound`.
/// When the environment variable LCFT_CACHE_DIR is set, polynomials are read
/// from / written to that directory.
std::shared_ptr<const StructurePolys> witt_structure(Int p, int n, int bound = kDefaultWittLengthBound);

template <class K>
class WittVec {
public:
    WittVec() = default;
    explicit WittVec(std::vector<K> components) : c_(std::move(components)) {
        if (c_.empty()) throw DomainError("Witt vector of length 0");
    }

    static WittVec zero(const K& like, int n) { return WittVec(std::vector<K>(n, like.zero_like())); }
    static WittVec one(const K& like, int n) {
        std::vector<K> c(n, like.zero_like());
        c[0] = like.one_like();
        return WittVec(std::move(c));
    }

    int length() const { return static_cast<int>(c_.size()); }
    const K& operator[](int i) const { return c_[i]; }
    const std::vector<K>& components() const { return c_; }
    bool is_unit() const { return !c_[0].is_zero(); }
    Int characteristic() const { return c_[0].characteristic(); }

    bool operator==(const WittVec& o) const { return c_ == o.c_; }
    bool operator!=(const WittVec& o) const { return !(c_ == o.c_); }

private:
    std::vector<K> c_;
};

using WittFq = WittVec<FqElem>;
using WittRat = WittVec<RatFuncElem>;

enum class WittOp { add, sub, mul };

namespace detail {

template <class K>
K eval_reduced(const StructurePolys::Reduced& poly, const std::vector<std::vector<K>>& powers, const K& like) {
    K acc = like.zero_like();
    for (const auto& term : poly) {
        K mono = like.constant_like(term.coeff);
        for (std::size_t v = 0; v < term.exponents.size(); ++v) {
            const auto e = term.exponents[v];
            if (e) mono = mono * powers[v][e];
        }
        acc = acc + mono;
    }
    return acc;
}

template <class K>
std::vector<std::vector<K>> power_table(const StructurePolys& s, const WittVec<K>& a, const WittVec<K>& b) {
    const int n = s.n;
    std::vector<std::vector<K>> pw(2 * n);
    for (int v = 0; v < 2 * n; ++v) {
        const K& base = v < n ? a[v] : b[v - n];
        const int top = std::max(1, s.max_exponent[v]);
        pw[v].reserve(top + 1);
        pw[v].push_back(base.one_like());
        for (int e = 1; e <= top; ++e) pw[v].push_back(pw[v].back() * base);
    }
    return pw;
}

template <class K>
void check_compatible(const WittVec<K>& a, const WittVec<K>& b) {
    if (a.length() != b.length()) throw DomainError("Witt vectors of different lengths");
    if (a.characteristic() != b.characteristic()) throw DomainError("Witt vectors over different residue fields");
}

} // namespace detail

template <class K>
WittVec<K> witt_add(const WittVec<K>& a, const WittVec<K>& b) {
    detail::check_compatible(a, b);
    const auto s = witt_structure(a.characteristic(), a.length());
    const auto pw = detail::power_table(*s, a, b);
    std::vector<K> out;
    out.reserve(a.length());
    for (int i = 0; i < a.length(); ++i) out.push_back(detail::eval_reduced(s->sum_mod_p[i], pw, a[0]));
    return WittVec<K>(std::move(out));
}

template <class K>
WittVec<K> witt_mul(const WittVec<K>& a, const WittVec<K>& b) {
    detail::check_compatible(a, b);
    const auto s = witt_structure(a.characteristic(), a.length());
    const auto pw = detail::power_table(*s, a, b);
    std::vector<K> out;
    out.reserve(a.length());
    for (int i = 0; i < a.length(); ++i) out.push_back(detail::eval_reduced(s->prod_mod_p[i], pw, a[0]));
    return WittVec<K>(std::move(out));
}

/// Additive inverse, solved level by level from S_i(a, x) = 0. S_i is
/// X_i + Y_i plus terms in lower variables, so x_i = -(a_i + rest).
template <class K>
WittVec<K> witt_neg(const WittVec<K>& a) {
    const int n = a.length();
    const auto s = witt_structure(a.characteristic(), n);
    std::vector<K> x(n, a[0].zero_like());
    for (int i = 0; i < n; ++i) {
        const WittVec<K> partial{x};
        const auto pw = detail::power_table(*s, a, partial);
        // x_i is still zero, so this evaluates a_i + (terms in lower variables).
        x[i] = -detail::eval_reduced(s->sum_mod_p[i], pw, a[0]);
    }
    return WittVec<K>(std::move(x));
}

template <class K>
WittVec<K> witt_sub(const WittVec<K>& a, const WittVec<K>& b) {
    return witt_add(a, witt_neg(b));
}

template <class K>
WittVec<K> witt_ring_ops(const WittVec<K>& a, const WittVec<K>& b, WittOp op) {
    switch (op) {
    case WittOp::add: return witt_add(a, b);
    case WittOp::sub: return witt_sub(a, b);
    case WittOp::mul: return witt_mul(a, b);
    }
    throw DomainError("unknown Witt operation");
}

/// Componentwise p-th power (valid because the base has characteristic p).
template <class K>
WittVec<K> witt_frobenius(const WittVec<K>& a) {
    std::vector<K> out;
    out.reserve(a.length());
    for (const auto& c : a.components()) out.push_back(c.frobenius());
    return WittVec<K>(std::move(out));
}

template <class K>
WittVec<K> witt_verschiebung(const WittVec<K>& a) {
    std::vector<K> out(a.length(), a[0].zero_like());
    for (int i = 1; i < a.length(); ++i) out[i] = a[i - 1];
    return WittVec<K>(std::move(out));
}

/// The operator F - 1.
template <class K>
WittVec<K> witt_wp(const WittVec<K>& a) {
    return witt_sub(witt_frobenius(a), a);
}

template <class K>
WittVec<K> witt_teichmuller(const K& a, int n) {
    std::vector<K> out(n, a.zero_like());
    out[0] = a;
    return WittVec<K>(std::move(out));
}

/// m * a computed by repeated addition (double-and-add).
template <class K>
WittVec<K> witt_scalar(const WittVec<K>& a, Int m) {
    if (m < 0) return witt_neg(witt_scalar(a, -m));
    WittVec<K> acc = WittVec<K>::zero(a[0], a.length()), base = a;
    while (m > 0) {
        if (m & 1) acc = witt_add(acc, base);
        m >>= 1;
        if (m > 0) base = witt_add(base, base);
    }
    return acc;
}

inline constexpr Int kDefaultEnumerationBound = 1000000;

/// Calls fn on every vector of W_n(F_q) in index order (component 0 most
/// significant), optionally only the units (a_0 != 0).
void witt_for_each(const FieldSpecPtr& spec, int n, bool units_only, const std::function<void(const WittFq&)>& fn,
                   Int bound = kDefaultEnumerationBound);
std::vector<WittFq> witt_enumerate(const FieldSpecPtr& spec, int n, bool units_only = false,
                                   Int bound = kDefaultEnumerationBound);

} // namespace lcft
