#include "lcft/local_ring.hpp"

#include "lcft/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lcft {

namespace {

bool chunk_zero(const Int* a, int n) {
    for (int i = 0; i < n; ++i)
        if (a[i]) return false;
    return true;
}

} // namespace

// ---------------------------------------------------------------- TowerRing

TowerRing::TowerRing(Int p, int precision, std::vector<TowerLevel> levels)
    : p_(p), N_(precision), levels_(std::move(levels)) {
    if (!is_prime(p)) throw DomainError("tower ring needs a prime p");
    if (precision < 1) throw DomainError("precision must be positive");
    unsigned __int128 q = 1;
    for (int i = 0; i < precision; ++i) {
        q *= static_cast<unsigned __int128>(p);
        if (q > (static_cast<unsigned __int128>(1) << 62))
            throw Unsupported("p^N exceeds the 62-bit limb; lower the precision");
    }
    q_ = static_cast<Int>(q);
    sizes_.assign(1, 1);
    for (auto& lv : levels_) {
        if (lv.degree < 1 || static_cast<int>(lv.modulus.size()) != lv.degree)
            throw DomainError("tower level modulus has the wrong number of coefficients");
        for (auto& c : lv.modulus) {
            if (static_cast<int>(c.size()) != sizes_.back()) throw DomainError("tower modulus coefficient has the wrong size");
            for (auto& x : c) x = reduce_int(x);
        }
        sizes_.push_back(sizes_.back() * lv.degree);
    }
}

Int TowerRing::reduce_int(Int a) const {
    a %= q_;
    return a < 0 ? a + q_ : a;
}

Elem TowerRing::one() const { return from_int(1); }

Elem TowerRing::from_int(Int c) const {
    Elem r = zero();
    r[0] = reduce_int(c);
    return r;
}

Elem TowerRing::variable(int l) const {
    Elem r = zero();
    if (levels_.at(l).degree == 1) {
        // x = -m_0 lives in the level below.
        const auto& m0 = levels_[l].modulus[0];
        for (std::size_t i = 0; i < m0.size(); ++i) r[i] = reduce_int(-m0[i]);
    } else {
        r[sizes_[l]] = 1;
    }
    return r;
}

Elem TowerRing::embed(const Elem& sub) const {
    Elem r = zero();
    if (sub.size() > r.size()) throw DomainError("cannot embed a larger element");
    std::copy(sub.begin(), sub.end(), r.begin());
    return r;
}

Elem TowerRing::add(const Elem& a, const Elem& b) const {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Int s = a[i] + b[i];
        r[i] = s >= q_ ? s - q_ : s;
    }
    return r;
}

Elem TowerRing::sub(const Elem& a, const Elem& b) const {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Int s = a[i] - b[i];
        r[i] = s < 0 ? s + q_ : s;
    }
    return r;
}

Elem TowerRing::neg(const Elem& a) const {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] ? q_ - a[i] : 0;
    return r;
}

Elem TowerRing::scale(const Elem& a, Int c) const {
    c = reduce_int(c);
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = mulmod(a[i], c);
    return r;
}

bool TowerRing::is_zero(const Elem& a) const { return chunk_zero(a.data(), static_cast<int>(a.size())); }

void TowerRing::mul_raw(int nlev, const Int* a, const Int* b, Int* out) const {
    if (nlev == 0) {
        out[0] = mulmod(a[0], b[0]);
        return;
    }
    const auto& lv = levels_[nlev - 1];
    const int D = lv.degree;
    const int S = sizes_[nlev - 1];
    if (D == 1) {
        mul_raw(nlev - 1, a, b, out);
        return;
    }
    std::vector<Int> tmp(static_cast<std::size_t>(2 * D - 1) * S, 0);
    if (S == 1) {
        for (int i = 0; i < D; ++i) {
            if (!a[i]) continue;
            for (int j = 0; j < D; ++j) {
                if (!b[j]) continue;
                Int& t = tmp[i + j];
                t += mulmod(a[i], b[j]);
                if (t >= q_) t -= q_;
            }
        }
        for (int k = 2 * D - 2; k >= D; --k) {
            const Int c = tmp[k];
            if (!c) continue;
            for (int i = 0; i < D; ++i) {
                Int& t = tmp[k - D + i];
                t -= mulmod(c, lv.modulus[i][0]);
                if (t < 0) t += q_;
            }
        }
        std::copy(tmp.begin(), tmp.begin() + D, out);
        return;
    }
    std::vector<Int> prod(S);
    std::vector<bool> bz(D);
    for (int j = 0; j < D; ++j) bz[j] = chunk_zero(b + j * S, S);
    for (int i = 0; i < D; ++i) {
        if (chunk_zero(a + i * S, S)) continue;
        for (int j = 0; j < D; ++j) {
            if (bz[j]) continue;
            mul_raw(nlev - 1, a + i * S, b + j * S, prod.data());
            Int* t = tmp.data() + static_cast<std::size_t>(i + j) * S;
            for (int s = 0; s < S; ++s) {
                t[s] += prod[s];
                if (t[s] >= q_) t[s] -= q_;
            }
        }
    }
    for (int k = 2 * D - 2; k >= D; --k) {
        const Int* c = tmp.data() + static_cast<std::size_t>(k) * S;
        if (chunk_zero(c, S)) continue;
        std::vector<Int> ck(c, c + S);
        for (int i = 0; i < D; ++i) {
            if (chunk_zero(lv.modulus[i].data(), S)) continue;
            mul_raw(nlev - 1, ck.data(), lv.modulus[i].data(), prod.data());
            Int* t = tmp.data() + static_cast<std::size_t>(k - D + i) * S;
            for (int s = 0; s < S; ++s) {
                t[s] -= prod[s];
                if (t[s] < 0) t[s] += q_;
            }
        }
    }
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(D) * S, out);
}

Elem TowerRing::mul(const Elem& a, const Elem& b) const {
    Elem r(size());
    mul_raw(num_levels(), a.data(), b.data(), r.data());
    return r;
}

Elem TowerRing::mul_sub(int nlev, const Elem& a, const Elem& b) const {
    Elem r(sizes_[nlev]);
    mul_raw(nlev, a.data(), b.data(), r.data());
    return r;
}

Elem TowerRing::mul_by_sub(const Elem& a, int nlev, const Elem& sub) const {
    const int S = sizes_[nlev];
    Elem r(a.size());
    if (nlev == 0) {
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = mulmod(a[i], sub[0]);
        return r;
    }
    for (std::size_t off = 0; off < a.size(); off += S)
        if (!chunk_zero(a.data() + off, S)) mul_raw(nlev, a.data() + off, sub.data(), r.data() + off);
    return r;
}

Elem TowerRing::pow(const Elem& a, std::uint64_t e) const {
    Elem r = one(), b = a;
    while (e > 0) {
        if (e & 1u) r = mul(r, b);
        e >>= 1u;
        if (e > 0) b = mul(b, b);
    }
    return r;
}

TowerRing TowerRing::with_precision(int precision) const {
    if (precision > N_) throw DomainError("cannot raise the precision of an existing tower");
    return TowerRing(p_, precision, levels_);
}

Elem TowerRing::reduce_to(const Elem& a, const TowerRing& lower) const {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] % lower.modulus_int();
    return r;
}

// ---------------------------------------------------------------- TowerHom

TowerHom::TowerHom(const TowerRing& ring, std::vector<std::optional<Elem>> images) : images_(std::move(images)) {
    images_.resize(ring.num_levels());
    powers_.resize(ring.num_levels());
    for (int l = 0; l < ring.num_levels(); ++l) {
        if (!images_[l]) continue;
        const int sz = ring.size_at(l + 1);
        if (static_cast<int>(images_[l]->size()) != sz) {
            // Accept full-ring images whose high part vanishes.
            Elem img = *images_[l];
            for (std::size_t i = sz; i < img.size(); ++i)
                if (img[i]) throw DomainError("generator image leaves its level");
            img.resize(sz);
            images_[l] = img;
        }
        const int D = ring.level(l).degree;
        auto& pw = powers_[l];
        Elem one(sz, 0);
        one[0] = 1;
        pw.push_back(one);
        for (int i = 1; i < D; ++i) pw.push_back(ring.mul_sub(l + 1, pw.back(), *images_[l]));
    }
}

void TowerHom::apply_level(const TowerRing& ring, int nlev, const Int* a, Int* out) const {
    if (nlev == 0) {
        out[0] = a[0];
        return;
    }
    const int l = nlev - 1;
    const int D = ring.level(l).degree;
    const int S = ring.size_at(l);
    if (!images_[l]) {
        for (int i = 0; i < D; ++i) apply_level(ring, nlev - 1, a + i * S, out + i * S);
        return;
    }
    std::fill(out, out + static_cast<std::ptrdiff_t>(D) * S, 0);
    std::vector<Int> c(S), prod(S);
    const Int q = ring.modulus_int();
    for (int i = 0; i < D; ++i) {
        if (chunk_zero(a + i * S, S)) continue;
        apply_level(ring, nlev - 1, a + i * S, c.data());
        const Elem& pw = powers_[l][i];
        for (int j = 0; j < D; ++j) {
            if (chunk_zero(pw.data() + j * S, S)) continue;
            if (S == 1) prod[0] = ring.mulmod(c[0], pw[j]);
            else ring.mul_raw(nlev - 1, c.data(), pw.data() + j * S, prod.data());
            Int* t = out + j * S;
            for (int s = 0; s < S; ++s) {
                t[s] += prod[s];
                if (t[s] >= q) t[s] -= q;
            }
        }
    }
}

Elem TowerHom::apply(const TowerRing& ring, const Elem& a) const {
    Elem r(a.size());
    apply_level(ring, ring.num_levels(), a.data(), r.data());
    return r;
}

TowerHom compose(const TowerRing& ring, const TowerHom& g, const TowerHom& f) {
    std::vector<std::optional<Elem>> images(ring.num_levels());
    for (int l = 0; l < ring.num_levels(); ++l) {
        const auto& fi = f.images()[l];
        const auto& gi = g.images()[l];
        if (!fi) {
            images[l] = gi;
            continue;
        }
        Elem img = g.apply(ring, ring.embed(*fi));
        img.resize(ring.size_at(l + 1));
        images[l] = img;
    }
    return TowerHom(ring, std::move(images));
}

// ---------------------------------------------------------------- LocalRing

LocalRing::LocalRing(TowerRing ring) : ring_(std::move(ring)), ramified_(false), e_(1) { init_common(); }

LocalRing::LocalRing(TowerRing ring, Elem eps) : ring_(std::move(ring)), ramified_(true), eps_(std::move(eps)) {
    if (ring_.num_levels() == 0) throw DomainError("ramified local ring needs an Eisenstein level");
    e_ = ring_.level(ring_.num_levels() - 1).degree;
    init_common();
    if (!is_unit(eps_)) throw DomainError("x^e / p must be a unit for an Eisenstein level");
    const Elem eps_inv = inverse(eps_);
    residue_eps_inv_ = residue(eps_inv);
    p_over_pi_ = ring_.mul(ring_.pow(uniformizer(), static_cast<std::uint64_t>(e_ - 1)), eps_inv);
}

void LocalRing::init_common() {
    const int ul = unram_levels();
    R_ = ring_.size_at(ul);
    std::vector<TowerLevel> lv(ring_.levels().begin(), ring_.levels().begin() + ul);
    unram_ring_ = TowerRing(ring_.p(), ring_.precision(), lv);
    residue_ring_ = TowerRing(ring_.p(), 1, lv);
}

Elem LocalRing::uniformizer() const {
    if (!ramified_) return ring_.from_int(p());
    return ring_.variable(ring_.num_levels() - 1);
}

int LocalRing::vp_int(Int a, Int p, int cap) {
    if (a == 0) return cap;
    int v = 0;
    while (a % p == 0 && v < cap) {
        a /= p;
        ++v;
    }
    return v;
}

int LocalRing::valuation(const Elem& a) const {
    const int N = precision();
    if (!ramified_) {
        int v = N;
        for (Int x : a) v = std::min(v, vp_int(x, p(), N));
        return v;
    }
    int best = e_ * N;
    for (int i = 0; i < e_; ++i) {
        int v = N;
        for (int s = 0; s < R_; ++s) v = std::min(v, vp_int(a[i * R_ + s], p(), N));
        if (v < N) best = std::min(best, e_ * v + i);
    }
    return best;
}

Elem LocalRing::leading_digit(const Elem& a, int j) const {
    Elem r(R_);
    const int k = ramified_ ? j / e_ : j;
    const int i0 = ramified_ ? j % e_ : 0;
    if (k >= precision()) throw PrecisionError("digit beyond working precision", k - precision() + 1);
    const Int pk = ipow(p(), k);
    for (int s = 0; s < R_; ++s) {
        const Int x = a[i0 * R_ + s];
        if (x % pk != 0) throw DomainError("leading digit requested below the valuation");
        r[s] = (x / pk) % p();
    }
    if (ramified_ && k > 0) {
        Elem f(R_, 0);
        f[0] = 1;
        for (int t = 0; t < k; ++t) f = residue_ring_.mul(f, residue_eps_inv_);
        r = residue_ring_.mul(r, f);
    }
    return r;
}

Elem LocalRing::residue(const Elem& a) const { return leading_digit(a, 0); }

Elem LocalRing::teichmuller(const Elem& residue) const {
    Elem x(residue.begin(), residue.end());
    const std::uint64_t Q = static_cast<std::uint64_t>(residue_order());
    for (int it = 0; it <= precision() + 1; ++it) {
        Elem y = unram_ring_.pow(x, Q);
        if (y == x) return ring_.embed(x);
        x = std::move(y);
    }
    throw CheckFailure("Teichmuller iteration did not stabilize");
}

Elem LocalRing::residue_from_index(Int index) const {
    Elem r(R_);
    for (int s = R_ - 1; s >= 0; --s) {
        r[s] = index % p();
        index /= p();
    }
    return r;
}

Int LocalRing::residue_index(const Elem& residue) const {
    Int idx = 0;
    for (int s = 0; s < R_; ++s) idx = idx * p() + residue[s];
    return idx;
}

Elem LocalRing::teichmuller_index(Int index) const { return teichmuller(residue_from_index(index)); }

bool LocalRing::is_unit(const Elem& a) const {
    for (int s = 0; s < R_; ++s)
        if (a[s] % p() != 0) return true;
    return false;
}

Elem LocalRing::inverse(const Elem& u) const {
    if (!is_unit(u)) throw DomainError("inverse of a non-unit");
    const Elem r = residue(u);
    const Elem rinv = residue_ring_.pow(r, static_cast<std::uint64_t>(residue_order() - 2));
    Elem x = ring_.embed(rinv);
    const Elem two = ring_.from_int(2);
    int iters = 2;
    for (int cap = 1; cap < max_valuation(); cap *= 2) ++iters;
    for (int it = 0; it < iters; ++it) {
        const Elem ux = ring_.mul(u, x);
        if (ux == ring_.one()) return x;
        x = ring_.mul(x, ring_.sub(two, ux));
    }
    if (ring_.mul(u, x) != ring_.one()) throw CheckFailure("Newton inversion did not converge");
    return x;
}

Elem LocalRing::div_by_pi(const Elem& a) const {
    if (valuation(a) < 1) throw DomainError("division by the uniformizer of a unit");
    if (!ramified_) {
        Elem r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] / p();
        return r;
    }
    Elem r(a.size(), 0);
    std::copy(a.begin() + R_, a.end(), r.begin());
    Elem c0(R_);
    for (int s = 0; s < R_; ++s) c0[s] = a[s] / p();
    return ring_.add(r, ring_.mul_by_sub(p_over_pi_, unram_levels(), c0));
}

Elem LocalRing::pi_power(int k) const { return ring_.pow(uniformizer(), static_cast<std::uint64_t>(k)); }

LocalRing LocalRing::with_precision(int precision) const {
    TowerRing lower = ring_.with_precision(precision);
    if (!ramified_) return LocalRing(lower);
    return LocalRing(lower, ring_.reduce_to(eps_, lower));
}

// ---------------------------------------------------------------- algorithms

Elem poly_eval(const TowerRing& ring, const std::vector<Elem>& coeffs, const Elem& x) {
    Elem acc = ring.zero();
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = ring.add(ring.mul(acc, x), *it);
    return acc;
}

Elem local_determinant(const LocalRing& R, std::vector<std::vector<Elem>> m, int* lost_digits) {
    if (R.ramified()) throw Unsupported("determinants are computed over unramified rings");
    const TowerRing& ring = R.ring();
    const int n = static_cast<int>(m.size());
    const int N = R.precision();
    int lost = 0;
    Elem det = ring.one();
    for (int k = 0; k < n; ++k) {
        int piv = -1, best = N;
        for (int r = k; r < n; ++r) {
            const int v = R.valuation(m[r][k]);
            if (v < best) best = v, piv = r;
        }
        if (piv < 0) {
            if (lost_digits) *lost_digits = lost;
            return ring.zero();
        }
        if (piv != k) {
            std::swap(m[piv], m[k]);
            det = ring.neg(det);
        }
        det = ring.mul(det, m[k][k]);
        // pivot = p^best * u
        Elem u = m[k][k];
        for (auto& x : u) x /= ipow(R.p(), best);
        const Elem uinv = R.inverse(u);
        bool used = false;
        for (int r = k + 1; r < n; ++r) {
            if (ring.is_zero(m[r][k])) continue;
            Elem factor = m[r][k];
            for (auto& x : factor) x /= ipow(R.p(), best);
            factor = ring.mul(factor, uinv);
            for (int c = k; c < n; ++c) m[r][c] = ring.sub(m[r][c], ring.mul(factor, m[k][c]));
            used = true;
        }
        if (used) lost += best;
    }
    if (lost_digits) *lost_digits = lost;
    return det;
}

namespace {

using Poly = std::vector<Elem>;

Poly taylor_shift(const TowerRing& ring, const Poly& f, const Elem& c, const Elem& pi) {
    // f(c + pi Y) by Horner on polynomials in Y.
    Poly acc;
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        Poly next(acc.size() + 1, ring.zero());
        for (std::size_t j = 0; j < acc.size(); ++j) {
            next[j] = ring.add(next[j], ring.mul(acc[j], c));
            next[j + 1] = ring.add(next[j + 1], ring.mul(acc[j], pi));
        }
        next[0] = ring.add(next[0], *it);
        acc = std::move(next);
    }
    return acc;
}

Poly derivative(const TowerRing& ring, const Poly& f) {
    Poly d;
    for (std::size_t j = 1; j < f.size(); ++j) d.push_back(ring.scale(f[j], static_cast<Int>(j)));
    if (d.empty()) d.push_back(ring.zero());
    return d;
}

struct RootSearch {
    const LocalRing& R;
    int target;
    Int budget;
    std::vector<LocalRoot> out;

    Elem residue_eval(const std::vector<Elem>& fbar, const Elem& a) const {
        const TowerRing& rr = R.residue_ring();
        Elem acc(R.residue_dim(), 0);
        for (auto it = fbar.rbegin(); it != fbar.rend(); ++it) acc = rr.add(rr.mul(acc, a), *it);
        return acc;
    }

    static bool residue_zero(const Elem& a) {
        for (Int x : a)
            if (x) return false;
        return true;
    }

    // Roots X = prefix + pi^k Y of the original polynomial correspond to
    // roots Y in O of f, whose coefficients are known modulo pi^prec.
    void run(Poly f, int prec, const Elem& prefix, int k) {
        const TowerRing& ring = R.ring();
        int v = prec;
        for (const auto& c : f) v = std::min(v, R.valuation(c));
        if (v >= prec) {
            if (k >= target) {
                out.push_back({prefix, k});
                return;
            }
            throw PrecisionError("roots cannot be separated at this precision", target - k);
        }
        for (auto& c : f)
            for (int t = 0; t < v; ++t) c = R.div_by_pi(c);
        prec -= v;

        std::vector<Elem> fbar, dbar;
        for (const auto& c : f) fbar.push_back(R.residue(c));
        const Poly df = derivative(ring, f);
        for (const auto& c : df) dbar.push_back(R.residue(c));

        const Int Q = R.residue_order();
        if (Q > budget) throw BudgetError("residue field too large for root enumeration");
        const Elem pi = R.uniformizer();
        for (Int idx = 0; idx < Q; ++idx) {
            const Elem a = R.residue_from_index(idx);
            if (!residue_zero(residue_eval(fbar, a))) continue;
            const Elem lift = R.teichmuller(a);
            if (!residue_zero(residue_eval(dbar, a))) {
                // Simple residue root: Newton on f converges to the unique root.
                Elem y = lift;
                const int iters = 2 + static_cast<int>(std::log2(static_cast<double>(std::max(2, prec)))) + 1;
                for (int it = 0; it < iters + 2; ++it) {
                    const Elem fy = poly_eval(ring, f, y);
                    if (R.valuation(fy) >= prec) break;
                    y = ring.sub(y, ring.mul(fy, R.inverse(poly_eval(ring, df, y))));
                }
                const Elem root = ring.add(prefix, ring.mul(R.pi_power(k), y));
                const int got = k + prec;
                if (got < target) throw PrecisionError("root known to too few digits", target - got);
                out.push_back({root, got});
            } else {
                run(taylor_shift(ring, f, lift, pi), prec, ring.add(prefix, ring.mul(R.pi_power(k), lift)), k + 1);
            }
        }
    }
};

} // namespace

std::vector<LocalRoot> local_roots(const LocalRing& R, const std::vector<Elem>& coeffs, int target, Int budget) {
    if (coeffs.empty()) throw DomainError("zero polynomial has no well-defined roots");
    RootSearch s{R, target, budget, {}};
    s.run(coeffs, R.max_valuation(), R.ring().zero(), 0);
    return s.out;
}

Elem hensel_lift(const LocalRing& R, const std::vector<Elem>& coeffs, const Elem& seed) {
    const TowerRing& ring = R.ring();
    const Poly df = derivative(ring, coeffs);
    Elem y = seed;
    if (R.valuation(poly_eval(ring, coeffs, y)) < 1) throw DomainError("Hensel seed is not a residue root");
    for (int it = 0; it < 64; ++it) {
        const Elem fy = poly_eval(ring, coeffs, y);
        if (ring.is_zero(fy)) return y;
        const Elem d = poly_eval(ring, df, y);
        if (!R.is_unit(d)) throw DomainError("Hensel seed is a multiple residue root");
        y = ring.sub(y, ring.mul(fy, R.inverse(d)));
    }
    throw CheckFailure("Hensel lifting did not converge");
}

} // namespace lcft
