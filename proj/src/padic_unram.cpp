#include "lcft/padic_unram.hpp"

#include "lcft/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace lcft {

namespace {

constexpr int kExactZeroValuation = 1 << 28;

Elem reduce_mod(const Elem& a, Int m) {
    Elem r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        Int x = a[i] % m;
        r[i] = x < 0 ? x + m : x;
    }
    return r;
}

} // namespace

// ---------------------------------------------------------------- UnramField

UnramField::UnramField(FieldSpecPtr spec, int precision) : spec_(std::move(spec)), N_(precision) {
    const int f = spec_->f;
    std::vector<TowerLevel> levels;
    if (f > 1) {
        TowerLevel lv;
        lv.degree = f;
        for (int i = 0; i < f; ++i) lv.modulus.push_back(Elem{spec_->modulus[i]});
        levels.push_back(lv);
    }
    local_ = LocalRing(TowerRing(spec_->p, precision, levels));
    const TowerRing& ring = local_.ring();
    if (f == 1) {
        frob_ = TowerHom(ring, {});
        return;
    }
    std::vector<Elem> m;
    for (int i = 0; i <= f; ++i) m.push_back(ring.from_int(spec_->modulus[i]));
    const Elem s = ring.variable(0);
    const Elem image = hensel_lift(local_, m, ring.pow(s, static_cast<std::uint64_t>(spec_->p)));
    frob_ = TowerHom(ring, {image});
}

std::shared_ptr<const UnramField> UnramField::make(FieldSpecPtr spec, int precision) {
    static std::mutex mu;
    static std::map<std::tuple<Int, std::vector<Int>, int>, std::shared_ptr<const UnramField>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(spec->p, spec->modulus, precision);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::shared_ptr<const UnramField> F(new UnramField(spec, precision));
    cache.emplace(key, F);
    return F;
}

Elem UnramField::residue_vec(const FqElem& a) const {
    if (!(*a.spec() == *spec_)) throw DomainError("residue from a different field");
    return Elem(a.coeffs().begin(), a.coeffs().end());
}

FqElem UnramField::to_fq(const Elem& residue) const { return FqElem(spec_, std::vector<Int>(residue.begin(), residue.end())); }

// ---------------------------------------------------------------- UnramElem

UnramElem UnramElem::zero(UnramFieldPtr F) {
    UnramElem r;
    r.F_ = std::move(F);
    r.zero_ = true;
    r.exact_ = true;
    r.v_ = kExactZeroValuation;
    return r;
}

UnramElem UnramElem::from_int(UnramFieldPtr F, Int c) {
    if (c == 0) return zero(std::move(F));
    const Elem a = F->ring().from_int(c);
    UnramElem r;
    r.F_ = std::move(F);
    r.normalize(a, 0, r.F_->precision());
    return r;
}

UnramElem UnramElem::from_ring(UnramFieldPtr F, const Elem& a, int abs_prec) {
    if (abs_prec < 0) abs_prec = F->precision();
    if (abs_prec > F->precision()) throw DomainError("absolute precision beyond the field precision");
    UnramElem r;
    r.F_ = std::move(F);
    r.normalize(a, 0, abs_prec);
    return r;
}

UnramElem UnramElem::from_coeffs(UnramFieldPtr F, const std::vector<Int>& coeffs) {
    if (static_cast<int>(coeffs.size()) > F->f()) throw DomainError("too many coefficients for O_F");
    Elem a = F->ring().zero();
    for (std::size_t i = 0; i < coeffs.size(); ++i) a[i] = F->ring().reduce_int(coeffs[i]);
    return from_ring(std::move(F), a);
}

void UnramElem::normalize(Elem s, int base_val, int digits) {
    const Int p = F_->p();
    if (digits <= 0) {
        zero_ = true;
        exact_ = false;
        v_ = base_val + std::max(digits, 0);
        rel_ = 0;
        u_.clear();
        return;
    }
    s = reduce_mod(s, ipow(p, digits));
    int w = digits;
    for (Int x : s) w = std::min(w, LocalRing::vp_int(x, p, digits));
    if (w >= digits) {
        zero_ = true;
        exact_ = false;
        v_ = base_val + digits;
        rel_ = 0;
        u_.clear();
        return;
    }
    const Int pw = ipow(p, w);
    for (auto& x : s) x /= pw;
    zero_ = false;
    exact_ = false;
    v_ = base_val + w;
    rel_ = digits - w;
    u_ = std::move(s);
}

bool UnramElem::is_principal_unit() const {
    if (!is_unit()) return false;
    const Int p = F_->p();
    if (u_[0] % p != 1) return false;
    for (std::size_t i = 1; i < u_.size(); ++i)
        if (u_[i] % p) return false;
    return true;
}

Elem UnramElem::to_ring(int k) const {
    const TowerRing& ring = F_->ring();
    if (k > F_->precision()) throw PrecisionError("requested more digits than the field carries", k - F_->precision());
    if (zero_) {
        if (!exact_ && v_ < k) throw PrecisionError("element known only modulo p^" + std::to_string(v_), k - v_);
        return ring.zero();
    }
    if (v_ < 0) throw DomainError("element is not integral");
    if (absolute_precision() < k) throw PrecisionError("element known to too few digits", k - absolute_precision());
    if (v_ >= k) return ring.zero();
    Elem r = ring.scale(u_, ipow(F_->p(), v_));
    return reduce_mod(r, ipow(F_->p(), k));
}

FqElem UnramElem::residue() const {
    if (zero_) return FqElem::zero(F_->spec());
    if (v_ < 0) throw DomainError("residue of a non-integral element");
    if (v_ > 0) return FqElem::zero(F_->spec());
    return F_->to_fq(F_->local().residue(u_));
}

std::vector<FqElem> UnramElem::teichmuller_digits(int count) const {
    const LocalRing& R = F_->local();
    const TowerRing& ring = R.ring();
    Elem x = to_ring(count);
    std::vector<FqElem> out;
    for (int i = 0; i < count; ++i) {
        const Elem d = R.residue(x);
        out.push_back(F_->to_fq(d));
        x = ring.sub(x, R.teichmuller(d));
        for (auto& c : x) c /= F_->p();
    }
    return out;
}

UnramElem UnramElem::operator+(const UnramElem& o) const {
    if (F_ != o.F_ && !(*F_->spec() == *o.F_->spec())) throw DomainError("elements of different fields");
    if (is_exact_zero()) return o;
    if (o.is_exact_zero()) return *this;
    const int abs = std::min(absolute_precision(), o.absolute_precision());
    const int v = std::min(v_, o.v_);
    UnramElem r;
    r.F_ = F_;
    if (abs <= v) {
        r.normalize({}, abs, 0);
        return r;
    }
    const TowerRing& ring = F_->ring();
    Elem s = ring.zero();
    if (!zero_) s = ring.add(s, ring.scale(u_, ipow(F_->p(), v_ - v)));
    if (!o.zero_) s = ring.add(s, ring.scale(o.u_, ipow(F_->p(), o.v_ - v)));
    r.normalize(s, v, abs - v);
    return r;
}

UnramElem UnramElem::operator-() const {
    if (zero_) return *this;
    UnramElem r = *this;
    r.u_ = reduce_mod(F_->ring().neg(u_), ipow(F_->p(), rel_));
    return r;
}

UnramElem UnramElem::operator-(const UnramElem& o) const { return *this + (-o); }

UnramElem UnramElem::operator*(const UnramElem& o) const {
    if (is_exact_zero() || o.is_exact_zero()) return zero(F_);
    UnramElem r;
    r.F_ = F_;
    if (zero_ || o.zero_) {
        r.normalize({}, v_ + o.v_, 0);
        return r;
    }
    const int rel = std::min(rel_, o.rel_);
    r.normalize(F_->ring().mul(u_, o.u_), v_ + o.v_, rel);
    return r;
}

UnramElem UnramElem::operator/(const UnramElem& o) const {
    if (o.is_exact_zero()) throw DomainError("division by zero");
    if (o.zero_) throw PrecisionError("division by an element that is zero to precision", 1);
    if (is_exact_zero()) return zero(F_);
    UnramElem r;
    r.F_ = F_;
    if (zero_) {
        r.normalize({}, v_ - o.v_, 0);
        return r;
    }
    const int rel = std::min(rel_, o.rel_);
    r.normalize(F_->ring().mul(u_, F_->local().inverse(o.u_)), v_ - o.v_, rel);
    return r;
}

UnramElem UnramElem::pow(Int e) const {
    if (e < 0) return from_int(F_, 1) / pow(-e);
    UnramElem r = from_int(F_, 1), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e > 0) b = b * b;
    }
    return r;
}

bool UnramElem::equals(const UnramElem& o) const {
    if (is_exact_zero() && o.is_exact_zero()) return true;
    return (*this - o).is_zero();
}

UnramElem UnramElem::with_absolute_precision(int k) const {
    if (is_exact_zero()) return *this;
    if (k >= absolute_precision()) return *this;
    UnramElem r;
    r.F_ = F_;
    if (zero_) {
        r.normalize({}, k, 0);
        return r;
    }
    r.normalize(u_, v_, k - v_);
    return r;
}

std::string UnramElem::to_string() const {
    std::ostringstream os;
    const Int p = F_->p();
    if (is_exact_zero()) return "0";
    if (zero_) {
        os << "O(" << p << "^" << v_ << ")";
        return os.str();
    }
    if (v_ != 0) os << p << "^" << v_ << "*";
    os << "[";
    for (std::size_t i = 0; i < u_.size(); ++i) os << (i ? "," : "") << u_[i];
    os << "] + O(" << p << "^" << absolute_precision() << ")";
    return os.str();
}

UnramElem qq_arith(const UnramElem& a, const UnramElem& b, QqOp op) {
    switch (op) {
    case QqOp::add: return a + b;
    case QqOp::sub: return a - b;
    case QqOp::mul: return a * b;
    case QqOp::div: return a / b;
    }
    throw DomainError("unknown operation");
}

UnramElem qq_teichmuller(const FqElem& a, UnramFieldPtr F) {
    if (a.is_zero()) return UnramElem::zero(F);
    const Elem t = F->local().teichmuller(F->residue_vec(a));
    return UnramElem::from_ring(std::move(F), t);
}

UnramElem qq_frobenius(const UnramElem& x) {
    if (x.is_zero()) return x;
    const auto& F = x.field();
    const LocalRing& R = F->local();
    const TowerRing& ring = R.ring();
    const UnramElem unit = UnramElem::from_ring(F, x.unit(), x.relative_precision());
    const auto digits = unit.teichmuller_digits(x.relative_precision());
    Elem acc = ring.zero();
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
        acc = ring.scale(acc, F->p());
        acc = ring.add(acc, R.teichmuller(F->residue_vec(digits[i].frobenius())));
    }
    UnramElem u = UnramElem::from_ring(F, acc, x.relative_precision());
    return u * UnramElem::from_int(F, F->p()).pow(x.valuation());
}

UnramElem unram_determinant(std::vector<std::vector<UnramElem>> m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) throw DomainError("empty matrix");
    const auto F = m[0][0].field();
    UnramElem det = UnramElem::from_int(F, 1);
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int r = k; r < n; ++r) {
            if (m[r][k].is_zero()) continue;
            if (piv < 0 || m[r][k].valuation() < m[piv][k].valuation()) piv = r;
        }
        if (piv < 0) {
            // Whole column is zero to precision.
            UnramElem col = m[k][k];
            for (int r = k; r < n; ++r)
                if (m[r][k].absolute_precision() < col.absolute_precision()) col = m[r][k];
            return det * col;
        }
        if (piv != k) {
            std::swap(m[piv], m[k]);
            det = -det;
        }
        det = det * m[k][k];
        for (int r = k + 1; r < n; ++r) {
            if (m[r][k].is_exact_zero()) continue;
            const UnramElem factor = m[r][k] / m[k][k];
            for (int c = k; c < n; ++c) m[r][c] = m[r][c] - factor * m[k][c];
        }
    }
    return det;
}

UnramElem poly_resultant(const UnramPoly& g, const UnramPoly& h) {
    if (g.empty() || h.empty()) throw DomainError("resultant with the zero polynomial");
    const int m = static_cast<int>(g.size()) - 1;
    const int n = static_cast<int>(h.size()) - 1;
    if (g.back().is_zero() || h.back().is_zero())
        throw PrecisionError("leading coefficient indistinguishable from zero", 1);
    const auto F = g[0].field();
    if (m == 0 && n == 0) return UnramElem::from_int(F, 1);
    const int size = m + n;
    std::vector<std::vector<UnramElem>> syl(size, std::vector<UnramElem>(size, UnramElem::zero(F)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) syl[i][i + j] = g[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) syl[n + i][i + j] = h[n - j];
    return unram_determinant(std::move(syl));
}

std::vector<UnramElem> hensel_roots(const UnramPoly& g) {
    if (g.size() < 2) throw DomainError("constant polynomial");
    const auto F0 = g[0].field();
    const UnramElem lc = g.back();
    if (!lc.is_unit()) throw Unsupported("root finding needs a unit leading coefficient");
    int prec = F0->precision();
    UnramPoly monic;
    for (const auto& c : g) {
        if (!c.is_zero() && c.valuation() < 0) throw Unsupported("root finding needs integral coefficients");
        monic.push_back(c / lc);
        prec = std::min(prec, monic.back().absolute_precision());
    }
    UnramPoly dg;
    for (std::size_t j = 1; j < monic.size(); ++j) dg.push_back(monic[j] * UnramElem::from_int(F0, static_cast<Int>(j)));
    const UnramElem disc = poly_resultant(monic, dg);
    if (disc.is_zero()) throw DomainError("polynomial is not squarefree to the working precision");
    const auto F = UnramField::make(F0->spec(), prec);
    std::vector<Elem> coeffs;
    for (const auto& c : monic) coeffs.push_back(c.to_ring(prec));
    std::vector<UnramElem> out;
    for (const auto& r : local_roots(F->local(), coeffs, 1)) {
        Elem full = F0->ring().zero();
        std::copy(r.value.begin(), r.value.end(), full.begin());
        out.push_back(UnramElem::from_ring(F0, full, std::min(r.precision, prec)));
    }
    return out;
}

UnramElem witt_to_int(const WittFq& a, UnramFieldPtr F) {
    const int n = a.length();
    if (n > F->precision()) throw PrecisionError("Witt length exceeds the field precision", n - F->precision());
    const LocalRing& R = F->local();
    const TowerRing& ring = R.ring();
    Elem acc = ring.zero();
    for (int i = n - 1; i >= 0; --i) {
        FqElem root = a[i];
        for (int k = 0; k < i; ++k) root = fq_pth_root(root);
        acc = ring.add(ring.scale(acc, F->p()), R.teichmuller(F->residue_vec(root)));
    }
    return UnramElem::from_ring(F, acc, n);
}

WittFq int_to_witt(const UnramElem& x, int n) {
    const auto digits = x.teichmuller_digits(n);
    std::vector<FqElem> comps;
    for (int i = 0; i < n; ++i) {
        FqElem c = digits[i];
        for (int k = 0; k < i; ++k) c = c.frobenius();
        comps.push_back(c);
    }
    return WittFq(std::move(comps));
}

} // namespace lcft
