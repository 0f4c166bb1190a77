#include "lcft/unit_group.hpp"

#include "lcft/errors.hpp"

#include <map>
#include <mutex>

namespace lcft {

// ---------------------------------------------------------------- Artin-Hasse

int ah_degree_for(Int p, int budget) {
    Int d = 1;
    while (d <= budget) d *= p;
    return static_cast<int>(d);
}

std::shared_ptr<const AHSeries> ah_series(Int p, int D, int N) {
    static std::mutex mu;
    static std::map<std::tuple<Int, int, int>, std::shared_ptr<const AHSeries>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p, D, N);
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    auto s = std::make_shared<AHSeries>();
    s->p = p;
    s->D = D;
    s->N = N;
    // E'/E = sum_i X^{p^i - 1}, so k c_k = sum_{p^i <= k} c_{k - p^i}.
    s->exact.assign(D + 1, mpq_class(0));
    s->exact[0] = 1;
    for (int k = 1; k <= D; ++k) {
        mpq_class acc = 0;
        for (Int pi = 1; pi <= k; pi *= p) acc += s->exact[k - pi];
        acc /= k;
        acc.canonicalize();
        s->exact[k] = acc;
    }
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(N));
    const mpz_class mp(static_cast<long>(p));
    for (int k = 0; k <= D; ++k) {
        const mpz_class den = s->exact[k].get_den();
        if (den % mp == 0) throw CheckFailure("Artin-Hasse coefficient " + std::to_string(k) + " is not p-integral");
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
        mpz_class c = s->exact[k].get_num() * inv % mod;
        if (c < 0) c += mod;
        s->coeffs.push_back(static_cast<Int>(c.get_si()));
    }
    cache.emplace(key, s);
    return s;
}

Elem ah_eval(const LocalRing& R, const Elem& x) {
    if (R.valuation(x) < 1) throw DomainError("Artin-Hasse series evaluated outside the maximal ideal");
    const int D = ah_degree_for(R.p(), R.max_valuation());
    const auto s = ah_series(R.p(), D, R.precision());
    const TowerRing& ring = R.ring();
    Elem acc = ring.zero();
    for (int k = D; k >= 0; --k) acc = ring.add(ring.mul(acc, x), ring.from_int(s->coeffs[k]));
    return acc;
}

// ---------------------------------------------------------------- E_{n,pi}

EnPiMap::EnPiMap(UnramFieldPtr F, int n, Elem pi) : F_(std::move(F)), n_(n), pi_(std::move(pi)) {
    const LocalRing& R = F_->local();
    if (R.valuation(pi_) != 1) throw DomainError("pi must be a uniformizer");
    Elem u0 = pi_;
    for (auto& c : u0) c /= F_->p();
    res_inv_ = R.residue(R.inverse(u0));
}

Elem EnPiMap::apply(const std::vector<Elem>& lifts) const {
    if (static_cast<int>(lifts.size()) != n_) throw DomainError("wrong number of lifts");
    const LocalRing& R = F_->local();
    const TowerRing& ring = R.ring();
    Elem acc = ring.one();
    for (int i = 0; i < n_; ++i) {
        if (ring.is_zero(lifts[i])) continue;
        const Elem y = ring.mul(ring.pow(lifts[i], static_cast<std::uint64_t>(ipow(F_->p(), n_ - i))), pi_);
        const Elem e = ring.pow(ah_eval(R, y), static_cast<std::uint64_t>(ipow(F_->p(), i)));
        acc = ring.mul(acc, e);
    }
    return acc;
}

Elem EnPiMap::apply(const WittFq& a) const {
    if (a.length() != n_) throw DomainError("Witt vector length does not match n");
    std::vector<Elem> lifts;
    for (const auto& c : a.components()) lifts.push_back(F_->local().teichmuller(F_->residue_vec(c)));
    return apply(lifts);
}

WittFq EnPiMap::peel(const Elem& u_in) const {
    const LocalRing& R = F_->local();
    const TowerRing& ring = R.ring();
    if (F_->p() == 2) throw Unsupported("digit peeling of E_{n,pi} needs odd p");
    if (R.residue(u_in) != R.residue(ring.one())) throw DomainError("not a principal unit");
    if (R.precision() < n_ + 1) throw PrecisionError("peeling needs precision n + 1", n_ + 1 - R.precision());
    Elem u = u_in;
    std::vector<FqElem> comps;
    for (int i = 0; i < n_; ++i) {
        const Elem d = R.residue_ring().mul(R.leading_digit(ring.sub(u, ring.one()), i + 1), res_inv_);
        FqElem a = F_->to_fq(d);
        for (int k = 0; k < n_ - i; ++k) a = fq_pth_root(a);
        comps.push_back(a);
        if (a.is_zero()) continue;
        std::vector<Elem> lifts(n_, ring.zero());
        lifts[i] = R.teichmuller(F_->residue_vec(a));
        u = ring.mul(u, R.inverse(apply(lifts)));
    }
    return WittFq(std::move(comps));
}

int power_level(Int p, int e, int n) { return e / static_cast<int>(p - 1) + 1 + e * n; }

// ---------------------------------------------------------------- quotients

std::shared_ptr<const UnitQuotient> UnitQuotient::filtered(const LocalRing& R, int m, int r) {
    if (m < 1) throw DomainError("level must be at least 1");
    if (R.max_valuation() < m) throw PrecisionError("ring precision below the quotient level", m - R.max_valuation());
    std::shared_ptr<UnitQuotient> Q(new UnitQuotient());
    Q->kind_ = Kind::filtered;
    Q->p_ = R.p();
    Q->r_ = r;
    Q->m_ = m;
    Q->R_ = R;
    const int Rd = R.residue_dim();
    Q->K_ = (m - 1) * Rd;
    const TowerRing& ring = R.ring();
    for (int j = 1; j < m; ++j) {
        const Elem pij = R.pi_power(j);
        for (int b = 0; b < Rd; ++b) {
            Elem e(Rd, 0);
            e[b] = 1;
            const Elem g = ring.add(ring.one(), ring.mul(R.teichmuller(e), pij));
            Q->gens_.push_back(g);
            const Elem ginv = R.inverse(g);
            std::vector<Elem> pw{ring.one()};
            for (Int c = 1; c < R.p(); ++c) pw.push_back(ring.mul(pw.back(), ginv));
            Q->inv_powers_.push_back(std::move(pw));
        }
    }
    std::vector<ZVec> rels;
    for (int g = 0; g < Q->K_; ++g) {
        ZVec row = Q->coords(ring.pow(Q->gens_[g], static_cast<std::uint64_t>(R.p())));
        for (auto& x : row) x = -x;
        row[g] += R.p();
        rels.push_back(std::move(row));
    }
    Q->relations_ = HowellForm(R.p(), r, Q->K_, std::move(rels));
    return Q;
}

ZVec UnitQuotient::coords(const Elem& u) const {
    if (kind_ == Kind::witt) {
        const WittFq a = en_->peel(u);
        const UnramElem x = witt_to_int(a, en_->field());
        const Elem e = x.to_ring(r_);
        return ZVec(e.begin(), e.end());
    }
    const TowerRing& ring = R_.ring();
    const int Rd = R_.residue_dim();
    ZVec out(K_, 0);
    Elem x = u;
    if (R_.residue(x) != R_.residue(ring.one())) throw DomainError("not a principal unit");
    for (int j = 1; j < m_; ++j) {
        const Elem d = R_.leading_digit(ring.sub(x, ring.one()), j);
        for (int b = 0; b < Rd; ++b) {
            if (!d[b]) continue;
            const int g = (j - 1) * Rd + b;
            out[g] = d[b];
            x = ring.mul(x, inv_powers_[g][d[b]]);
        }
    }
    return out;
}

// ---------------------------------------------------------------- subgroups

UnitSubgroup::UnitSubgroup(UnitQuotientPtr Q, const std::vector<ZVec>& generators) : Q_(std::move(Q)) {
    std::vector<ZVec> rows = generators;
    for (const auto& r : Q_->relations().rows()) rows.push_back(r);
    form_ = HowellForm(Q_->p(), Q_->r(), Q_->rank(), std::move(rows));
}

UnitSubgroup UnitSubgroup::full(UnitQuotientPtr Q) {
    std::vector<ZVec> e;
    for (int i = 0; i < Q->rank(); ++i) {
        ZVec v(Q->rank(), 0);
        v[i] = 1;
        e.push_back(v);
    }
    return UnitSubgroup(std::move(Q), e);
}

Int UnitSubgroup::index_in_full() const { return ipow(Q_->p(), log_index()); }

void UnitSubgroup::check_same(const UnitSubgroup& o) const {
    if (Q_ != o.Q_) throw DomainError("subgroups of different unit quotients");
}

bool UnitSubgroup::contains(const UnitSubgroup& o) const {
    check_same(o);
    return form_.contains(o.form_);
}

bool UnitSubgroup::operator==(const UnitSubgroup& o) const {
    check_same(o);
    return form_ == o.form_;
}

UnitSubgroup UnitSubgroup::operator+(const UnitSubgroup& o) const {
    check_same(o);
    std::vector<ZVec> rows = form_.rows();
    for (const auto& r : o.form_.rows()) rows.push_back(r);
    return UnitSubgroup(Q_, rows);
}

int UnitSubgroup::log_index_of_intersection(const UnitSubgroup& o) const {
    const int meet = log_order() + o.log_order() - (*this + o).log_order();
    return Q_->log_order() - meet;
}

UnitSubgroup subgroup_from_generators(UnitQuotientPtr Q, const std::vector<UnitClass>& classes) {
    std::vector<ZVec> gens;
    for (const auto& c : classes) {
        if (c.quotient != Q) throw DomainError("unit class from a different quotient");
        gens.push_back(c.coords);
    }
    return UnitSubgroup(std::move(Q), gens);
}

Int subgroup_query(const UnitSubgroup& a, const UnitSubgroup& b, SubgroupQuery op) {
    switch (op) {
    case SubgroupQuery::equal: return a == b ? 1 : 0;
    case SubgroupQuery::contains: return a.contains(b) ? 1 : 0;
    case SubgroupQuery::index_in_full: return a.index_in_full();
    }
    throw DomainError("unknown subgroup query");
}

// ---------------------------------------------------------------- context

UnitContext::UnitContext(FieldSpecPtr spec, int n, std::optional<int> precision, std::optional<UnramElem> pi_unit)
    : spec_(std::move(spec)), n_(n) {
    if (n < 1) throw DomainError("n must be at least 1");
    N_ = precision.value_or(n + 3);
    if (N_ < power_level(spec_->p, 1, n)) throw PrecisionError("precision too small for the unit quotient", power_level(spec_->p, 1, n) - N_);
    F_ = UnramField::make(spec_, N_);
    const TowerRing& ring = F_->ring();
    Elem u0 = ring.one();
    if (pi_unit) {
        if (!pi_unit->is_unit()) throw DomainError("pi / p must be a unit");
        u0 = pi_unit->to_ring(std::min(N_, pi_unit->absolute_precision()));
    }
    pi_ = ring.scale(u0, spec_->p);
    en_ = std::make_shared<EnPiMap>(F_, n, pi_);
    filtered_ = UnitQuotient::filtered(F_->local(), power_level(spec_->p, 1, n), n);
    if (spec_->p == 2) {
        Q_ = filtered_;
    } else {
        std::shared_ptr<UnitQuotient> Q(new UnitQuotient());
        Q->kind_ = UnitQuotient::Kind::witt;
        Q->p_ = spec_->p;
        Q->r_ = n;
        Q->K_ = spec_->f;
        Q->m_ = n + 1;
        Q->R_ = F_->local();
        Q->relations_ = HowellForm(spec_->p, n, spec_->f, {});
        Q->en_ = en_;
        Q_ = Q;
    }
}

Elem UnitContext::to_elem(const UnramElem& u) const {
    if (u.field()->spec() != spec_ && !(*u.field()->spec() == *spec_)) throw DomainError("unit from a different field");
    const int k = std::min(N_, u.absolute_precision());
    Elem e = u.to_ring(k);
    e.resize(F_->ring().size(), 0);
    return e;
}

UnramElem UnitContext::e_n_pi(const WittFq& a) const { return UnramElem::from_ring(F_, en_->apply(a)); }

UnramElem UnitContext::e_n_pi_lifts(const std::vector<Elem>& lifts) const {
    return UnramElem::from_ring(F_, en_->apply(lifts));
}

WittFq UnitContext::match_witt(const Elem& u) const {
    const ZVec target = filtered_->normal_form(filtered_->coords(u));
    std::optional<WittFq> found;
    witt_for_each(spec_, n_, false, [&](const WittFq& a) {
        if (found) return;
        if (filtered_->normal_form(filtered_->coords(en_->apply(a))) == target) found = a;
    }, 10000);
    if (!found) throw DomainError("unit class is not in the image of E_{n,pi}");
    return *found;
}

WittFq UnitContext::unit_to_witt(const UnramElem& u) const {
    if (!u.is_principal_unit()) throw DomainError("unit_to_witt needs a principal unit");
    const int need = power_level(p(), 1, n_);
    if (u.absolute_precision() < need) throw PrecisionError("unit known to too few digits", need - u.absolute_precision());
    const Elem e = to_elem(u);
    if (p() == 2) return match_witt(e);
    return en_->peel(e);
}

UnitClass UnitContext::class_of(const UnramElem& u) const {
    if (!u.is_principal_unit()) throw DomainError("class_of needs a principal unit");
    const Elem e = to_elem(u);
    UnitClass c{Q_, Q_->normal_form(Q_->coords(e)), std::nullopt};
    if (p() != 2) c.witt = en_->peel(e);
    return c;
}

UnitClass UnitContext::class_of_witt(const WittFq& a) const {
    UnitClass c = class_of(e_n_pi(a));
    c.witt = a;
    return c;
}

UnitSubgroup UnitContext::theorem_subgroup(const WittFq& w, Int enumeration_bound) const {
    if (w.length() != n_) throw DomainError("w has the wrong length");
    if (!w.is_unit()) throw DomainError("theorem_subgroup needs a unit w");
    const WittFq Fw = witt_frobenius(w);
    std::vector<WittFq> xs;
    if (ipow(spec_->order(), n_) <= enumeration_bound) {
        xs = witt_enumerate(spec_, n_, false, enumeration_bound);
    } else {
        const auto Fn = UnramField::make(spec_, n_);
        for (int b = 0; b < spec_->f; ++b) {
            std::vector<Int> c(spec_->f, 0);
            c[b] = 1;
            xs.push_back(int_to_witt(UnramElem::from_coeffs(Fn, c), n_));
        }
    }
    std::vector<ZVec> gens;
    for (const auto& x : xs) {
        const WittFq v = witt_mul(Fw, witt_wp(x));
        gens.push_back(Q_->coords(en_->apply(v)));
    }
    return UnitSubgroup(Q_, gens);
}

UnramElem UnitContext::principal_part(const UnramElem& u) const {
    if (!u.is_unit()) throw DomainError("principal part of a non-unit");
    return u / qq_teichmuller(u.residue(), u.field());
}

} // namespace lcft
