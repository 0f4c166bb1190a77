#include "lcft/cft_maps.hpp"

#include "lcft/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace lcft {

namespace {

int log_p(Int p, Int d) {
    int k = 0;
    while (d > 1) {
        if (d % p) throw DomainError("degree is not a power of p");
        d /= p;
        ++k;
    }
    return k;
}

Elem residue_trace_abs(const TowerRing& rr, const Elem& a, int dim, Int p) {
    Elem acc(a.size(), 0), x = a;
    for (int j = 0; j < dim; ++j) {
        acc = rr.add(acc, x);
        x = rr.pow(x, static_cast<std::uint64_t>(p));
    }
    return acc;
}

bool is_zero_vec(const Elem& a) {
    return std::all_of(a.begin(), a.end(), [](Int x) { return x == 0; });
}

/// Smallest r with U_1^{p^r} inside U_k for absolute ramification index e.
int kill_exponent(Int p, int e, int k) {
    int j = 1, r = 0;
    while (j < k) {
        j = std::min(static_cast<int>(p) * j, j + e);
        ++r;
    }
    return std::max(r, 1);
}

Elem basis_residue(int dim, int b) {
    Elem e(dim, 0);
    e[b] = 1;
    return e;
}

} // namespace

// ---------------------------------------------------------------- towers

UnramTower unram_tower(const LocalRing& F, int d, int choice) {
    if (F.ramified()) throw DomainError("unramified tower over a ramified ring");
    const Int p = F.p();
    const int k = log_p(p, d);
    const int N = F.precision();
    UnramTower T;
    T.d = d;
    T.base_levels = F.ring().num_levels();
    auto levels = F.ring().levels();
    for (int l = 0; l < k; ++l) {
        const LocalRing cur(TowerRing(p, N, levels));
        const TowerRing& rr = cur.residue_ring();
        // y^p - y - a is irreducible over the residue field iff Tr(a) != 0.
        int seen = 0;
        Elem a;
        for (Int idx = 1; idx < cur.residue_order(); ++idx) {
            const Elem r = cur.residue_from_index(idx);
            if (is_zero_vec(residue_trace_abs(rr, r, cur.residue_dim(), p))) continue;
            if (seen++ == choice) {
                a = r;
                break;
            }
        }
        if (a.empty()) throw DomainError("no Artin-Schreier constant for this choice");
        TowerLevel lv;
        lv.degree = static_cast<int>(p);
        for (int i = 0; i < p; ++i) lv.modulus.push_back(Elem(cur.ring().size(), 0));
        for (std::size_t j = 0; j < a.size(); ++j) lv.modulus[0][j] = cur.ring().reduce_int(-a[j]);
        lv.modulus[1][0] = cur.ring().reduce_int(-1);
        levels.push_back(lv);
    }
    T.M = LocalRing(TowerRing(p, N, levels));
    const TowerRing& ring = T.M.ring();
    std::vector<std::optional<Elem>> images(ring.num_levels());
    const Int q = F.residue_order();
    for (int l = T.base_levels; l < ring.num_levels(); ++l) {
        const TowerHom partial(ring, images);
        std::vector<Elem> poly;
        for (const auto& c : ring.level(l).modulus) poly.push_back(partial.apply(ring, ring.embed(c)));
        poly.push_back(ring.one());
        const Elem y = ring.variable(l);
        images[l] = hensel_lift(T.M, poly, ring.pow(y, static_cast<std::uint64_t>(q)));
    }
    T.frob = TowerHom(ring, images);
    return T;
}

// ---------------------------------------------------------------- cyclic data

CyclicExt make_cyclic(ExtPtr L) {
    CyclicExt C;
    C.gal = ext_is_cyclic(*L);
    if (!C.gal.cyclic) throw Unsupported("extension is not cyclic");
    C.log_degree = log_p(L->p(), L->degree());
    C.L = std::move(L);
    return C;
}

int CyclicExt::max_lower_break() const {
    int t = 0;
    for (std::size_t k = 1; k < gal.powers.size(); ++k)
        t = std::max(t, L->local().valuation(L->ring().sub(gal.powers[k].image, L->pi())) - 1);
    return t;
}

TowerHom Composite::phi_sigma(int k) const {
    std::vector<std::optional<Elem>> images = phi.images();
    images.back() = sigma_image[k];
    return TowerHom(LM->ring(), images);
}

Composite make_composite(const CyclicExt& C, int d, int choice) {
    Composite X;
    X.base = &C;
    X.M = unram_tower(C.L->base(), d, choice);
    std::vector<Elem> g;
    for (const auto& c : C.L->coeffs()) g.push_back(X.M.M.ring().embed(c));
    X.LM = EisensteinExt::make(X.M.M, g, "composite");
    const TowerRing& ring = X.LM->ring();
    std::vector<std::optional<Elem>> images(ring.num_levels());
    for (int l = X.M.base_levels; l < X.M.M.ring().num_levels(); ++l)
        images[l] = ring.embed(*X.M.frob.images()[l]);
    X.phi = TowerHom(ring, images);
    for (const auto& s : C.gal.powers) {
        const Elem im = X.LM->lift_from(*C.L, s.image);
        X.sigma_image.push_back(im);
        X.sigma.push_back(ext_automorphism(*X.LM, im, s.precision).hom);
    }
    return X;
}

// ---------------------------------------------------------------- norm groups

NormGroup norm_subgroup(const EisensteinExt& L, const UnitContext& ctx, std::optional<int> expected_log_index) {
    if (!L.base_field() || !(*L.base_field()->spec() == *ctx.spec()))
        throw DomainError("extension base does not match the unit context");
    const int n = ctx.n();
    const auto& R = L.local();
    const int top = L.degree() * power_level(ctx.p(), 1, n) - 1;
    const int f = R.residue_dim();
    NormGroup out;
    std::vector<ZVec> gens;
    UnitSubgroup cur = UnitSubgroup::trivial(ctx.quotient());
    for (int i = 1; i <= top; ++i) {
        const Elem pii = R.pi_power(i);
        for (int b = 0; b < f; ++b) {
            const Elem u = L.ring().add(L.ring().one(), L.ring().mul(R.teichmuller(basis_residue(f, b)), pii));
            int lost = 0;
            const Elem nu = ext_norm(L, u, &lost);
            const auto cls = ctx.class_of(UnramElem::from_ring(L.base_field(), nu, L.precision() - lost));
            gens.push_back(cls.coords);
        }
        UnitSubgroup next(ctx.quotient(), gens);
        if (!(next == cur)) out.stable_from = i + 1;
        cur = std::move(next);
    }
    out.subgroup = cur;
    out.levels_used = top;
    if (expected_log_index && out.subgroup.log_index() != *expected_log_index)
        throw CheckFailure("norm subgroup has index p^" + std::to_string(out.subgroup.log_index()) + ", expected p^" +
                           std::to_string(*expected_log_index));
    return out;
}

NormGroup norm_subgroup(const CyclicExt& C, const UnitContext& ctx) {
    return norm_subgroup(*C.L, ctx, std::min(ctx.n(), C.log_degree));
}

UnramElem norm_prime_unit(const EisensteinExt& L, const UnitContext& ctx, const UnramElem& pi) {
    if (pi.valuation() != 1) throw DomainError("pi must be a uniformizer of F");
    int lost = 0;
    const Elem n = ext_norm(L, L.pi(), &lost);
    const auto N = UnramElem::from_ring(L.base_field(), n, L.precision() - lost);
    const auto pi_L = UnramElem::from_ring(L.base_field(), pi.to_ring(std::min(pi.absolute_precision(), L.precision())),
                                           std::min(pi.absolute_precision(), L.precision()));
    return ctx.principal_part(N / pi_L);
}

bool prime_in_norms(const EisensteinExt& L, const UnitContext& ctx, const NormGroup& N, std::optional<UnramElem> pi) {
    const UnramElem P = pi ? *pi : UnramElem::from_int(ctx.field(), ctx.p());
    const auto u = norm_prime_unit(L, ctx, P);
    return N.subgroup.contains(ctx.class_of(u).coords);
}

// ---------------------------------------------------------------- Upsilon

namespace {

int order_of_power(int e, int k) {
    k %= e;
    if (k < 0) k += e;
    return e / std::gcd(e, k == 0 ? e : k);
}

// Residues b of M with Tr_{M/F}(b) != 0, in index order.
Elem trace_unit(const UnramTower& T, int choice) {
    const LocalRing& M = T.M;
    const TowerRing& ring = M.ring();
    int seen = 0;
    for (Int idx = 1; idx < M.residue_order(); ++idx) {
        const Elem b = M.teichmuller_index(idx);
        Elem acc = ring.zero(), x = b;
        for (int j = 0; j < T.d; ++j) {
            acc = ring.add(acc, x);
            x = T.frob.apply(ring, x);
        }
        if (is_zero_vec(M.residue(acc))) continue;
        if (seen++ == choice) return b;
    }
    throw DomainError("no trace unit for this choice");
}

UnramElem norm_of_prime(const EisensteinExt& L) {
    int lost = 0;
    const Elem n = ext_norm(L, L.pi(), &lost);
    return UnramElem::from_ring(L.base_field(), n, L.precision() - lost);
}

} // namespace

UpsilonResult upsilon(const CyclicExt& C, int k, const UnitContext& ctx, const NormGroup& N, const UpsilonOptions& opt) {
    const int e = C.degree();
    k = ((k % e) + e) % e;
    UpsilonResult out;
    out.k = k;
    out.d = order_of_power(e, k);
    const Composite X = make_composite(C, out.d, opt.tower_choice);
    const EisensteinExt& LM = *X.LM;
    const TowerRing& ring = LM.ring();
    const Elem beta = LM.from_base(trace_unit(X.M, opt.beta_choice));
    // pi_chi = sum_j (phi sigma^k)^j (pi_L beta): fixed by phi sigma^k, valuation 1.
    const TowerHom h = X.phi_sigma(k);
    Elem term = ring.mul(LM.pi(), beta), pi_chi = ring.zero();
    for (int j = 0; j < out.d; ++j) {
        pi_chi = ring.add(pi_chi, term);
        term = h.apply(ring, term);
    }
    const int need = e * (ctx.n() + 3);
    if (LM.local().valuation(ring.sub(h.apply(ring, pi_chi), pi_chi)) < need)
        throw CheckFailure("pi_chi is not fixed by phi sigma");
    out.pi_chi_valuation = LM.local().valuation(pi_chi);
    if (out.pi_chi_valuation != 1) throw PrecisionError("no valuation-1 fixed element found", 1);
    // N_{Sigma/F}(pi_chi) = prod over coset representatives sigma^j of <phi sigma^k>.
    Elem prod = ring.one();
    for (int j = 0; j < e; ++j) prod = ring.mul(prod, X.sigma[j].apply(ring, pi_chi));
    const int fs = C.L->base().ring().size();
    Elem fpart(prod.begin(), prod.begin() + fs);
    Elem rest = prod;
    std::fill(rest.begin(), rest.begin() + fs, 0);
    if (LM.local().valuation(rest) < need) throw PrecisionError("norm of pi_chi does not descend to F at this precision", 2);
    const auto Nchi = UnramElem::from_ring(C.L->base_field(), fpart, C.L->precision() - 1);
    const auto ratio = Nchi / norm_of_prime(*C.L);
    out.unit = ctx.class_of(ctx.principal_part(ratio));
    out.coset = N.subgroup.form().reduce(out.unit.coords);
    return out;
}

// ---------------------------------------------------------------- Psi

namespace {

PsiResult psi_inversion(const CyclicExt& C, const UnramElem& eps, const UnitContext& ctx, const NormGroup& N,
                        const PsiOptions& opt) {
    const ZVec target = N.subgroup.form().reduce(ctx.class_of(eps).coords);
    PsiResult out;
    for (int k = 0; k < C.degree(); ++k) {
        const ZVec c = opt.upsilon_table ? (*opt.upsilon_table)[k].coset : upsilon(C, k, ctx, N).coset;
        if (c == target) {
            if (out.matches == 0) out.k = k;
            ++out.matches;
        }
    }
    if (out.matches != 1)
        throw CheckFailure("inversion found " + std::to_string(out.matches) + " characters for one class");
    return out;
}

// Coordinates of eta^{1 - phi} * pi_L / sigma'(pi_L) tested against Im(sigma - 1).
struct MembershipTest {
    std::shared_ptr<const UnitQuotient> Q;
    UnitSubgroup I;
};

MembershipTest membership_test(const Composite& X, int level) {
    const auto& R = X.ring();
    const TowerRing& ring = R.ring();
    MembershipTest T;
    T.Q = UnitQuotient::filtered(R, level, kill_exponent(R.p(), R.e(), level));
    std::vector<ZVec> gens;
    for (const auto& G : T.Q->generators()) gens.push_back(T.Q->coords(ring.mul(X.sigma[1].apply(ring, G), R.inverse(G))));
    T.I = UnitSubgroup(T.Q, gens);
    return T;
}

} // namespace

PsiResult psi(const CyclicExt& C, const UnramElem& eps, const UnitContext& ctx, const NormGroup& N, PsiStrategy strategy,
              const PsiOptions& opt) {
    if (!eps.is_principal_unit()) throw DomainError("psi needs a principal unit");
    if (strategy == PsiStrategy::inversion) return psi_inversion(C, eps, ctx, N, opt);

    const Int p = C.p();
    const int e = C.degree();
    int level = opt.test_level.value_or(C.max_lower_break() + 2);
    const int max_level = opt.test_level.value_or(C.L->local().max_valuation() / 2);
    const Int dmax = ipow(p, opt.max_growth) * e;
    if (C.L->precision() < level + 1) throw PrecisionError("extension precision too low for the membership level", level + 1 - C.L->precision());
    for (Int d = 1; d <= dmax; d *= p) {
        const Composite X = make_composite(C, static_cast<int>(d));
        const EisensteinExt& LM = *X.LM;
        const TowerRing& ring = LM.ring();
        const LocalRing& R = LM.local();
        const LocalRing& M = X.M.M;
        for (;;) {
            // eps = N_{LM/M}(eta) modulo U_{M, level}; level exceeds the upper break.
            const auto QM = UnitQuotient::filtered(M, level, std::max(1, level - 1));
            Elem epsM = M.ring().embed(eps.to_ring(std::min(eps.absolute_precision(), M.precision())));
            const ZVec target = QM->coords(epsM);
            std::vector<Elem> G;
            std::vector<ZVec> normed;
            const int fr = R.residue_dim();
            for (int i = 1; i < e * level; ++i) {
                const Elem pii = R.pi_power(i);
                for (int b = 0; b < fr; ++b) {
                    const Elem u = ring.add(ring.one(), ring.mul(R.teichmuller(basis_residue(fr, b)), pii));
                    G.push_back(u);
                    normed.push_back(QM->coords(ext_norm(LM, u)));
                }
            }
            const auto sol = solve_combination(p, QM->r(), QM->rank(), normed, QM->relations().rows(), target);
            if (!sol) break; // trace obstruction: enlarge M
            Elem eta = ring.one();
            for (std::size_t g = 0; g < G.size(); ++g)
                if ((*sol)[g]) eta = ring.mul(eta, ring.pow(G[g], static_cast<std::uint64_t>((*sol)[g])));
            const Elem eta_phi = ring.mul(eta, R.inverse(X.phi.apply(ring, eta)));
            const MembershipTest T = membership_test(X, level);
            PsiResult out;
            out.tower_degree = static_cast<int>(d);
            out.test_level = level;
            for (int j = 0; j < e; ++j) {
                const Elem u = R.div_by_pi(X.sigma_image[j]); // sigma^j(pi_L) / pi_L
                const Elem y = ring.mul(eta_phi, R.inverse(u));
                if (T.I.contains(T.Q->coords(y))) {
                    if (out.matches == 0) out.k = j;
                    ++out.matches;
                }
            }
            if (out.matches == 1) return out;
            if (out.matches == 0) throw CheckFailure("no sigma' satisfies the membership test");
            if (level >= max_level) throw CheckFailure("several sigma' satisfy the membership test");
            ++level;
            if (C.L->precision() < level + 1) throw PrecisionError("membership level needs more precision", 1);
        }
    }
    throw BudgetError("norm equation unsolved within the tower growth bound");
}

// ---------------------------------------------------------------- sequence (*)

SequenceReport sequence_check(const CyclicExt& C, int d, int r) {
    SequenceReport rep;
    const Composite X = make_composite(C, d);
    const auto& R = X.ring();
    const TowerRing& ring = R.ring();
    const int e = C.degree();
    const int m = power_level(C.p(), e, r);
    if (R.max_valuation() < m + e) throw PrecisionError("sequence check needs more precision", (m + e - R.max_valuation()) / e + 1);
    const auto Q = UnitQuotient::filtered(R, m, r);
    rep.rank = Q->rank();
    auto image_of = [&](int j) {
        std::vector<ZVec> gens;
        for (const auto& G : Q->generators())
            gens.push_back(Q->coords(ring.mul(X.sigma[j].apply(ring, G), R.inverse(G))));
        return UnitSubgroup(Q, gens);
    };
    const UnitSubgroup I = image_of(1);
    rep.log_order_I = I.log_order();
    rep.g_injective = true;
    for (int j = 1; j < e; ++j) {
        const ZVec c = Q->coords(R.div_by_pi(X.sigma_image[j]));
        if (I.contains(c)) {
            rep.g_injective = false;
            rep.witnesses.push_back("pi_L^(sigma^" + std::to_string(j) + " - 1) lies in I");
        }
    }
    rep.norm_kills_g = true;
    int lost0 = 0;
    const Elem n0 = ext_norm(*C.L, C.L->pi(), &lost0);
    for (int j = 0; j < e; ++j) {
        int lost = 0;
        const Elem nj = ext_norm(*C.L, C.gal.powers[j].image, &lost);
        if (nj != n0 || lost != lost0) {
            rep.norm_kills_g = false;
            rep.witnesses.push_back("N(sigma^" + std::to_string(j) + "(pi_L)) != N(pi_L)");
        }
    }
    // Cyclic case: every Im(sigma^j - 1) lies in Im(sigma - 1), so the set of
    // all eps^(sigma^j - 1) equals the subgroup they generate.
    rep.set_identity = true;
    UnitSubgroup gen = UnitSubgroup::trivial(Q);
    for (int j = 1; j < e; ++j) {
        const UnitSubgroup Ij = image_of(j);
        gen = gen + Ij;
        if (!I.contains(Ij)) {
            rep.set_identity = false;
            rep.witnesses.push_back("Im(sigma^" + std::to_string(j) + " - 1) is not inside Im(sigma - 1)");
        }
    }
    if (!(gen == I)) {
        rep.set_identity = false;
        rep.witnesses.push_back("generated subgroup differs from Im(sigma - 1)");
    }
    return rep;
}

// ---------------------------------------------------------------- enumeration

EnumerationResult enumerate_cyclic_exts(FieldSpecPtr spec, const UnitContext& ctx, const EnumerationOptions& opt) {
    if (ctx.n() != 1) throw Unsupported("enumeration covers degree p (n = 1) only");
    if (!(*ctx.spec() == *spec)) throw DomainError("unit context has a different field");
    const Int p = spec->p;
    const int f = spec->f;
    const int e = static_cast<int>(p);
    if (opt.B < 2) throw DomainError("coefficient precision B must be at least 2");
    const int N = opt.precision.value_or(default_ext_precision(p, e, 1));
    const auto F = UnramField::make(spec, N);
    const TowerRing& fr = F->ring();
    const Int per = ipow(spec->order(), opt.B - 1); // choices for each c_i mod p^{B-1}
    Int total = 1;
    for (int i = 1; i < e; ++i) {
        if (total > opt.budget / per) throw BudgetError("enumeration exceeds the candidate budget");
        total *= per;
    }
    EnumerationResult res;
    res.candidates = total;
    res.predicted = (spec->order() - 1) / (p - 1);
    // a_0 = (-1)^e pi makes N(pi_L) = pi; a_i = p c_i.
    Elem u = fr.one();
    if (opt.pi_unit) {
        u = fr.zero();
        for (std::size_t j = 0; j < opt.pi_unit->size() && j < u.size(); ++j) u[j] = fr.reduce_int((*opt.pi_unit)[j]);
        if (!F->local().is_unit(u)) throw DomainError("pi / p must be a unit");
    }
    Elem a0 = fr.scale(u, p);
    if (e % 2 == 1) a0 = fr.neg(a0);
    const Int qB = ipow(p, opt.B - 1);
    struct Cand {
        std::vector<Elem> g;
        NormGroup ng;
    };
    auto as_ext = [&](const std::vector<Elem>& g) {
        UnramPoly up;
        for (const auto& c : g) up.push_back(UnramElem::from_ring(F, c));
        up.push_back(UnramElem::from_int(F, 1));
        return EisensteinExt::make(F, up, "enumerated");
    };
    std::vector<Cand> abelian;
    std::vector<Int> digits(static_cast<std::size_t>(e - 1) * f, 0);
    for (Int t = 0; t < total; ++t) {
        Int x = t;
        for (auto& dgt : digits) {
            dgt = x % qB;
            x /= qB;
        }
        std::vector<Elem> g{a0};
        for (int i = 1; i < e; ++i) {
            Elem c(fr.size(), 0);
            for (int j = 0; j < f; ++j) c[j] = fr.reduce_int(p * digits[(i - 1) * f + j]);
            g.push_back(c);
        }
        NormGroup ng = norm_subgroup(*as_ext(g), ctx);
        if (ng.subgroup.log_index() != 1) continue;
        ++res.abelian_candidates;
        abelian.push_back({g, std::move(ng)});
    }
    // Distinct norm groups are distinct extensions; keep the first of each.
    std::vector<std::size_t> rep_of(abelian.size());
    std::vector<std::size_t> reps;
    for (std::size_t i = 0; i < abelian.size(); ++i) {
        std::size_t r = reps.size();
        for (std::size_t j = 0; j < reps.size(); ++j)
            if (abelian[reps[j]].ng.subgroup == abelian[i].ng.subgroup) {
                r = j;
                break;
            }
        if (r == reps.size()) reps.push_back(i);
        rep_of[i] = r;
    }
    auto has_root_in = [&](const std::vector<Elem>& g, const EisensteinExt& L) {
        std::vector<Elem> poly;
        for (const auto& c : g) poly.push_back(L.from_base(c));
        poly.push_back(L.ring().one());
        const int target = L.local().max_valuation() / 2;
        return !local_roots(L.local(), poly, target).empty();
    };
    for (std::size_t r : reps) {
        const auto L = as_ext(abelian[r].g);
        try {
            res.exts.push_back(make_cyclic(L));
            res.norm_groups.push_back(abelian[r].ng);
        } catch (const Unsupported&) {
            res.notes.push_back("abelian-index candidate is not cyclic: " + std::to_string(r));
            res.cross_roots_ok = false;
        }
    }
    for (std::size_t i = 0; i < res.exts.size(); ++i) {
        for (std::size_t j = 0; j < res.exts.size(); ++j) {
            if (i == j) continue;
            if (has_root_in(abelian[reps[i]].g, *res.exts[j].L)) {
                res.cross_roots_ok = false;
                res.notes.push_back("representatives " + std::to_string(i) + " and " + std::to_string(j) +
                                    " define the same field");
            }
        }
        // Spot check: two more members of the class are isomorphic to the representative.
        int checked = 0;
        for (std::size_t c = 0; c < abelian.size() && checked < 2; ++c) {
            if (rep_of[c] != i || c == reps[i]) continue;
            ++checked;
            if (!has_root_in(abelian[c].g, *res.exts[i].L)) {
                res.cross_roots_ok = false;
                res.notes.push_back("candidate with the norm group of representative " + std::to_string(i) +
                                    " has no root in it");
            }
        }
    }
    res.count_matches = static_cast<Int>(res.exts.size()) == res.predicted;
    return res;
}

int cft_precision(Int p, int e, int n) { return default_ext_precision(p, e, n) + 1; }

} // namespace lcft
