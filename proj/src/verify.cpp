#include "lcft/verify.hpp"

#include "lcft/errors.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace lcft {

namespace {

json zvec_json(const ZVec& v) { return json(v); }

std::string witt_string(const WittFq& w) {
    std::string s;
    for (int i = 0; i < w.length(); ++i) {
        if (i) s += ",";
        s += w[i].to_string();
    }
    return s;
}

json spec_json(const FieldSpec& s) { return json{{"p", s.p}, {"f", s.f}}; }

int catalog_degree(Int p, int level) { return static_cast<int>(ipow(p, level)); }

} // namespace

json Report::to_json() const {
    return json{{"check", check}, {"parameters", parameters}, {"witnesses", witnesses}, {"pass", pass}};
}

json subgroup_to_json(const UnitSubgroup& H, const UnitContext& ctx) {
    json rows = json::array();
    for (const auto& r : H.form().rows()) rows.push_back(zvec_json(r));
    return json{{"n", ctx.n()},
                {"p", ctx.p()},
                {"f", ctx.spec()->f},
                {"log_index", H.log_index()},
                {"howell_basis", rows}};
}

json elem_to_json(const UnramField& F, const Elem& a) {
    const Int q = F.ring().modulus_int();
    json out = json::array();
    for (Int x : a) {
        Int y = ((x % q) + q) % q;
        if (y > q / 2) y -= q;
        out.push_back(y);
    }
    return out;
}

json ext_to_json(const EisensteinExt& L) {
    json g = json::array();
    for (const auto& c : L.coeffs()) g.push_back(elem_to_json(*L.base_field(), c));
    json j{{"base_spec", spec_json(*L.base_field()->spec())},
           {"degree", L.degree()},
           {"g", g},
           {"provenance", L.provenance()}};
    if (L.integer_poly()) j["polynomial"] = poly_to_string(*L.integer_poly());
    return j;
}

Report verify_witt_iso(FieldSpecPtr spec, int n, int samples, std::uint64_t seed) {
    Report rep;
    rep.check = "witt_iso";
    rep.parameters = {{"p", spec->p}, {"f", spec->f}, {"n", n}, {"samples", samples}, {"seed", seed}};
    const auto F = UnramField::make(spec, n);
    const auto all = witt_enumerate(spec, n);
    std::vector<UnramElem> ints;
    ints.reserve(all.size());
    Int roundtrip_failures = 0;
    for (const auto& a : all) {
        ints.push_back(witt_to_int(a, F));
        if (int_to_witt(ints.back(), n) != a) ++roundtrip_failures;
    }
    Int pairs = 0, mismatches = 0;
    json examples = json::array();
    auto check = [&](std::size_t i, std::size_t j) {
        ++pairs;
        const std::pair<WittOp, QqOp> ops[] = {{WittOp::add, QqOp::add}, {WittOp::sub, QqOp::sub}, {WittOp::mul, QqOp::mul}};
        for (auto [wo, qo] : ops) {
            const auto w = witt_to_int(witt_ring_ops(all[i], all[j], wo), F);
            if (!w.equals(qq_arith(ints[i], ints[j], qo))) {
                ++mismatches;
                if (examples.size() < 5) examples.push_back(json{{"a", witt_string(all[i])}, {"b", witt_string(all[j])}});
            }
        }
    };
    if (samples <= 0) {
        for (std::size_t i = 0; i < all.size(); ++i)
            for (std::size_t j = 0; j < all.size(); ++j) check(i, j);
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
        for (int t = 0; t < samples; ++t) check(pick(rng), pick(rng));
    }
    rep.witnesses = {{"elements", all.size()},
                     {"pairs", pairs},
                     {"mismatches", mismatches},
                     {"roundtrip_failures", roundtrip_failures},
                     {"examples", examples}};
    rep.pass = mismatches == 0 && roundtrip_failures == 0;
    return rep;
}

Report verify_en_pi_bijective(FieldSpecPtr spec, int n, int precision_offset) {
    Report rep;
    rep.check = "en_pi_bijective";
    rep.parameters = {{"p", spec->p}, {"f", spec->f}, {"n", n}};
    UnitContext ctx(spec, n, n + 3 + precision_offset);
    const auto& Q = *ctx.filtered_quotient();
    const auto all = witt_enumerate(spec, n);
    std::set<ZVec> classes;
    std::vector<ZVec> coords;
    for (const auto& a : all) {
        coords.push_back(Q.normal_form(Q.coords(ctx.to_elem(ctx.e_n_pi(a)))));
        classes.insert(coords.back());
    }
    // Homomorphism on a deterministic sample of pairs.
    Int hom_failures = 0;
    const std::size_t stride = std::max<std::size_t>(1, all.size() / 16);
    for (std::size_t i = 0; i < all.size(); i += stride)
        for (std::size_t j = 0; j < all.size(); j += stride) {
            ZVec sum = coords[i];
            for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += coords[j][t];
            const auto c = Q.normal_form(Q.coords(ctx.to_elem(ctx.e_n_pi(witt_add(all[i], all[j])))));
            if (Q.normal_form(sum) != c) ++hom_failures;
        }
    const Int group_order = ipow(spec->p, Q.log_order());
    const Int expected = static_cast<Int>(all.size());
    rep.witnesses = {{"witt_vectors", expected},
                     {"quotient_order", group_order},
                     {"distinct_classes", classes.size()},
                     {"homomorphism_failures", hom_failures}};
    rep.pass = group_order == expected && static_cast<Int>(classes.size()) == expected && hom_failures == 0;
    return rep;
}

Report verify_en_pi_lifting(FieldSpecPtr spec, int n, int samples, std::uint64_t seed, int precision_offset) {
    Report rep;
    rep.check = "en_pi_lifting";
    rep.parameters = {{"p", spec->p}, {"f", spec->f}, {"n", n}, {"samples", samples}, {"seed", seed}};
    UnitContext ctx(spec, n, n + 3 + precision_offset);
    const auto& Q = *ctx.filtered_quotient();
    const auto F = ctx.field();
    const TowerRing& ring = F->ring();
    const auto all = witt_enumerate(spec, n);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    std::uniform_int_distribution<Int> digit(0, ring.modulus_int() - 1);
    Int violations = 0, witt_violations = 0;
    for (int t = 0; t < samples; ++t) {
        const auto& a = all[pick(rng)];
        std::vector<Elem> lifts;
        for (int i = 0; i < n; ++i) {
            Elem x = qq_teichmuller(a[i], F).to_ring(F->precision());
            Elem noise(ring.size());
            for (auto& c : noise) c = digit(rng);
            noise = ring.scale(noise, spec->p);
            // Keep the lift away from the Teichmuller representative.
            if (std::all_of(noise.begin(), noise.end(), [](Int c) { return c == 0; })) noise = ring.from_int(spec->p);
            lifts.push_back(ring.add(x, noise));
        }
        const auto u = ctx.e_n_pi_lifts(lifts);
        const auto ratio = u / ctx.e_n_pi(a);
        const ZVec z = Q.normal_form(Q.coords(ctx.to_elem(ratio)));
        if (std::any_of(z.begin(), z.end(), [](Int c) { return c != 0; })) ++violations;
        if (spec->p != 2 && ctx.unit_to_witt(ratio) != WittFq::zero(a[0], n)) ++witt_violations;
    }
    rep.witnesses = {{"violations", violations}, {"witt_violations", witt_violations}};
    rep.pass = violations == 0 && witt_violations == 0;
    return rep;
}

CyclicExt catalog_extension(const CatalogCase& c, const VerifyOptions& opt) {
    const int N = cft_precision(c.p, catalog_degree(c.p, c.level), std::max(c.n, c.level)) + opt.precision_offset;
    if (c.f == 1) return make_cyclic(cyclotomic_catalog(c.p, c.level, N));
    return make_cyclic(base_change_unramified(*cyclotomic_catalog(c.p, c.level, N), c.f));
}

UnitContext catalog_context(const CatalogCase& c, const VerifyOptions& opt) {
    return UnitContext(FieldSpec::make(c.p, c.f), c.n, c.n + 3 + opt.precision_offset);
}

Report verify_upsilon(const CyclicExt& C, const UnitContext& ctx, int alternatives) {
    Report rep;
    rep.check = "upsilon";
    rep.parameters = {{"p", ctx.p()}, {"f", ctx.spec()->f}, {"n", ctx.n()}, {"extension", ext_to_json(*C.L)}};
    const auto NG = norm_subgroup(C, ctx);
    const int e = C.degree();
    const Int expected_index = ipow(C.p(), std::min(ctx.n(), C.log_degree));
    const bool index_ok = NG.subgroup.index_in_full() == expected_index;

    std::vector<UpsilonResult> ups;
    json values = json::array();
    for (int k = 0; k < e; ++k) {
        ups.push_back(upsilon(C, k, ctx, NG));
        values.push_back(json{{"k", k}, {"coset", zvec_json(ups.back().coset)}, {"tower_degree", ups.back().d}});
    }
    int hom_failures = 0;
    json bad = json::array();
    for (int a = 0; a < e; ++a)
        for (int b = 0; b < e; ++b) {
            ZVec sum = ups[a].coset;
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += ups[b].coset[i];
            if (NG.subgroup.form().reduce(sum) != ups[(a + b) % e].coset) {
                ++hom_failures;
                bad.push_back(json{{"a", a}, {"b", b}});
            }
        }
    std::vector<ZVec> distinct;
    for (const auto& u : ups) distinct.push_back(u.coset);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const bool bijective = static_cast<Int>(distinct.size()) == expected_index && static_cast<Int>(e) == expected_index;

    int choice_failures = 0;
    for (int k = 1; k < e; ++k)
        for (int c = 0; c < alternatives; ++c) {
            UpsilonOptions o;
            o.beta_choice = c + 1;
            o.tower_choice = c % 2 == 0 ? 1 : 0;
            if (upsilon(C, k, ctx, NG, o).coset != ups[k].coset) ++choice_failures;
        }

    rep.witnesses = {{"norm_subgroup", subgroup_to_json(NG.subgroup, ctx)},
                     {"index", NG.subgroup.index_in_full()},
                     {"expected_index", expected_index},
                     {"values", values},
                     {"homomorphism_failures", hom_failures},
                     {"homomorphism_violations", bad},
                     {"distinct_classes", distinct.size()},
                     {"choice_alternatives", alternatives},
                     {"choice_failures", choice_failures}};
    rep.pass = index_ok && hom_failures == 0 && bijective && choice_failures == 0;
    return rep;
}

Report verify_psi(const CyclicExt& C, const UnitContext& ctx) {
    Report rep;
    rep.check = "psi";
    rep.parameters = {{"p", ctx.p()}, {"f", ctx.spec()->f}, {"n", ctx.n()}, {"extension", ext_to_json(*C.L)}};
    const auto NG = norm_subgroup(C, ctx);
    std::vector<UpsilonResult> ups;
    for (int k = 0; k < C.degree(); ++k) ups.push_back(upsilon(C, k, ctx, NG));
    PsiOptions opt;
    opt.upsilon_table = &ups;
    json rows = json::array();
    bool ok = true;
    for (int k = 0; k < C.degree(); ++k) {
        if (!ups[k].unit.witt) throw Unsupported("Psi verification needs Witt coordinates (odd p)");
        const auto eps = ctx.e_n_pi(*ups[k].unit.witt);
        const auto a = psi(C, eps, ctx, NG, PsiStrategy::inversion, opt);
        const auto b = psi(C, eps, ctx, NG, PsiStrategy::hazewinkel, opt);
        rows.push_back(json{{"k", k},
                            {"inversion", a.k},
                            {"hazewinkel", b.k},
                            {"tower_degree", b.tower_degree},
                            {"test_level", b.test_level}});
        ok = ok && a.k == k && b.k == k;
    }
    rep.witnesses = {{"rows", rows}};
    rep.pass = ok;
    return rep;
}

Report verify_sequence(const CyclicExt& C, int d, int r) {
    Report rep;
    rep.check = "sequence";
    rep.parameters = {{"tower_degree", d}, {"r", r}, {"extension", ext_to_json(*C.L)}};
    const auto s = sequence_check(C, d, r);
    rep.witnesses = {{"g_injective", s.g_injective},
                     {"norm_kills_g", s.norm_kills_g},
                     {"set_identity", s.set_identity},
                     {"rank", s.rank},
                     {"log_order_I", s.log_order_I},
                     {"notes", s.witnesses}};
    rep.pass = s.pass();
    return rep;
}

Report uniqueness_check(const std::vector<CyclicExt>& Ls, const std::vector<NormGroup>& N,
                        const std::vector<std::pair<int, int>>& nested) {
    if (Ls.size() != N.size()) throw DomainError("one norm group per extension is required");
    Report rep;
    rep.check = "uniqueness";
    json exts = json::array();
    for (const auto& C : Ls) exts.push_back(ext_to_json(*C.L));
    rep.parameters = {{"extensions", exts}, {"nested", nested}};
    json equal = json::array();
    for (std::size_t i = 0; i < N.size(); ++i)
        for (std::size_t j = i + 1; j < N.size(); ++j)
            if (N[i].subgroup == N[j].subgroup) equal.push_back(json::array({i, j}));
    json inclusion = json::array();
    bool nested_ok = true;
    for (auto [a, b] : nested) {
        const bool contains = N[a].subgroup.contains(N[b].subgroup);
        const bool strict = contains && N[a].subgroup != N[b].subgroup;
        nested_ok = nested_ok && strict;
        inclusion.push_back(json{{"smaller_field", a},
                                 {"larger_field", b},
                                 {"log_index_smaller", N[a].subgroup.log_index()},
                                 {"log_index_larger", N[b].subgroup.log_index()},
                                 {"strict_reverse_inclusion", strict}});
    }
    rep.witnesses = {{"equal_pairs", equal}, {"nested", inclusion}, {"count", Ls.size()}};
    rep.pass = equal.empty() && nested_ok;
    return rep;
}

Report intersection_check(const std::vector<NormGroup>& N, int expected_log_index) {
    Report rep;
    rep.check = "intersection";
    rep.parameters = {{"count", N.size()}, {"expected_log_index", expected_log_index}};
    json rows = json::array();
    bool ok = true;
    for (std::size_t i = 0; i < N.size(); ++i)
        for (std::size_t j = i + 1; j < N.size(); ++j) {
            const int li = N[i].subgroup.log_index_of_intersection(N[j].subgroup);
            ok = ok && li == expected_log_index;
            rows.push_back(json{{"pair", json::array({i, j})}, {"log_index", li}});
        }
    rep.witnesses = {{"pairs", rows}};
    rep.pass = ok;
    return rep;
}

Report correspondence_check(FieldSpecPtr spec, int n, const VerifyOptions& opt) {
    Report rep;
    rep.check = "correspond";
    rep.parameters = {{"p", spec->p}, {"f", spec->f}, {"n", n}, {"B", opt.B}, {"budget", opt.budget}};
    UnitContext ctx(spec, n, n + 3 + opt.precision_offset);

    // B: keyed by Howell rows so that the table order is canonical.
    std::map<std::vector<ZVec>, std::pair<UnitSubgroup, std::vector<std::string>>> B;
    witt_for_each(spec, n, true, [&](const WittFq& w) {
        const auto H = ctx.theorem_subgroup(w);
        auto& slot = B[H.form().rows()];
        slot.first = H;
        slot.second.push_back(witt_string(w));
    });

    std::vector<CyclicExt> exts;
    std::vector<NormGroup> groups;
    json counts = json::object();
    bool count_ok = true;
    const bool enumerated = n == 1;
    if (enumerated) {
        EnumerationOptions eo;
        eo.B = opt.B;
        eo.budget = opt.budget;
        eo.precision = default_ext_precision(spec->p, static_cast<int>(spec->p), 1) + opt.precision_offset;
        auto res = enumerate_cyclic_exts(spec, ctx, eo);
        exts = std::move(res.exts);
        groups = std::move(res.norm_groups);
        counts = {{"candidates", res.candidates},
                  {"abelian_candidates", res.abelian_candidates},
                  {"found", exts.size()},
                  {"predicted", res.predicted},
                  {"cross_roots_ok", res.cross_roots_ok},
                  {"notes", res.notes}};
        count_ok = res.count_matches && res.cross_roots_ok;
    } else {
        CatalogCase cc{spec->p, spec->f, n, n};
        auto C = catalog_extension(cc, opt);
        auto NG = norm_subgroup(C, ctx);
        if (!prime_in_norms(*C.L, ctx, NG)) throw CheckFailure("catalog witness does not have p in its norm group");
        exts.push_back(std::move(C));
        groups.push_back(std::move(NG));
        counts = {{"found", 1}, {"catalog_witness", true}};
    }

    std::map<std::vector<ZVec>, int> A;
    bool distinct = true;
    for (std::size_t i = 0; i < groups.size(); ++i)
        if (!A.emplace(groups[i].subgroup.form().rows(), static_cast<int>(i)).second) distinct = false;

    json table = json::array();
    json only_A = json::array(), only_B = json::array();
    std::map<std::vector<ZVec>, bool> keys;
    for (const auto& [k, v] : A) keys[k] = true;
    for (const auto& [k, v] : B) keys[k] = true;
    for (const auto& [k, unused] : keys) {
        const auto a = A.find(k);
        const auto b = B.find(k);
        const UnitSubgroup& H = a != A.end() ? groups[a->second].subgroup : b->second.first;
        json row{{"subgroup", subgroup_to_json(H, ctx)}};
        row["w"] = b != B.end() ? json(b->second.second) : json::array();
        row["extension"] = a != A.end() ? ext_to_json(*exts[a->second].L) : json(nullptr);
        table.push_back(row);
        if (a == A.end()) only_B.push_back(subgroup_to_json(H, ctx));
        if (b == B.end()) only_A.push_back(subgroup_to_json(H, ctx));
    }
    const bool sets_ok = enumerated ? only_A.empty() && only_B.empty() : only_A.empty();
    rep.witnesses = {{"size_A", A.size()},
                     {"size_B", B.size()},
                     {"table", table},
                     {"only_in_A", only_A},
                     {"only_in_B", only_B},
                     {"counts", counts},
                     {"bijective", distinct}};
    rep.pass = sets_ok && distinct && count_ok;
    return rep;
}

std::string correspondence_csv(const Report& r) {
    std::ostringstream os;
    os << "w,subgroup,extension\n";
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    };
    for (const auto& row : r.witnesses.at("table")) {
        std::string ws;
        for (const auto& w : row.at("w")) ws += (ws.empty() ? "" : ";") + w.get<std::string>();
        const auto& ext = row.at("extension");
        os << quote(ws) << "," << quote(row.at("subgroup").at("howell_basis").dump()) << ","
           << quote(ext.is_null() ? "" : ext.at("g").dump()) << "\n";
    }
    return os.str();
}

} // namespace lcft
