#include "doctest.h"

#include "lcft/cft_maps.hpp"
#include "lcft/errors.hpp"

using namespace lcft;

namespace {

std::string coset_str(const ZVec& v) {
    std::string s;
    for (Int x : v) s += std::to_string(x) + ",";
    return s;
}

} // namespace

TEST_CASE("unramified towers") {
    const auto F = UnramField::make(FieldSpec::make(3, 1), 6);
    for (int d : {1, 3, 9}) {
        const auto T = unram_tower(F->local(), d);
        CHECK(T.M.residue_order() == ipow(3, d));
        // Frobenius has order d and reduces to y -> y^3.
        const auto& ring = T.M.ring();
        for (int l = T.base_levels; l < ring.num_levels(); ++l) {
            Elem y = ring.variable(l), z = y;
            for (int j = 0; j < d; ++j) z = T.frob.apply(ring, z);
            CHECK(z == y);
        }
    }
    const auto F9 = UnramField::make(FieldSpec::make(3, 2), 6);
    const auto T = unram_tower(F9->local(), 3);
    CHECK(T.M.residue_order() == 729);
    const auto& ring = T.M.ring();
    const Elem y = ring.variable(1);
    CHECK(T.M.residue(T.frob.apply(ring, y)) == T.M.residue(ring.pow(y, 9)));
    // F is fixed.
    CHECK(T.frob.apply(ring, ring.variable(0)) == ring.variable(0));
}

TEST_CASE("catalog over Q_3: norm group, Upsilon, Psi") {
    const auto s = FieldSpec::make(3, 1);
    const int N = cft_precision(3, 3, 1);
    const auto C = make_cyclic(cyclotomic_catalog(3, 1, N));
    UnitContext ctx(s, 1);
    const auto NG = norm_subgroup(C, ctx);
    CHECK(NG.subgroup.index_in_full() == 3);
    CHECK(NG.subgroup == UnitSubgroup::trivial(ctx.quotient()));
    CHECK(prime_in_norms(*C.L, ctx, NG));
    MESSAGE("lower break " << C.max_lower_break());
    std::vector<UpsilonResult> ups;
    for (int k = 0; k < 3; ++k) {
        ups.push_back(upsilon(C, k, ctx, NG));
        MESSAGE("Upsilon(sigma^" << k << ") = " << coset_str(ups.back().coset));
    }
    CHECK(ups[0].coset == ZVec{0});
    CHECK(ups[1].coset != ZVec{0});
    CHECK(ups[2].coset != ups[1].coset);
    for (int k = 0; k < 3; ++k) {
        const auto eps = ctx.e_n_pi(*ups[k].unit.witt);
        const auto a = psi(C, eps, ctx, NG, PsiStrategy::inversion);
        const auto b = psi(C, eps, ctx, NG, PsiStrategy::hazewinkel);
        MESSAGE("k=" << k << " inversion " << a.k << " hazewinkel " << b.k << " d=" << b.tower_degree
                     << " level " << b.test_level);
        CHECK(a.k == k);
        CHECK(b.k == k);
    }
}

namespace {

void check_reciprocity(const CyclicExt& C, const UnitContext& ctx) {
    const auto NG = norm_subgroup(C, ctx);
    const int e = C.degree();
    CHECK(NG.subgroup.index_in_full() == ipow(C.p(), std::min(ctx.n(), C.log_degree)));
    std::vector<UpsilonResult> ups;
    for (int k = 0; k < e; ++k) ups.push_back(upsilon(C, k, ctx, NG));
    // Homomorphism and bijectivity onto U_1/N.
    for (int a = 0; a < e; ++a)
        for (int b = 0; b < e; ++b) {
            ZVec sum = ups[a].coset;
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += ups[b].coset[i];
            CHECK(NG.subgroup.form().reduce(sum) == ups[(a + b) % e].coset);
        }
    for (int a = 0; a < e; ++a)
        for (int b = a + 1; b < e; ++b) CHECK(ups[a].coset != ups[b].coset);
    PsiOptions opt;
    opt.upsilon_table = &ups;
    for (int k = 0; k < e; ++k) {
        const auto eps = ctx.e_n_pi(*ups[k].unit.witt);
        CHECK(psi(C, eps, ctx, NG, PsiStrategy::inversion, opt).k == k);
        CHECK(psi(C, eps, ctx, NG, PsiStrategy::hazewinkel, opt).k == k);
    }
}

} // namespace

TEST_CASE("catalog base change to Q_9") {
    const auto C3 = cyclotomic_catalog(3, 1, cft_precision(3, 3, 1));
    const auto C = make_cyclic(base_change_unramified(*C3, 2));
    UnitContext ctx(FieldSpec::make(3, 2), 1);
    const auto NG = norm_subgroup(C, ctx);
    CHECK(prime_in_norms(*C.L, ctx, NG));
    check_reciprocity(C, ctx);
}

TEST_CASE("Upsilon does not depend on the auxiliary choices") {
    const auto C = make_cyclic(cyclotomic_catalog(3, 1, cft_precision(3, 3, 1)));
    UnitContext ctx(FieldSpec::make(3, 1), 1);
    const auto NG = norm_subgroup(C, ctx);
    for (int k = 1; k < 3; ++k) {
        const auto ref = upsilon(C, k, ctx, NG).coset;
        for (int c = 0; c < 3; ++c) {
            UpsilonOptions o;
            o.beta_choice = c;
            o.tower_choice = (c + 1) % 2;
            CHECK(upsilon(C, k, ctx, NG, o).coset == ref);
        }
    }
}

TEST_CASE("degree 9 catalog over Q_3") {
    const auto C = make_cyclic(cyclotomic_catalog(3, 2, cft_precision(3, 9, 2)));
    MESSAGE("lower break " << C.max_lower_break());
    UnitContext ctx(FieldSpec::make(3, 1), 2);
    check_reciprocity(C, ctx);
}

TEST_CASE("sequence checks") {
    const auto C = make_cyclic(cyclotomic_catalog(3, 1, cft_precision(3, 3, 2) + 2));
    const auto rep = sequence_check(C, 3, 2);
    for (const auto& w : rep.witnesses) MESSAGE(w);
    CHECK(rep.g_injective);
    CHECK(rep.norm_kills_g);
    CHECK(rep.set_identity);
}

TEST_CASE("enumeration over Q_3 and Q_9") {
    for (int f : {1, 2}) {
        const auto s = FieldSpec::make(3, f);
        UnitContext ctx(s, 1);
        const auto res = enumerate_cyclic_exts(s, ctx);
        MESSAGE("f=" << f << " candidates " << res.candidates << " abelian " << res.abelian_candidates << " found "
                     << res.exts.size());
        for (const auto& n : res.notes) MESSAGE(n);
        CHECK(res.count_matches);
        CHECK(res.cross_roots_ok);
        for (std::size_t i = 0; i < res.exts.size(); ++i) {
            CHECK(prime_in_norms(*res.exts[i].L, ctx, res.norm_groups[i]));
            for (std::size_t j = i + 1; j < res.exts.size(); ++j)
                CHECK(!(res.norm_groups[i].subgroup == res.norm_groups[j].subgroup));
        }
    }
}

TEST_CASE("a cyclic cubic without 3 in its norm group") {
    const auto s = FieldSpec::make(3, 1);
    UnitContext ctx(s, 1);
    EnumerationOptions o;
    o.pi_unit = std::vector<Int>{4};
    const auto res = enumerate_cyclic_exts(s, ctx, o);
    REQUIRE(res.exts.size() == 1);
    CHECK(!prime_in_norms(*res.exts[0].L, ctx, res.norm_groups[0]));
    CHECK(prime_in_norms(*res.exts[0].L, ctx, res.norm_groups[0], UnramElem::from_int(ctx.field(), 12)));
}

TEST_CASE("enumeration over Q_2 exceeds the prediction") {
    const auto s = FieldSpec::make(2, 1);
    UnitContext ctx(s, 1);
    const auto res = enumerate_cyclic_exts(s, ctx);
    MESSAGE("found " << res.exts.size() << " predicted " << res.predicted);
    CHECK(res.predicted == 1);
    CHECK(res.exts.size() == 3);
    CHECK(!res.count_matches);
}

TEST_CASE("nested catalog extensions have nested norm groups") {
    UnitContext ctx(FieldSpec::make(3, 1), 2);
    const auto C1 = make_cyclic(cyclotomic_catalog(3, 1, cft_precision(3, 9, 2)));
    const auto C2 = make_cyclic(cyclotomic_catalog(3, 2, cft_precision(3, 9, 2)));
    const auto N1 = norm_subgroup(C1, ctx), N2 = norm_subgroup(C2, ctx);
    CHECK(N1.subgroup.index_in_full() == 3);
    CHECK(N2.subgroup.index_in_full() == 9);
    CHECK(N1.subgroup + N2.subgroup == N1.subgroup);
    CHECK(!(N1.subgroup == N2.subgroup));
}
