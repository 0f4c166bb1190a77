#include "doctest.h"

#include "lcft/errors.hpp"
#include "lcft/verify.hpp"

using namespace lcft;

TEST_CASE("Upsilon and Psi reports on the catalog") {
    for (const CatalogCase c : {CatalogCase{3, 1, 1, 1}, CatalogCase{3, 2, 1, 1}, CatalogCase{5, 1, 1, 1}}) {
        CAPTURE(c.p);
        CAPTURE(c.f);
        const auto C = catalog_extension(c);
        const auto ctx = catalog_context(c);
        const auto u = verify_upsilon(C, ctx);
        CHECK(u.pass);
        CHECK(u.witnesses.at("distinct_classes") == C.degree());
        const auto s = verify_psi(C, ctx);
        CHECK(s.pass);
    }
}

TEST_CASE("correspondence") {
    const auto r31 = correspondence_check(FieldSpec::make(3, 1), 1);
    CHECK(r31.pass);
    CHECK(r31.witnesses.at("size_A") == 1);
    const auto r32 = correspondence_check(FieldSpec::make(3, 2), 1);
    CHECK(r32.pass);
    CHECK(r32.witnesses.at("size_A") == 4);
    CHECK(r32.witnesses.at("size_B") == 4);
    const auto csv = correspondence_csv(r32);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    const auto r312 = correspondence_check(FieldSpec::make(3, 1), 2);
    CHECK(r312.pass);
    // Over Q_2 there are three quadratic extensions with 2 a norm while the
    // Witt side has only the trivial subgroup.
    const auto r21 = correspondence_check(FieldSpec::make(2, 1), 1);
    CHECK(!r21.pass);
    CHECK(r21.witnesses.at("size_A") == 3);
    CHECK(r21.witnesses.at("size_B") == 1);
}

TEST_CASE("uniqueness and intersections over Q_9") {
    const auto s = FieldSpec::make(3, 2);
    UnitContext ctx(s, 1);
    const auto res = enumerate_cyclic_exts(s, ctx);
    REQUIRE(res.exts.size() == 4);
    CHECK(uniqueness_check(res.exts, res.norm_groups).pass);
    CHECK(intersection_check(res.norm_groups, 2).pass);

    EnumerationOptions o;
    o.precision = cft_precision(3, 3, 2);
    const auto wide = enumerate_cyclic_exts(s, ctx, o);
    UnitContext ctx2(s, 2);
    std::vector<NormGroup> N2;
    for (const auto& C : wide.exts) N2.push_back(norm_subgroup(C, ctx2));
    const auto rep = intersection_check(N2, 2);
    CHECK(rep.pass);
}

TEST_CASE("nested catalog pair") {
    const CatalogCase c1{3, 1, 1, 2}, c2{3, 1, 2, 2};
    const auto ctx = catalog_context(c2);
    std::vector<CyclicExt> Ls{catalog_extension(c1), catalog_extension(c2)};
    std::vector<NormGroup> N{norm_subgroup(Ls[0], ctx), norm_subgroup(Ls[1], ctx)};
    const auto rep = uniqueness_check(Ls, N, {{0, 1}});
    CHECK(rep.pass);
    // Reversed order is not an inclusion.
    CHECK(!uniqueness_check(Ls, N, {{1, 0}}).pass);
}

TEST_CASE("reports are deterministic and stable under extra precision") {
    const CatalogCase c{3, 1, 1, 1};
    const auto a = verify_upsilon(catalog_extension(c), catalog_context(c)).to_json().dump();
    const auto b = verify_upsilon(catalog_extension(c), catalog_context(c)).to_json().dump();
    CHECK(a == b);
    VerifyOptions hi;
    hi.precision_offset = 4;
    const auto lo = verify_upsilon(catalog_extension(c), catalog_context(c)).witnesses;
    const auto up = verify_upsilon(catalog_extension(c, hi), catalog_context(c, hi)).witnesses;
    CHECK(lo.at("values") == up.at("values"));
    CHECK(lo.at("norm_subgroup") == up.at("norm_subgroup"));
    const auto e0 = correspondence_check(FieldSpec::make(3, 1), 1).witnesses.at("table");
    const auto e4 = correspondence_check(FieldSpec::make(3, 1), 1, hi).witnesses.at("table");
    CHECK(e0 == e4);
}

TEST_CASE("sequence report") {
    const CatalogCase c{3, 1, 1, 2};
    CHECK(verify_sequence(catalog_extension(c), 3, 2).pass);
}

TEST_CASE("Witt and E_{n,pi} reports") {
    CHECK(verify_witt_iso(FieldSpec::make(2, 1), 2).pass);
    CHECK(verify_witt_iso(FieldSpec::make(3, 2), 1).pass);
    CHECK(verify_witt_iso(FieldSpec::make(3, 1), 3, 200, 7).pass);
    const auto b = verify_en_pi_bijective(FieldSpec::make(3, 2), 1);
    CHECK(b.pass);
    CHECK(b.witnesses.at("distinct_classes") == 9);
    const auto b2 = verify_en_pi_bijective(FieldSpec::make(2, 1), 2);
    CHECK(!b2.pass);
    CHECK(b2.witnesses.at("distinct_classes") == 2);
    CHECK(verify_en_pi_lifting(FieldSpec::make(3, 1), 2).pass);
    CHECK(verify_en_pi_lifting(FieldSpec::make(2, 2), 1, 50).pass);
}
