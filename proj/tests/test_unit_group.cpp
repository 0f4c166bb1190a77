#include "doctest.h"

#include "lcft/errors.hpp"
#include "lcft/unit_group.hpp"

#include <random>
#include <set>

using namespace lcft;

namespace {

WittFq witt_of(const FieldSpecPtr& s, std::vector<Int> idx) {
    std::vector<FqElem> c;
    for (Int i : idx) c.push_back(FqElem::from_index(s, i));
    return WittFq(std::move(c));
}

} // namespace

TEST_CASE("Artin-Hasse coefficients") {
    const auto s = ah_series(3, 9, 4);
    CHECK(s->exact[1] == mpq_class(1));
    CHECK(s->exact[2] == mpq_class(1, 2));
    CHECK(s->exact[3] == mpq_class(1, 2));
    for (Int p : {2, 3, 5, 7}) {
        // Construction asserts p-integrality of every coefficient.
        CHECK_NOTHROW(ah_series(p, 60, 6));
    }
    CHECK(ah_degree_for(3, 5) == 9);
    CHECK(ah_degree_for(2, 8) == 16);
    CHECK(ah_degree_for(3, 9) == 27);
}

TEST_CASE("E(3) in Z_3") {
    const auto F = UnramField::make(FieldSpec::make(3, 1), 2);
    const Elem x = F->ring().from_int(3);
    const Elem e = ah_eval(F->local(), x);
    CHECK(e == F->ring().from_int(4));
    CHECK_THROWS_AS(ah_eval(F->local(), F->ring().one()), DomainError);
}

TEST_CASE("unit_to_witt on Q_3") {
    const auto s = FieldSpec::make(3, 1);
    UnitContext ctx(s, 1);
    const auto u = UnramElem::from_int(ctx.field(), 4);
    CHECK(ctx.unit_to_witt(u) == witt_of(s, {1}));
    CHECK(ctx.unit_to_witt(UnramElem::from_int(ctx.field(), 1)) == witt_of(s, {0}));
    CHECK_THROWS_AS(ctx.unit_to_witt(UnramElem::from_int(ctx.field(), 2)), DomainError);
    CHECK_THROWS_AS(ctx.unit_to_witt(UnramElem::from_int(ctx.field(), 3)), DomainError);
}

TEST_CASE("E_{n,pi} is a bijective homomorphism onto U_1/U_1^{p^n} for odd p") {
    for (auto [p, f, n] : {std::tuple{3, 1, 1}, {3, 1, 2}, {3, 2, 1}, {3, 2, 2}, {5, 1, 2}}) {
        CAPTURE(p);
        CAPTURE(f);
        CAPTURE(n);
        const auto s = FieldSpec::make(p, f);
        UnitContext ctx(s, n);
        const auto& Q = ctx.quotient();
        CHECK(Q->kind() == UnitQuotient::Kind::witt);
        const auto all = witt_enumerate(s, n);
        std::vector<UnitClass> cls;
        std::set<ZVec> seen;
        for (const auto& a : all) {
            cls.push_back(ctx.class_of_witt(a));
            CHECK(ctx.unit_to_witt(ctx.e_n_pi(a)) == a);
            seen.insert(cls.back().coords);
        }
        CHECK(seen.size() == all.size());
        // The filtered quotient has the same order and E respects it too.
        CHECK(ctx.filtered_quotient()->log_order() == n * f);
        std::mt19937 rng(7);
        std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
        const int trials = std::min<int>(400, static_cast<int>(all.size() * all.size()));
        for (int t = 0; t < trials; ++t) {
            const auto i = pick(rng), j = pick(rng);
            const auto prod = ctx.e_n_pi(all[i]) * ctx.e_n_pi(all[j]);
            CHECK(ctx.class_of(prod).coords == ctx.class_of_witt(witt_add(all[i], all[j])).coords);
        }
    }
}

TEST_CASE("filtered quotient for p = 2 and the image of E_{n,pi}") {
    for (auto [f, n] : {std::tuple{1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
        CAPTURE(f);
        CAPTURE(n);
        const auto s = FieldSpec::make(2, f);
        UnitContext ctx(s, n);
        const auto& Q = ctx.quotient();
        // U_1 / U_1^{2^n} = {+-1} x (Z/2^n)^f.
        CHECK(Q->log_order() == 1 + n * f);
        const auto all = witt_enumerate(s, n);
        std::set<ZVec> img;
        for (const auto& a : all) {
            const auto c = ctx.class_of_witt(a);
            img.insert(c.coords);
            CHECK(ctx.class_of_witt(ctx.unit_to_witt(ctx.e_n_pi(a))).coords == c.coords);
        }
        MESSAGE("image size " << img.size() << " of " << Q->log_order());
        // The image is a proper subgroup: E_{n,pi} is not onto for p = 2.
        CHECK(img.size() < static_cast<std::size_t>(ipow(2, Q->log_order())));
        for (const auto& a : all)
            for (const auto& b : all) {
                const auto prod = ctx.e_n_pi(a) * ctx.e_n_pi(b);
                CHECK(ctx.class_of(prod).coords == ctx.class_of_witt(witt_add(a, b)).coords);
            }
        int outside = 0;
        for (const auto& g : Q->generators()) {
            const auto u = UnramElem::from_ring(ctx.field(), g);
            if (img.count(ctx.class_of(u).coords)) continue;
            ++outside;
            CHECK_THROWS_AS(ctx.unit_to_witt(u), DomainError);
        }
        CHECK(outside > 0);
    }
}

TEST_CASE("class of E_{n,pi} does not depend on the lifts") {
    const auto s = FieldSpec::make(3, 2);
    UnitContext ctx(s, 2);
    const auto& ring = ctx.field()->ring();
    const auto& R = ctx.field()->local();
    std::mt19937 rng(11);
    std::uniform_int_distribution<Int> digit(0, 2);
    for (const auto& a : witt_enumerate(s, 2)) {
        std::vector<Elem> lifts;
        for (const auto& c : a.components()) {
            Elem noise(ring.size());
            for (auto& x : noise) x = digit(rng);
            lifts.push_back(ring.add(R.teichmuller(ctx.field()->residue_vec(c)), ring.scale(noise, 3)));
        }
        CHECK(ctx.class_of(ctx.e_n_pi_lifts(lifts)).coords == ctx.class_of_witt(a).coords);
    }
}

TEST_CASE("uniformizer choice") {
    const auto s = FieldSpec::make(3, 1);
    const auto F = UnramField::make(s, 5);
    UnitContext ctx(s, 2, std::nullopt, UnramElem::from_int(F, 2));
    for (const auto& a : witt_enumerate(s, 2)) CHECK(ctx.unit_to_witt(ctx.e_n_pi(a)) == a);
    CHECK_THROWS_AS(UnitContext(s, 2, std::nullopt, UnramElem::from_int(F, 3)), DomainError);
}

TEST_CASE("theorem subgroups over Q_9, n = 1") {
    const auto s = FieldSpec::make(3, 2);
    UnitContext ctx(s, 1);
    std::vector<UnitSubgroup> subs;
    for (const auto& w : witt_enumerate(s, 1, true)) {
        auto A = ctx.theorem_subgroup(w);
        CHECK(A.index_in_full() == 3);
        bool dup = false;
        for (const auto& B : subs) dup = dup || B == A;
        if (!dup) subs.push_back(A);
    }
    CHECK(subs.size() == 4);
    CHECK_THROWS_AS(ctx.theorem_subgroup(witt_of(s, {0})), DomainError);
}

TEST_CASE("theorem subgroup index over Q_3, n = 2") {
    const auto s = FieldSpec::make(3, 1);
    UnitContext ctx(s, 2);
    // wp vanishes on W_2(F_3), so every subgroup is trivial.
    for (const auto& w : witt_enumerate(s, 2, true)) CHECK(ctx.theorem_subgroup(w).index_in_full() == 9);
}

TEST_CASE("subgroup operations") {
    const auto s = FieldSpec::make(3, 1);
    UnitContext ctx(s, 2);
    const auto Q = ctx.quotient();
    const auto full = UnitSubgroup::full(Q);
    const auto triv = UnitSubgroup::trivial(Q);
    CHECK(full.index_in_full() == 1);
    CHECK(triv.index_in_full() == 9);
    const auto A = subgroup_from_generators(Q, {ctx.class_of_witt(witt_of(s, {0, 1}))});
    CHECK(A.index_in_full() == 3);
    CHECK(full.contains(A));
    CHECK(!A.contains(full));
    CHECK(A.log_index_of_intersection(full) == 1);
    CHECK(A.log_index_of_intersection(triv) == 2);
    CHECK(subgroup_query(A, A, SubgroupQuery::equal) == 1);
    CHECK(subgroup_query(full, A, SubgroupQuery::contains) == 1);
    CHECK(subgroup_query(A, A, SubgroupQuery::index_in_full) == 3);
    UnitContext other(s, 1);
    CHECK_THROWS_AS((void)(A == UnitSubgroup::full(other.quotient())), DomainError);
}

TEST_CASE("filtered quotient of a ramified ring") {
    // Z_3[x]/(x^2 - 3): U_1 / U_m mod cubes.
    const TowerRing ring(3, 4, {TowerLevel{2, {Elem{-3}, Elem{0}}}});
    const LocalRing R(ring, ring.one());
    const int m = power_level(3, 2, 1);
    CHECK(m == 4);
    const auto Q = UnitQuotient::filtered(R, m, 1);
    // Q_3(sqrt 3) has U_1 / U_1^3 of order 3^2.
    CHECK(Q->log_order() == 2);
}

TEST_CASE("theorem subgroups are unchanged by scaling w and by the choice of generators") {
    const auto s = FieldSpec::make(3, 2);
    for (int n : {1, 2}) {
        UnitContext ctx(s, n);
        for (const auto& w : witt_enumerate(s, n, true)) {
            const auto A = ctx.theorem_subgroup(w);
            CHECK(A == ctx.theorem_subgroup(witt_scalar(w, 2)));
            // Only an F_p-basis of W_n(k) is needed as x.
            CHECK(A == ctx.theorem_subgroup(w, 1));
        }
    }
    UnitContext ctx(s, 1);
    const auto Q = ctx.quotient();
    const auto a = ctx.class_of_witt(witt_of(s, {1}));
    const auto b = ctx.class_of_witt(witt_scalar(witt_of(s, {1}), 2));
    CHECK(subgroup_from_generators(Q, {a}) == subgroup_from_generators(Q, {b}));
    CHECK(subgroup_from_generators(Q, {a, b}).index_in_full() == 3);
}
