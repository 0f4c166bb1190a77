#include "doctest.h"

#include "lcft/errors.hpp"
#include "lcft/witt.hpp"

#include <random>
#include <set>

using namespace lcft;

namespace {

WittFq vec(const FieldSpecPtr& spec, std::vector<Int> idx) {
    std::vector<FqElem> c;
    for (Int i : idx) c.push_back(FqElem::from_index(spec, i));
    return WittFq(std::move(c));
}

// Independent oracle for W_n(F_p): (a_i) -> sum p^i a_i^{p^{n-1}} mod p^n,
// using that the Teichmuller lift of a in Z/p^n is a^{p^{n-1}}.
Int prime_field_lift(const WittFq& w) {
    const Int p = w.characteristic();
    const int n = w.length();
    const Int q = ipow(p, n);
    Int total = 0;
    for (int i = 0; i < n; ++i) {
        Int t = 1;
        const Int a = w[i].coeffs()[0];
        for (Int e = 0; e < ipow(p, n - 1); ++e) t = t * a % q;
        total = (total + ipow(p, i) * t) % q;
    }
    return total;
}

WittFq random_vec(const FieldSpecPtr& spec, int n, std::mt19937_64& rng) {
    std::uniform_int_distribution<Int> pick(0, spec->order() - 1);
    std::vector<Int> idx(n);
    for (auto& i : idx) i = pick(rng);
    return vec(spec, idx);
}

} // namespace

TEST_CASE("structure polynomials") {
    auto s = witt_structure(2, 2);
    const IntPoly x0 = IntPoly::variable(4, 0), x1 = IntPoly::variable(4, 1);
    const IntPoly y0 = IntPoly::variable(4, 2), y1 = IntPoly::variable(4, 3);
    // Over Z the cross term is -X_0 Y_0; it reduces to +X_0 Y_0 mod 2.
    CHECK(s->sum[1] == x1 + y1 - x0 * y0);
    REQUIRE(s->sum_mod_p[1].size() == 3);
    for (const auto& term : s->sum_mod_p[1]) CHECK(term.coeff == 1);
    CHECK(s->sum[0] == x0 + y0);
    CHECK(s->prod[0] == x0 * y0);
    for (auto [p, n] : {std::pair<Int, int>{3, 2}, {3, 3}, {2, 4}, {5, 2}}) CHECK(verify_ghost_identity(*witt_structure(p, n)));
    CHECK_THROWS_AS(witt_structure(2, 5), DomainError);
    CHECK_THROWS_WITH_AS(witt_structure(2, 9, 6), doctest::Contains("bound 6"), DomainError);
    CHECK_NOTHROW(witt_structure(2, 5, 5));
}

TEST_CASE("small examples") {
    auto f2 = FieldSpec::make(2, 1);
    CHECK(witt_add(vec(f2, {1, 0}), vec(f2, {1, 0})) == vec(f2, {0, 1}));
    CHECK(witt_verschiebung(vec(f2, {1, 0})) == vec(f2, {0, 1}));
    auto f9 = FieldSpec::make(3, 2);
    const auto s = FqElem::generator(f9);
    CHECK(witt_mul(witt_teichmuller(s, 2), witt_teichmuller(s, 2)) == witt_teichmuller(s * s, 2));
    CHECK(witt_teichmuller(FqElem::zero(f9), 3) == WittFq::zero(s, 3));
    CHECK(witt_teichmuller(FqElem::one(f9), 3) == WittFq::one(s, 3));
    CHECK_THROWS_AS(witt_add(vec(f9, {1}), vec(f9, {1, 2})), DomainError);
    CHECK_THROWS_AS(witt_add(vec(f9, {1}), vec(FieldSpec::make(2, 1), {1})), DomainError);
}

TEST_CASE("prime field oracle, exhaustive") {
    for (auto [p, n] : {std::pair<Int, int>{2, 2}, {2, 3}, {3, 2}, {3, 3}, {5, 2}}) {
        auto spec = FieldSpec::make(p, 1);
        const auto all = witt_enumerate(spec, n);
        const Int q = ipow(p, n);
        std::set<Int> images;
        for (const auto& a : all) images.insert(prime_field_lift(a));
        CHECK(static_cast<Int>(images.size()) == q);
        for (const auto& a : all)
            for (const auto& b : all) {
                const Int la = prime_field_lift(a), lb = prime_field_lift(b);
                CHECK(prime_field_lift(witt_add(a, b)) == (la + lb) % q);
                CHECK(prime_field_lift(witt_sub(a, b)) == ((la - lb) % q + q) % q);
                CHECK(prime_field_lift(witt_mul(a, b)) == la * lb % q);
            }
    }
}

TEST_CASE("ring axioms on the test matrix") {
    std::mt19937_64 rng(11);
    for (auto [p, f, n] : {std::tuple<Int, int, int>{2, 1, 2}, {2, 2, 2}, {3, 1, 2}, {3, 2, 1}, {3, 1, 3}}) {
        auto spec = FieldSpec::make(p, f);
        const auto zero = WittFq::zero(FqElem::zero(spec), n), one = WittFq::one(FqElem::zero(spec), n);
        for (int t = 0; t < 500; ++t) {
            const auto a = random_vec(spec, n, rng), b = random_vec(spec, n, rng), c = random_vec(spec, n, rng);
            CHECK(witt_add(witt_add(a, b), c) == witt_add(a, witt_add(b, c)));
            CHECK(witt_mul(witt_mul(a, b), c) == witt_mul(a, witt_mul(b, c)));
            CHECK(witt_mul(a, witt_add(b, c)) == witt_add(witt_mul(a, b), witt_mul(a, c)));
            CHECK(witt_add(a, b) == witt_add(b, a));
            CHECK(witt_mul(a, b) == witt_mul(b, a));
            CHECK(witt_add(a, zero) == a);
            CHECK(witt_mul(a, one) == a);
            CHECK(witt_add(a, witt_neg(a)) == zero);
        }
    }
}

TEST_CASE("frobenius, verschiebung and wp") {
    std::mt19937_64 rng(5);
    auto f9 = FieldSpec::make(3, 2);
    for (int t = 0; t < 300; ++t) {
        const auto a = random_vec(f9, 2, rng), b = random_vec(f9, 2, rng);
        CHECK(witt_frobenius(witt_verschiebung(a)) == witt_scalar(a, 3));
        CHECK(witt_verschiebung(witt_frobenius(a)) == witt_scalar(a, 3));
        CHECK(witt_frobenius(witt_mul(a, b)) == witt_mul(witt_frobenius(a), witt_frobenius(b)));
        CHECK(witt_frobenius(witt_add(a, b)) == witt_add(witt_frobenius(a), witt_frobenius(b)));
        CHECK(witt_verschiebung(witt_add(a, b)) == witt_add(witt_verschiebung(a), witt_verschiebung(b)));
        CHECK(witt_wp(witt_add(a, b)) == witt_add(witt_wp(a), witt_wp(b)));
    }
    for (auto [p, n] : {std::pair<Int, int>{2, 3}, {3, 2}, {5, 2}}) {
        auto spec = FieldSpec::make(p, 1);
        for (const auto& a : witt_enumerate(spec, n)) {
            CHECK(witt_frobenius(a) == a);
            CHECK(witt_wp(a) == WittFq::zero(a[0], n));
        }
    }
}

TEST_CASE("image of wp has index p^n") {
    for (auto [p, f, n] : {std::tuple<Int, int, int>{3, 2, 2}, {2, 2, 3}, {3, 3, 2}, {2, 3, 2}, {5, 2, 1}}) {
        auto spec = FieldSpec::make(p, f);
        std::set<std::vector<Int>> image;
        witt_for_each(spec, n, false, [&](const WittFq& a) {
            const auto w = witt_wp(a);
            std::vector<Int> key;
            for (const auto& c : w.components()) key.push_back(c.index());
            image.insert(key);
        });
        CHECK(static_cast<Int>(image.size()) * ipow(p, n) == ipow(spec->order(), n));
    }
}

TEST_CASE("enumeration counts") {
    auto f3 = FieldSpec::make(3, 1);
    auto f9 = FieldSpec::make(3, 2);
    CHECK(witt_enumerate(f3, 1).size() == 3);
    CHECK(witt_enumerate(f3, 1, true).size() == 2);
    CHECK(witt_enumerate(f3, 2).size() == 9);
    CHECK(witt_enumerate(f3, 2, true).size() == 6);
    CHECK(witt_enumerate(f9, 1).size() == 9);
    CHECK(witt_enumerate(f9, 1, true).size() == 8);
    CHECK_THROWS_AS(witt_enumerate(f9, 4, false, 1000), BudgetError);
}

TEST_CASE("witt vectors over F_p(t)") {
    for (Int p : {2, 3}) {
        const auto t = RatFuncElem::t(p);
        const auto one = t.one_like();
        const WittRat a({t, one}), b({one, t * t});
        CHECK(witt_sub(witt_add(a, b), b) == a);
        CHECK(witt_frobenius(witt_verschiebung(a)) == witt_scalar(a, p));
        CHECK(witt_mul(a, WittRat::one(t, 2)) == a);
        const WittRat c({RatFuncElem::constant(p, 1), RatFuncElem::constant(p, p - 1)});
        CHECK(witt_wp(c) == WittRat::zero(t, 2));
    }
}
