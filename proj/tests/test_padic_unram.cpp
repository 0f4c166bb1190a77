#include "doctest.h"

#include "lcft/errors.hpp"
#include "lcft/padic_unram.hpp"

#include <random>
#include <set>

using namespace lcft;

namespace {

UnramElem z(const UnramFieldPtr& F, Int c) { return UnramElem::from_int(F, c); }

UnramElem random_elem(const UnramFieldPtr& F, std::mt19937_64& rng) {
    std::uniform_int_distribution<Int> pick(0, F->ring().modulus_int() - 1);
    std::vector<Int> c(F->f());
    for (auto& x : c) x = pick(rng);
    return UnramElem::from_coeffs(F, c);
}

UnramPoly poly(const UnramFieldPtr& F, std::vector<Int> c) {
    UnramPoly out;
    for (Int x : c) out.push_back(z(F, x));
    return out;
}

} // namespace

TEST_CASE("capped relative arithmetic") {
    auto F = UnramField::make(FieldSpec::make(3, 1), 5);
    CHECK((z(F, 4) * z(F, -2)).equals(z(F, -8)));
    CHECK((z(F, 3) * z(F, 7)).valuation() == 1);
    const auto inv = z(F, 1) / z(F, 4);
    CHECK(inv.equals(z(F, 1 - 3 + 9 - 27 + 81)));
    CHECK((inv * z(F, 4)).equals(z(F, 1)));
    // Cancellation loses precision exactly.
    const auto a = z(F, 1 + 27), b = z(F, 1);
    const auto d = a - b;
    CHECK(d.valuation() == 3);
    CHECK(d.absolute_precision() == 5);
    CHECK(d.relative_precision() == 2);
    const auto zz = z(F, 243) - z(F, 0);
    CHECK(zz.is_zero());
    CHECK_FALSE(zz.is_exact_zero());
    CHECK_THROWS_AS(z(F, 1) / zz, PrecisionError);
    CHECK_THROWS_AS(z(F, 1) / UnramElem::zero(F), DomainError);
    // Division by p produces negative valuations.
    const auto q = z(F, 1) / z(F, 9);
    CHECK(q.valuation() == -2);
    CHECK((q * z(F, 9)).equals(z(F, 1)));
}

TEST_CASE("field axioms and precision soundness on random samples") {
    std::mt19937_64 rng(3);
    for (auto spec : {FieldSpec::make(3, 2), FieldSpec::make(2, 3), FieldSpec::make(5, 1)}) {
        auto F = UnramField::make(spec, 6);
        auto G = UnramField::make(spec, 10);
        for (int t = 0; t < 200; ++t) {
            const auto a = random_elem(F, rng), b = random_elem(F, rng), c = random_elem(F, rng);
            CHECK(((a + b) * c).equals(a * c + b * c));
            CHECK(((a * b) * c).equals(a * (b * c)));
            if (!b.is_zero() && b.valuation() == 0) CHECK(((a / b) * b).equals(a));
            // Same inputs at higher precision agree on the first digits.
            const auto A = UnramElem::from_ring(G, a.to_ring(6)), B = UnramElem::from_ring(G, b.to_ring(6));
            CHECK(UnramElem::from_ring(F, (A * B + A).to_ring(6)).equals(a * b + a));
        }
    }
}

TEST_CASE("teichmuller lifts") {
    auto spec = FieldSpec::make(3, 2);
    auto F = UnramField::make(spec, 6);
    CHECK(qq_teichmuller(FqElem::zero(spec), F).is_zero());
    CHECK(qq_teichmuller(FqElem::one(spec), F).equals(z(F, 1)));
    CHECK(qq_teichmuller(FqElem::from_int(spec, 2), F).equals(z(F, -1)));
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<Int> pick(0, 8);
    for (int t = 0; t < 100; ++t) {
        const auto a = FqElem::from_index(spec, pick(rng)), b = FqElem::from_index(spec, pick(rng));
        CHECK((qq_teichmuller(a, F) * qq_teichmuller(b, F)).equals(qq_teichmuller(a * b, F)));
        const auto ta = qq_teichmuller(a, F);
        CHECK(ta.pow(9).equals(ta));
        CHECK(ta.residue() == a);
    }
}

TEST_CASE("frobenius") {
    std::mt19937_64 rng(9);
    for (auto spec : {FieldSpec::make(3, 2), FieldSpec::make(2, 3), FieldSpec::make(3, 3)}) {
        auto F = UnramField::make(spec, 6);
        const auto s = FqElem::generator(spec);
        CHECK(qq_frobenius(qq_teichmuller(s, F)).equals(qq_teichmuller(s.pow(spec->p), F)));
        for (Int c : {1, 2, 7, -5}) CHECK(qq_frobenius(z(F, c)).equals(z(F, c)));
        for (int t = 0; t < 50; ++t) {
            const auto a = random_elem(F, rng), b = random_elem(F, rng);
            UnramElem x = a;
            for (int i = 0; i < spec->f; ++i) x = qq_frobenius(x);
            CHECK(x.equals(a));
            CHECK(qq_frobenius(a * b).equals(qq_frobenius(a) * qq_frobenius(b)));
            CHECK(qq_frobenius(a + b).equals(qq_frobenius(a) + qq_frobenius(b)));
            // Digit action agrees with the Hensel image of s.
            CHECK(qq_frobenius(a).equals(UnramElem::from_ring(F, F->frobenius_hom().apply(F->ring(), a.to_ring(6)))));
        }
        // Order exactly f: some element is moved by Frob^k for k < f.
        for (int k = 1; k < spec->f; ++k) {
            UnramElem x = qq_teichmuller(s, F);
            for (int i = 0; i < k; ++i) x = qq_frobenius(x);
            CHECK_FALSE(x.equals(qq_teichmuller(s, F)));
        }
    }
}

TEST_CASE("resultants") {
    auto F7 = UnramField::make(FieldSpec::make(7, 1), 4);
    CHECK(poly_resultant(poly(F7, {-2, 0, 1}), poly(F7, {-3, 0, 1})).equals(z(F7, 1)));
    // Res(x - a, h) = h(a).
    CHECK(poly_resultant(poly(F7, {-5, 1}), poly(F7, {1, 2, 3})).equals(z(F7, 1 + 10 + 75)));
    CHECK(poly_resultant(poly(F7, {1, 2, 0, 1}), poly(F7, {4})).equals(z(F7, 64)));
    std::mt19937_64 rng(4);
    auto F3 = UnramField::make(FieldSpec::make(3, 2), 8);
    auto rp = [&](int deg) {
        UnramPoly p;
        for (int i = 0; i < deg; ++i) p.push_back(random_elem(F3, rng));
        p.push_back(z(F3, 1));
        return p;
    };
    for (int t = 0; t < 20; ++t) {
        const auto g = rp(3), h1 = rp(2), h2 = rp(2);
        UnramPoly prod(5, UnramElem::zero(F3));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) prod[i + j] = prod[i + j] + h1[i] * h2[j];
        const auto lhs = poly_resultant(g, prod);
        const auto rhs = poly_resultant(g, h1) * poly_resultant(g, h2);
        CHECK(lhs.equals(rhs));
    }
}

TEST_CASE("hensel roots") {
    auto F3 = UnramField::make(FieldSpec::make(3, 1), 6);
    auto r = hensel_roots(poly(F3, {-1, 0, 1}));
    REQUIRE(r.size() == 2);
    CHECK(((r[0].equals(z(F3, 1)) && r[1].equals(z(F3, -1))) || (r[1].equals(z(F3, 1)) && r[0].equals(z(F3, -1)))));
    CHECK(hensel_roots(poly(F3, {1, 0, 1})).empty());
    CHECK_THROWS_AS(hensel_roots(poly(F3, {1, 2, 1})), DomainError);

    auto spec = FieldSpec::make(3, 2);
    auto F9 = UnramField::make(spec, 6);
    auto roots = hensel_roots(poly(F9, {-1, 0, 0, 0, 0, 0, 0, 0, 1}));
    CHECK(roots.size() == 8);
    std::set<Int> residues;
    for (const auto& x : roots) {
        residues.insert(x.residue().index());
        CHECK(x.equals(qq_teichmuller(x.residue(), F9)));
    }
    CHECK(residues.size() == 8);
}

TEST_CASE("witt vectors and integer lifts") {
    auto f2 = FieldSpec::make(2, 1);
    auto F2 = UnramField::make(f2, 4);
    CHECK(witt_to_int(WittFq({FqElem::zero(f2), FqElem::one(f2)}), F2).equals(z(F2, 2).with_absolute_precision(2)));
    CHECK(witt_to_int(WittFq({FqElem::one(f2), FqElem::zero(f2), FqElem::zero(f2)}), F2).equals(z(F2, 1)));
    auto f3 = FieldSpec::make(3, 1);
    auto F3 = UnramField::make(f3, 4);
    int count = 0;
    for (const auto& w : witt_enumerate(f3, 2)) {
        CHECK(int_to_witt(witt_to_int(w, F3), 2) == w);
        ++count;
    }
    CHECK(count == 9);
    auto f9 = FieldSpec::make(3, 2);
    auto F9 = UnramField::make(f9, 4);
    count = 0;
    for (const auto& w : witt_enumerate(f9, 2)) {
        CHECK(int_to_witt(witt_to_int(w, F9), 2) == w);
        ++count;
    }
    CHECK(count == 81);
}
