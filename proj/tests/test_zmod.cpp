#include "doctest.h"

#include "lcft/zmod.hpp"

#include <map>
#include <random>
#include <set>

using namespace lcft;

namespace {

std::set<ZVec> brute_span(Int p, int r, int k, const std::vector<ZVec>& gens) {
    const Int q = ipow(p, r);
    std::set<ZVec> span{ZVec(k, 0)};
    std::vector<ZVec> frontier{ZVec(k, 0)};
    while (!frontier.empty()) {
        std::vector<ZVec> next;
        for (const auto& x : frontier)
            for (const auto& g : gens) {
                ZVec y(k);
                for (int i = 0; i < k; ++i) y[i] = ((x[i] + g[i]) % q + q) % q;
                if (span.insert(y).second) next.push_back(y);
            }
        frontier = std::move(next);
    }
    return span;
}

std::vector<ZVec> all_vectors(Int p, int r, int k) {
    const Int q = ipow(p, r);
    std::vector<ZVec> out;
    Int total = ipow(q, k);
    for (Int idx = 0; idx < total; ++idx) {
        ZVec v(k);
        Int x = idx;
        for (int i = 0; i < k; ++i) v[i] = x % q, x /= q;
        out.push_back(v);
    }
    return out;
}

} // namespace

TEST_CASE("howell form agrees with brute-force spans") {
    std::mt19937_64 rng(2);
    for (auto [p, r, k] : {std::tuple<Int, int, int>{2, 2, 3}, {3, 2, 2}, {2, 3, 2}, {3, 1, 3}, {2, 1, 4}, {5, 2, 2}}) {
        const Int q = ipow(p, r);
        const auto everything = all_vectors(p, r, k);
        std::map<std::set<ZVec>, HowellForm> seen;
        std::uniform_int_distribution<Int> pick(0, q - 1);
        std::uniform_int_distribution<int> count(0, 3);
        for (int t = 0; t < 150; ++t) {
            std::vector<ZVec> gens(count(rng));
            for (auto& g : gens) {
                g.resize(k);
                // Bias towards non-units to exercise the saturation step.
                for (auto& e : g) e = (t % 2) ? pick(rng) * p % q : pick(rng);
            }
            const HowellForm h(p, r, k, gens);
            const auto span = brute_span(p, r, k, gens);
            CHECK(ipow(p, h.log_order()) == static_cast<Int>(span.size()));
            for (const auto& v : everything) CHECK(h.contains(v) == (span.count(v) == 1));
            // Canonical: the same span always gives the same form.
            auto it = seen.find(span);
            if (it == seen.end()) seen.emplace(span, h);
            else CHECK(it->second == h);
            // Coset normal forms are constant on cosets.
            for (int s = 0; s < 10; ++s) {
                const auto& v = everything[rng() % everything.size()];
                const auto& w = *std::next(span.begin(), static_cast<long>(rng() % span.size()));
                ZVec vw(k);
                for (int i = 0; i < k; ++i) vw[i] = (v[i] + w[i]) % q;
                CHECK(h.reduce(v) == h.reduce(vw));
            }
        }
        // Different spans give different forms.
        std::set<std::vector<ZVec>> forms;
        for (const auto& [span, h] : seen) forms.insert(h.rows());
        CHECK(forms.size() == seen.size());
    }
}

TEST_CASE("trivial and full modules") {
    const HowellForm zero(3, 2, 2, {});
    CHECK(zero.log_order() == 0);
    CHECK(zero.rows().empty());
    const HowellForm full(3, 2, 2, {{1, 0}, {0, 1}});
    CHECK(full.log_order() == 4);
    CHECK(full.contains(zero));
    CHECK_FALSE(zero.contains(full));
    CHECK(inverse_mod(4, 9) == 7);
}

TEST_CASE("solve_combination reproduces targets in the span") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const Int p = trial % 2 ? 3 : 2;
        const int r = 1 + trial % 3, cols = 1 + trial % 4;
        const Int q = ipow(p, r);
        std::uniform_int_distribution<Int> d(0, q - 1);
        std::vector<ZVec> gens(1 + trial % 3, ZVec(cols)), rels(trial % 2, ZVec(cols));
        for (auto& g : gens)
            for (auto& x : g) x = d(rng) * (trial % 5 == 0 ? p : 1) % q;
        for (auto& g : rels)
            for (auto& x : g) x = d(rng);
        ZVec t(cols);
        for (auto& x : t) x = d(rng);
        const HowellForm span(p, r, cols, [&] {
            auto all = gens;
            all.insert(all.end(), rels.begin(), rels.end());
            return all;
        }());
        const auto sol = solve_combination(p, r, cols, gens, rels, t);
        CHECK(sol.has_value() == span.contains(t));
        if (!sol) continue;
        ZVec diff = t;
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (int j = 0; j < cols; ++j) diff[j] = (diff[j] - (*sol)[i] * gens[i][j]) % q;
        const HowellForm relspan(p, r, cols, rels);
        CHECK(relspan.contains(diff));
    }
}
