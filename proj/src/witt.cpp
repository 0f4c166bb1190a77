#include "lcft/witt.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>

namespace lcft {

namespace {

mpz_class mpz_pow(Int p, int e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return r;
}

StructurePolys::Reduced reduce_mod_p(const IntPoly& poly, Int p) {
    StructurePolys::Reduced out;
    const mpz_class mp(static_cast<long>(p));
    for (const auto& [m, c] : poly.terms()) {
        mpz_class r = c % mp;
        if (r < 0) r += mp;
        if (r != 0) out.push_back({m, r.get_si()});
    }
    return out;
}

void finish_reduction(StructurePolys& s) {
    s.sum_mod_p.clear();
    s.prod_mod_p.clear();
    s.max_exponent.assign(2 * s.n, 0);
    for (int i = 0; i < s.n; ++i) {
        s.sum_mod_p.push_back(reduce_mod_p(s.sum[i], s.p));
        s.prod_mod_p.push_back(reduce_mod_p(s.prod[i], s.p));
    }
    for (const auto* group : {&s.sum_mod_p, &s.prod_mod_p})
        for (const auto& poly : *group)
            for (const auto& term : poly)
                for (int v = 0; v < 2 * s.n; ++v) s.max_exponent[v] = std::max<int>(s.max_exponent[v], term.exponents[v]);
}

// Solves w_i(T_0..T_i) = target_i for T_i by induction on i; the division by
// p^i is exact at every step.
std::vector<IntPoly> solve_ghost(Int p, int n, const std::vector<IntPoly>& targets) {
    std::vector<IntPoly> t;
    for (int i = 0; i < n; ++i) {
        IntPoly rest = targets[i];
        for (int j = 0; j < i; ++j)
            rest = rest - t[j].pow(static_cast<unsigned>(ipow(p, i - j))) * mpz_pow(p, j);
        t.push_back(rest.divide_exact(mpz_pow(p, i)));
    }
    return t;
}

StructurePolys build(Int p, int n) {
    const int nv = 2 * n;
    std::vector<IntPoly> xs, ys;
    for (int j = 0; j < n; ++j) {
        xs.push_back(IntPoly::variable(nv, j));
        ys.push_back(IntPoly::variable(nv, n + j));
    }
    std::vector<IntPoly> sum_targets, prod_targets;
    for (int i = 0; i < n; ++i) {
        const IntPoly wx = ghost_component(p, i, xs);
        const IntPoly wy = ghost_component(p, i, ys);
        sum_targets.push_back(wx + wy);
        prod_targets.push_back(wx * wy);
    }
    StructurePolys s;
    s.p = p;
    s.n = n;
    s.sum = solve_ghost(p, n, sum_targets);
    s.prod = solve_ghost(p, n, prod_targets);
    finish_reduction(s);
    return s;
}

nlohmann::json poly_to_json(const IntPoly& poly) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : poly.terms()) terms.push_back({{"e", m}, {"c", c.get_str()}});
    return terms;
}

IntPoly poly_from_json(int nvars, const nlohmann::json& j) {
    IntPoly poly(nvars);
    for (const auto& t : j) poly.add_term(t.at("e").get<IntPoly::Monomial>(), mpz_class(t.at("c").get<std::string>()));
    return poly;
}

std::filesystem::path cache_file(Int p, int n) {
    const char* dir = std::getenv("LCFT_CACHE_DIR");
    if (!dir || !*dir) return {};
    return std::filesystem::path(dir) / ("witt_p" + std::to_string(p) + "_n" + std::to_string(n) + ".json");
}

bool load_from_disk(Int p, int n, StructurePolys& out) {
    const auto path = cache_file(p, n);
    if (path.empty() || !std::filesystem::exists(path)) return false;
    try {
        std::ifstream in(path);
        const auto j = nlohmann::json::parse(in);
        StructurePolys s;
        s.p = p;
        s.n = n;
        for (const auto& q : j.at("sum")) s.sum.push_back(poly_from_json(2 * n, q));
        for (const auto& q : j.at("prod")) s.prod.push_back(poly_from_json(2 * n, q));
        if (static_cast<int>(s.sum.size()) != n || static_cast<int>(s.prod.size()) != n) return false;
        finish_reduction(s);
        if (!verify_ghost_identity(s)) return false;
        out = std::move(s);
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

void store_to_disk(const StructurePolys& s) {
    const auto path = cache_file(s.p, s.n);
    if (path.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    nlohmann::json j;
    j["p"] = s.p;
    j["n"] = s.n;
    for (const auto& q : s.sum) j["sum"].push_back(poly_to_json(q));
    for (const auto& q : s.prod) j["prod"].push_back(poly_to_json(q));
    std::ofstream out(path);
    out << j.dump();
}

} // namespace

IntPoly ghost_component(Int p, int i, const std::vector<IntPoly>& z) {
    IntPoly w(z.at(0).nvars());
    for (int j = 0; j <= i; ++j) w = w + z[j].pow(static_cast<unsigned>(ipow(p, i - j))) * mpz_pow(p, j);
    return w;
}

bool verify_ghost_identity(const StructurePolys& s) {
    const int nv = 2 * s.n;
    std::vector<IntPoly> xs, ys;
    for (int j = 0; j < s.n; ++j) {
        xs.push_back(IntPoly::variable(nv, j));
        ys.push_back(IntPoly::variable(nv, s.n + j));
    }
    for (int i = 0; i < s.n; ++i) {
        const IntPoly wx = ghost_component(s.p, i, xs);
        const IntPoly wy = ghost_component(s.p, i, ys);
        if (!(ghost_component(s.p, i, s.sum) - wx - wy).is_zero()) return false;
        if (!(ghost_component(s.p, i, s.prod) - wx * wy).is_zero()) return false;
    }
    return true;
}

std::shared_ptr<const StructurePolys> witt_structure(Int p, int n, int bound) {
    if (!is_prime(p)) throw DomainError("Witt vectors need a prime p");
    if (n < 1) throw DomainError("Witt length must be at least 1");
    if (n > bound) throw DomainError("Witt length " + std::to_string(n) + " exceeds the configured bound " + std::to_string(bound));

    static std::mutex mu;
    static std::map<std::pair<Int, int>, std::shared_ptr<const StructurePolys>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, n});
    if (it != cache.end()) return it->second;

    StructurePolys s;
    if (!load_from_disk(p, n, s)) {
        s = build(p, n);
        if (!verify_ghost_identity(s)) throw CheckFailure("Witt structure polynomials fail the ghost identity");
        store_to_disk(s);
    }
    auto ptr = std::make_shared<const StructurePolys>(std::move(s));
    cache.emplace(std::make_pair(p, n), ptr);
    return ptr;
}

void witt_for_each(const FieldSpecPtr& spec, int n, bool units_only, const std::function<void(const WittFq&)>& fn,
                   Int bound) {
    const Int q = spec->order();
    Int total = 1;
    for (int i = 0; i < n; ++i) {
        total *= q;
        if (total > bound) throw BudgetError("enumeration of W_n(F_q) exceeds the bound " + std::to_string(bound));
    }
    const auto elems = fq_elements(spec);
    for (Int idx = 0; idx < total; ++idx) {
        std::vector<FqElem> comps(n);
        Int x = idx;
        for (int i = n - 1; i >= 0; --i) {
            comps[i] = elems[x % q];
            x /= q;
        }
        if (units_only && comps[0].is_zero()) continue;
        fn(WittFq(std::move(comps)));
    }
}

std::vector<WittFq> witt_enumerate(const FieldSpecPtr& spec, int n, bool units_only, Int bound) {
    std::vector<WittFq> out;
    witt_for_each(spec, n, units_only, [&](const WittFq& w) { out.push_back(w); }, bound);
    return out;
}

} // namespace lcft
