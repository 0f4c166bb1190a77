#include "lcft/zmod.hpp"

#include "lcft/errors.hpp"

#include <algorithm>

namespace lcft {

Int inverse_mod(Int a, Int m) {
    // Extended Euclid on signed 128-bit values.
    __int128 t = 0, newt = 1, r = m, newr = a % m;
    if (newr < 0) newr += m;
    while (newr != 0) {
        const __int128 qt = r / newr;
        const __int128 tt = t - qt * newt;
        t = newt;
        newt = tt;
        const __int128 rr = r - qt * newr;
        r = newr;
        newr = rr;
    }
    if (r != 1) throw DomainError("not a unit modulo " + std::to_string(m));
    if (t < 0) t += m;
    return static_cast<Int>(t);
}

int zp_valuation(Int a, Int p, int r) {
    if (a == 0) return r;
    int v = 0;
    while (a % p == 0 && v < r) {
        a /= p;
        ++v;
    }
    return v;
}

ZVec HowellForm::normalize(ZVec x) const {
    if (static_cast<int>(x.size()) != cols_) throw DomainError("vector length does not match the module");
    for (auto& e : x) {
        e %= q_;
        if (e < 0) e += q_;
    }
    return x;
}

HowellForm::HowellForm(Int p, int r, int cols, std::vector<ZVec> gens) : p_(p), r_(r), cols_(cols) {
    if (!is_prime(p) || r < 1) throw DomainError("Howell form needs Z/p^r with p prime and r >= 1");
    q_ = ipow(p, r);
    std::vector<ZVec> pool;
    for (auto& g : gens) {
        auto x = normalize(std::move(g));
        if (std::any_of(x.begin(), x.end(), [](Int e) { return e != 0; })) pool.push_back(std::move(x));
    }
    for (int c = 0; c < cols_ && !pool.empty(); ++c) {
        int best = -1, bv = r_;
        for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
            const int v = zp_valuation(pool[i][c], p_, r_);
            if (v < bv) bv = v, best = i;
        }
        if (best < 0) continue;
        ZVec piv = std::move(pool[best]);
        pool.erase(pool.begin() + best);
        const Int pv = ipow(p_, bv);
        const Int uinv = inverse_mod(piv[c] / pv, q_);
        for (auto& e : piv) e = mulmod(e, uinv);
        for (auto& row : pool) {
            const Int e = row[c];
            if (!e) continue;
            const Int k = e / pv;
            for (int j = c; j < cols_; ++j) {
                row[j] = (row[j] - mulmod(k, piv[j])) % q_;
                if (row[j] < 0) row[j] += q_;
            }
        }
        if (bv > 0) {
            ZVec sat(cols_);
            const Int m = ipow(p_, r_ - bv);
            bool nz = false;
            for (int j = 0; j < cols_; ++j) {
                sat[j] = mulmod(piv[j], m);
                nz = nz || sat[j];
            }
            if (nz) pool.push_back(std::move(sat));
        }
        pool.erase(std::remove_if(pool.begin(), pool.end(),
                                  [](const ZVec& x) { return std::all_of(x.begin(), x.end(), [](Int e) { return e == 0; }); }),
                   pool.end());
        rows_.push_back(std::move(piv));
        piv_col_.push_back(c);
        piv_val_.push_back(bv);
    }
    // Reduce entries above each pivot into [0, p^v).
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const int c = piv_col_[i];
        const Int pv = ipow(p_, piv_val_[i]);
        for (std::size_t j = 0; j < i; ++j) {
            const Int k = rows_[j][c] / pv;
            if (!k) continue;
            for (int t = c; t < cols_; ++t) {
                rows_[j][t] = (rows_[j][t] - mulmod(k, rows_[i][t])) % q_;
                if (rows_[j][t] < 0) rows_[j][t] += q_;
            }
        }
    }
}

bool HowellForm::contains(ZVec x) const {
    x = normalize(std::move(x));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const int c = piv_col_[i];
        const Int pv = ipow(p_, piv_val_[i]);
        if (x[c] % pv) return false;
        const Int k = x[c] / pv;
        if (!k) continue;
        for (int t = c; t < cols_; ++t) {
            x[t] = (x[t] - mulmod(k, rows_[i][t])) % q_;
            if (x[t] < 0) x[t] += q_;
        }
    }
    return std::all_of(x.begin(), x.end(), [](Int e) { return e == 0; });
}

ZVec HowellForm::reduce(ZVec x) const {
    x = normalize(std::move(x));
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const int c = piv_col_[i];
        const Int k = x[c] / ipow(p_, piv_val_[i]);
        if (!k) continue;
        for (int t = c; t < cols_; ++t) {
            x[t] = (x[t] - mulmod(k, rows_[i][t])) % q_;
            if (x[t] < 0) x[t] += q_;
        }
    }
    return x;
}

int HowellForm::log_order() const {
    int total = 0;
    for (int v : piv_val_) total += r_ - v;
    return total;
}

bool HowellForm::contains(const HowellForm& other) const {
    for (const auto& row : other.rows_)
        if (!contains(row)) return false;
    return true;
}

} // namespace lcft

namespace lcft {

std::optional<ZVec> solve_combination(Int p, int r, int cols, const std::vector<ZVec>& gens,
                                      const std::vector<ZVec>& relations, const ZVec& target) {
    const Int q = ipow(p, r);
    const int G = static_cast<int>(gens.size());
    auto mm = [q](Int a, Int b) {
        return static_cast<Int>(static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b) %
                                static_cast<unsigned __int128>(q));
    };
    auto norm = [q](Int a) {
        a %= q;
        return a < 0 ? a + q : a;
    };
    // Rows carry their value and their coefficients over the generators.
    struct Row {
        ZVec v, c;
    };
    std::vector<Row> pool;
    for (int i = 0; i < G; ++i) {
        Row row{ZVec(cols), ZVec(G, 0)};
        for (int j = 0; j < cols; ++j) row.v[j] = norm(gens[i][j]);
        row.c[i] = 1;
        pool.push_back(std::move(row));
    }
    for (const auto& rel : relations) {
        Row row{ZVec(cols), ZVec(G, 0)};
        for (int j = 0; j < cols; ++j) row.v[j] = norm(rel[j]);
        pool.push_back(std::move(row));
    }
    auto axpy = [&](Row& dst, Int k, const Row& src) {
        for (int j = 0; j < cols; ++j) dst.v[j] = norm(dst.v[j] - mm(k, src.v[j]));
        for (int j = 0; j < G; ++j) dst.c[j] = norm(dst.c[j] - mm(k, src.c[j]));
    };
    std::vector<Row> piv;
    std::vector<int> pc, pv;
    for (int c = 0; c < cols && !pool.empty(); ++c) {
        int best = -1, bv = r;
        for (int i = 0; i < static_cast<int>(pool.size()); ++i) {
            const int v = zp_valuation(pool[i].v[c], p, r);
            if (v < bv) bv = v, best = i;
        }
        if (best < 0) continue;
        Row P = std::move(pool[best]);
        pool.erase(pool.begin() + best);
        const Int pw = ipow(p, bv);
        const Int uinv = inverse_mod(P.v[c] / pw, q);
        for (auto& x : P.v) x = mm(x, uinv);
        for (auto& x : P.c) x = mm(x, uinv);
        for (auto& row : pool)
            if (row.v[c]) axpy(row, row.v[c] / pw, P);
        if (bv > 0) {
            Row sat{ZVec(cols), ZVec(G)};
            const Int m = ipow(p, r - bv);
            for (int j = 0; j < cols; ++j) sat.v[j] = mm(P.v[j], m);
            for (int j = 0; j < G; ++j) sat.c[j] = mm(P.c[j], m);
            pool.push_back(std::move(sat));
        }
        piv.push_back(std::move(P));
        pc.push_back(c);
        pv.push_back(bv);
    }
    Row t{ZVec(cols), ZVec(G, 0)};
    for (int j = 0; j < cols; ++j) t.v[j] = norm(target[j]);
    ZVec x(G, 0);
    for (std::size_t i = 0; i < piv.size(); ++i) {
        const Int pw = ipow(p, pv[i]);
        const Int e = t.v[pc[i]];
        if (e % pw) return std::nullopt;
        const Int k = e / pw;
        if (!k) continue;
        for (int j = 0; j < cols; ++j) t.v[j] = norm(t.v[j] - mm(k, piv[i].v[j]));
        for (int j = 0; j < G; ++j) x[j] = norm(x[j] + mm(k, piv[i].c[j]));
    }
    for (Int e : t.v)
        if (e) return std::nullopt;
    return x;
}

} // namespace lcft
