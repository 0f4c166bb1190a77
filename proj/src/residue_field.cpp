#include "lcft/residue_field.hpp"

#include "lcft/errors.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lcft {

bool is_prime(Int n) {
    if (n < 2) return false;
    for (Int d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Int ipow(Int base, int exp) {
    Int r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

namespace fp {

Int reduce(Int a, Int p) {
    a %= p;
    return a < 0 ? a + p : a;
}

Int inverse(Int a, Int p) {
    a = reduce(a, p);
    if (a == 0) throw DomainError("inverse of zero in F_p");
    Int r = 1, e = p - 2, b = a;
    while (e > 0) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Poly add(const Poly& a, const Poly& b, Int p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = reduce(r[i] + b[i], p);
    trim(r);
    return r;
}

Poly sub(const Poly& a, const Poly& b, Int p) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = reduce(r[i] - b[i], p);
    trim(r);
    return r;
}

Poly mul(const Poly& a, const Poly& b, Int p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    trim(r);
    return r;
}

Poly scale(const Poly& a, Int c, Int p) {
    Poly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = reduce(a[i] * c, p);
    trim(r);
    return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b, Int p) {
    if (b.empty()) throw DomainError("polynomial division by zero");
    Poly rem = a;
    trim(rem);
    const int db = degree(b);
    const Int lead_inv = inverse(b.back(), p);
    if (degree(rem) < db) return {{}, rem};
    Poly quo(rem.size() - b.size() + 1, 0);
    for (int k = degree(rem); k >= db; --k) {
        const Int c = reduce(rem[k] * lead_inv, p);
        quo[k - db] = c;
        if (c == 0) continue;
        for (int i = 0; i <= db; ++i) rem[k - db + i] = reduce(rem[k - db + i] - c * b[i], p);
    }
    trim(rem);
    trim(quo);
    return {quo, rem};
}

Poly make_monic(const Poly& a, Int p) {
    if (a.empty()) return a;
    return scale(a, inverse(a.back(), p), p);
}

Poly gcd(Poly a, Poly b, Int p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

} // namespace fp

bool is_irreducible_fp(const fp::Poly& m, Int p) {
    const int f = fp::degree(m);
    if (f < 1) return false;
    // Trial division by every monic polynomial of degree 1..f/2.
    for (int d = 1; d <= f / 2; ++d) {
        const Int count = ipow(p, d);
        for (Int idx = 0; idx < count; ++idx) {
            fp::Poly div(d + 1, 0);
            Int x = idx;
            for (int i = 0; i < d; ++i) {
                div[i] = x % p;
                x /= p;
            }
            div[d] = 1;
            if (fp::divmod(m, div, p).second.empty()) return false;
        }
    }
    return true;
}

std::shared_ptr<const FieldSpec> FieldSpec::make(Int p, int f) {
    if (!is_prime(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
    if (f < 1) throw DomainError("residue degree must be at least 1");
    if (f == 1) return with_modulus(p, {0, 1});
    // Candidates in lexicographic order of (c_0, ..., c_{f-1}): c_0 is the most significant digit.
    const Int count = ipow(p, f);
    for (Int idx = 0; idx < count; ++idx) {
        std::vector<Int> m(f + 1, 0);
        Int x = idx;
        for (int i = f - 1; i >= 0; --i) {
            m[i] = x % p;
            x /= p;
        }
        m[f] = 1;
        if (is_irreducible_fp(m, p)) return with_modulus(p, m);
    }
    throw CheckFailure("no irreducible polynomial found");
}

std::shared_ptr<const FieldSpec> FieldSpec::with_modulus(Int p, std::vector<Int> modulus) {
    if (!is_prime(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
    for (auto& c : modulus) c = fp::reduce(c, p);
    fp::trim(modulus);
    if (modulus.size() < 2 || modulus.back() != 1) throw DomainError("modulus must be monic of degree >= 1");
    if (!is_irreducible_fp(modulus, p)) throw DomainError("modulus is not irreducible over F_p");
    auto spec = std::make_shared<FieldSpec>();
    spec->p = p;
    spec->f = static_cast<int>(modulus.size()) - 1;
    spec->modulus = std::move(modulus);
    return spec;
}

Int FieldSpec::order() const { return ipow(p, f); }

// ---------------------------------------------------------------- FqElem

FqElem::FqElem(FieldSpecPtr spec, std::vector<Int> coeffs) : spec_(std::move(spec)) {
    const Int p = spec_->p;
    fp::Poly a;
    a.reserve(coeffs.size());
    for (Int c : coeffs) a.push_back(fp::reduce(c, p));
    fp::trim(a);
    if (fp::degree(a) >= spec_->f) a = fp::divmod(a, spec_->modulus, p).second;
    a.resize(spec_->f, 0);
    c_ = std::move(a);
}

FqElem FqElem::zero(FieldSpecPtr spec) { return FqElem(std::move(spec), {}); }
FqElem FqElem::one(FieldSpecPtr spec) { return FqElem(std::move(spec), {1}); }
FqElem FqElem::from_int(FieldSpecPtr spec, Int c) { return FqElem(std::move(spec), {c}); }
FqElem FqElem::generator(FieldSpecPtr spec) { return FqElem(std::move(spec), {0, 1}); }

FqElem FqElem::from_index(FieldSpecPtr spec, Int index) {
    const int f = spec->f;
    const Int p = spec->p;
    if (index < 0 || index >= spec->order()) throw DomainError("field element index out of range");
    std::vector<Int> c(f, 0);
    for (int i = f - 1; i >= 0; --i) {
        c[i] = index % p;
        index /= p;
    }
    return FqElem(std::move(spec), std::move(c));
}

Int FqElem::index() const {
    Int idx = 0;
    for (int i = 0; i < spec_->f; ++i) idx = idx * spec_->p + c_[i];
    return idx;
}

bool FqElem::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](Int c) { return c == 0; });
}

void FqElem::check_same(const FqElem& o) const {
    if (!spec_ || !o.spec_) throw DomainError("uninitialized field element");
    if (spec_ != o.spec_ && !(*spec_ == *o.spec_)) throw DomainError("field elements from different fields");
}

FqElem FqElem::operator+(const FqElem& o) const {
    check_same(o);
    std::vector<Int> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = (c_[i] + o.c_[i]) % spec_->p;
    return FqElem(spec_, std::move(r));
}

FqElem FqElem::operator-(const FqElem& o) const {
    check_same(o);
    std::vector<Int> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = fp::reduce(c_[i] - o.c_[i], spec_->p);
    return FqElem(spec_, std::move(r));
}

FqElem FqElem::operator-() const { return zero_like() - *this; }

FqElem FqElem::operator*(const FqElem& o) const {
    check_same(o);
    return FqElem(spec_, fp::mul(c_, o.c_, spec_->p));
}

FqElem FqElem::operator/(const FqElem& o) const { return *this * o.inverse(); }

bool FqElem::operator==(const FqElem& o) const {
    check_same(o);
    return c_ == o.c_;
}

bool FqElem::operator<(const FqElem& o) const {
    check_same(o);
    return c_ < o.c_;
}

FqElem FqElem::pow(Int e) const {
    if (e < 0) return inverse().pow(-e);
    FqElem r = one_like(), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

FqElem FqElem::inverse() const {
    if (is_zero()) throw DomainError("division by zero in F_q");
    return pow(spec_->order() - 2);
}

std::string FqElem::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int i = spec_->f - 1; i >= 0; --i) {
        if (c_[i] == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0 || c_[i] != 1) os << c_[i];
        if (i > 0) os << "s";
        if (i > 1) os << "^" << i;
    }
    if (first) os << "0";
    return os.str();
}

FqElem fq_arith(const FqElem& a, const FqElem& b, FieldOp op) {
    switch (op) {
    case FieldOp::add: return a + b;
    case FieldOp::sub: return a - b;
    case FieldOp::mul: return a * b;
    case FieldOp::div: return a / b;
    }
    throw DomainError("unknown field operation");
}

FqElem fq_frobenius(const FqElem& a) { return a.frobenius(); }

FqElem fq_pth_root(const FqElem& a) {
    // Frobenius has order f, so its inverse is x -> x^{p^{f-1}}.
    return a.pow(a.spec()->order() / a.spec()->p);
}

FqElem fq_wp(const FqElem& a) { return a.frobenius() - a; }

Int fq_trace(const FqElem& a) {
    FqElem t = a, x = a;
    for (int i = 1; i < a.spec()->f; ++i) {
        x = x.frobenius();
        t = t + x;
    }
    return t.coeffs()[0];
}

std::vector<FqElem> fq_elements(const FieldSpecPtr& spec) {
    std::vector<FqElem> out;
    const Int q = spec->order();
    out.reserve(q);
    for (Int i = 0; i < q; ++i) out.push_back(FqElem::from_index(spec, i));
    return out;
}

FqElem parse_fq(const FieldSpecPtr& spec, const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw DomainError("empty residue field element");
    FqElem acc = FqElem::zero(spec);
    const FqElem s = FqElem::generator(spec);
    std::size_t i = 0;
    while (i < t.size()) {
        Int sign = 1;
        if (t[i] == '+' || t[i] == '-') {
            if (t[i] == '-') sign = -1;
            ++i;
        }
        Int coeff = 1;
        bool have_coeff = false;
        if (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) {
            std::size_t used = 0;
            coeff = std::stoll(t.substr(i), &used);
            i += used;
            have_coeff = true;
        }
        int power = 0;
        if (i < t.size() && t[i] == '*') {
            if (!have_coeff) throw DomainError("bad residue field element '" + text + "'");
            ++i;
        }
        if (i < t.size() && t[i] == 's') {
            ++i;
            power = 1;
            if (i < t.size() && t[i] == '^') {
                ++i;
                std::size_t used = 0;
                if (i >= t.size() || !std::isdigit(static_cast<unsigned char>(t[i])))
                    throw DomainError("bad exponent in '" + text + "'");
                power = std::stoi(t.substr(i), &used);
                i += used;
            }
        } else if (!have_coeff) {
            throw DomainError("bad residue field element '" + text + "'");
        }
        if (i < t.size() && t[i] != '+' && t[i] != '-') throw DomainError("bad residue field element '" + text + "'");
        acc += FqElem::from_int(spec, sign * coeff) * s.pow(power);
    }
    return acc;
}

std::vector<FqElem> fq_basis(const FieldSpecPtr& spec) {
    std::vector<FqElem> out;
    for (int i = 0; i < spec->f; ++i) {
        std::vector<Int> c(spec->f, 0);
        c[i] = 1;
        out.emplace_back(spec, c);
    }
    return out;
}

std::optional<FqElem> fq_solve_wp(const FqElem& b) {
    // wp is F_p-linear on F_q = F_p^f: solve the f x f system by elimination.
    const auto& spec = b.spec();
    const int f = spec->f;
    const Int p = spec->p;
    const auto basis = fq_basis(spec);
    // Augmented matrix rows = coordinates, columns = basis images | rhs.
    std::vector<std::vector<Int>> m(f, std::vector<Int>(f + 1, 0));
    for (int j = 0; j < f; ++j) {
        const auto img = fq_wp(basis[j]);
        for (int i = 0; i < f; ++i) m[i][j] = img.coeffs()[i];
    }
    for (int i = 0; i < f; ++i) m[i][f] = b.coeffs()[i];
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < f && row < f; ++col) {
        int piv = -1;
        for (int r = row; r < f; ++r)
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[row], m[piv]);
        const Int inv = fp::inverse(m[row][col], p);
        for (auto& x : m[row]) x = x * inv % p;
        for (int r = 0; r < f; ++r) {
            if (r == row || m[r][col] == 0) continue;
            const Int c = m[r][col];
            for (int k = 0; k <= f; ++k) m[r][k] = fp::reduce(m[r][k] - c * m[row][k], p);
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (int r = row; r < f; ++r)
        if (m[r][f] != 0) return std::nullopt;
    std::vector<Int> x(f, 0);
    for (int r = 0; r < row; ++r) x[pivot_col[r]] = m[r][f];
    FqElem sol(spec, x);
    // The full solution set is sol + F_p; return its smallest member.
    FqElem best = sol;
    for (Int c = 1; c < p; ++c) {
        FqElem cand = sol + FqElem::from_int(spec, c);
        if (cand < best) best = cand;
    }
    return best;
}

// ---------------------------------------------------------------- RatFuncElem

RatFuncElem::RatFuncElem(Int p, fp::Poly num, fp::Poly den) : p_(p), num_(std::move(num)), den_(std::move(den)) {
    if (!is_prime(p)) throw DomainError("characteristic is not prime");
    for (auto& c : num_) c = fp::reduce(c, p);
    for (auto& c : den_) c = fp::reduce(c, p);
    fp::trim(num_);
    fp::trim(den_);
    if (den_.empty()) throw DomainError("rational function with zero denominator");
    normalize();
}

RatFuncElem RatFuncElem::constant(Int p, Int c) { return RatFuncElem(p, {c}, {1}); }
RatFuncElem RatFuncElem::t(Int p) { return RatFuncElem(p, {0, 1}, {1}); }

void RatFuncElem::normalize() {
    if (num_.empty()) {
        den_ = {1};
        return;
    }
    const fp::Poly g = fp::gcd(num_, den_, p_);
    if (fp::degree(g) > 0) {
        num_ = fp::divmod(num_, g, p_).first;
        den_ = fp::divmod(den_, g, p_).first;
    }
    const Int lead_inv = fp::inverse(den_.back(), p_);
    num_ = fp::scale(num_, lead_inv, p_);
    den_ = fp::scale(den_, lead_inv, p_);
}

void RatFuncElem::check_same(const RatFuncElem& o) const {
    if (p_ != o.p_) throw DomainError("rational functions over different prime fields");
}

RatFuncElem RatFuncElem::operator+(const RatFuncElem& o) const {
    check_same(o);
    return RatFuncElem(p_, fp::add(fp::mul(num_, o.den_, p_), fp::mul(o.num_, den_, p_), p_), fp::mul(den_, o.den_, p_));
}

RatFuncElem RatFuncElem::operator-(const RatFuncElem& o) const {
    check_same(o);
    return RatFuncElem(p_, fp::sub(fp::mul(num_, o.den_, p_), fp::mul(o.num_, den_, p_), p_), fp::mul(den_, o.den_, p_));
}

RatFuncElem RatFuncElem::operator-() const { return zero_like() - *this; }

RatFuncElem RatFuncElem::operator*(const RatFuncElem& o) const {
    check_same(o);
    return RatFuncElem(p_, fp::mul(num_, o.num_, p_), fp::mul(den_, o.den_, p_));
}

RatFuncElem RatFuncElem::operator/(const RatFuncElem& o) const {
    check_same(o);
    if (o.is_zero()) throw DomainError("division by zero in F_p(t)");
    return RatFuncElem(p_, fp::mul(num_, o.den_, p_), fp::mul(den_, o.num_, p_));
}

RatFuncElem RatFuncElem::pow(Int e) const {
    if (e < 0) return one_like() / pow(-e);
    RatFuncElem r = one_like(), b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

static std::string poly_string(const fp::Poly& a) {
    if (a.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = fp::degree(a); i >= 0; --i) {
        if (a[i] == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0 || a[i] != 1) os << a[i];
        if (i > 0) os << "t";
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

std::string RatFuncElem::to_string() const {
    if (den_ == fp::Poly{1}) return poly_string(num_);
    return "(" + poly_string(num_) + ")/(" + poly_string(den_) + ")";
}

RatFuncElem ratfunc_arith(const RatFuncElem& a, const RatFuncElem& b, FieldOp op) {
    switch (op) {
    case FieldOp::add: return a + b;
    case FieldOp::sub: return a - b;
    case FieldOp::mul: return a * b;
    case FieldOp::div: return a / b;
    }
    throw DomainError("unknown field operation");
}

RatFuncElem ratfunc_frobenius(const RatFuncElem& a) { return a.frobenius(); }
RatFuncElem ratfunc_wp(const RatFuncElem& a) { return a.frobenius() - a; }

} // namespace lcft
