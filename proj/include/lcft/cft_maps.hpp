#pragma once

// Reciprocity machinery for cyclic totally ramified extensions: norm
// subgroups, the map Upsilon through the fixed field of phi*sigma, the map Psi
// (norm equation in L*M plus g^{-1} by membership), the exact-sequence checks,
// the enumeration of cyclic degree-p extensions and the theorem verifiers.

#include "lcft/eisenstein_ext.hpp"
#include "lcft/unit_group.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lcft {

/// Unramified M/F of degree d = p^k, built from Artin-Schreier levels
/// y^p - y - a over the tower of F, with the Frobenius of M/F.
struct UnramTower {
    LocalRing M;
    int d = 1;
    int base_levels = 0;
    TowerHom frob;
};

/// `choice` selects among admissible Artin-Schreier constants (0 = first).
UnramTower unram_tower(const LocalRing& F, int d, int choice = 0);

/// A cyclic L/F with a generator and its powers.
struct CyclicExt {
    ExtPtr L;
    CyclicStructure gal; // gal.powers[k] = sigma^k
    int log_degree = 0;  // e = p^m

    Int p() const { return L->p(); }
    int degree() const { return L->degree(); }
    /// max over sigma != 1 of v_L(sigma(pi_L) - pi_L) - 1.
    int max_lower_break() const;
};

CyclicExt make_cyclic(ExtPtr L);

/// L*M = M[x]/(g) with the lifted Galois action.
struct Composite {
    const CyclicExt* base = nullptr;
    UnramTower M;
    ExtPtr LM;
    TowerHom phi;                 // Frobenius of M/F, fixing pi_L
    std::vector<TowerHom> sigma;  // sigma^k on L*M
    std::vector<Elem> sigma_image; // sigma^k(pi_L) in L*M

    /// (phi sigma^k)
    TowerHom phi_sigma(int k) const;
    const LocalRing& ring() const { return LM->local(); }
};

Composite make_composite(const CyclicExt& C, int d, int choice = 0);

struct NormGroup {
    UnitSubgroup subgroup;
    int levels_used = 0; // filtration levels 1..levels_used of U_{1,L} were normed
    int stable_from = 0; // first level after which the subgroup never changed
};

/// N_{L/F} U_{1,L} inside ctx.quotient(). With `expected_log_index`, the index
/// is enforced (CheckFailure on mismatch).
NormGroup norm_subgroup(const EisensteinExt& L, const UnitContext& ctx,
                        std::optional<int> expected_log_index = std::nullopt);
/// The same for a cyclic extension, enforcing index p^{min(n, m)}.
NormGroup norm_subgroup(const CyclicExt& C, const UnitContext& ctx);

/// The principal unit u / tau(u mod p) with N(pi_L) = p * u, as an element of ctx.field().
UnramElem norm_prime_unit(const EisensteinExt& L, const UnitContext& ctx, const UnramElem& pi);
/// Whether pi = p * u is a norm from L, decided on principal-unit classes.
bool prime_in_norms(const EisensteinExt& L, const UnitContext& ctx, const NormGroup& N, std::optional<UnramElem> pi = std::nullopt);

struct UpsilonResult {
    int k = 0;        // chi(Frob) = sigma^k
    int d = 1;        // degree of M
    ZVec coset;       // normal form of the class modulo the norm group
    UnitClass unit;   // class of the principal part of N(pi_chi) / N(pi_L)
    int pi_chi_valuation = 1;
};

struct UpsilonOptions {
    int beta_choice = 0; // which trace-unit element builds pi_chi
    int tower_choice = 0; // which Artin-Schreier modulus builds M
};

UpsilonResult upsilon(const CyclicExt& C, int k, const UnitContext& ctx, const NormGroup& N,
                      const UpsilonOptions& opt = {});

enum class PsiStrategy { hazewinkel, inversion };

struct PsiResult {
    int k = 0;           // chi(Frob) = sigma^k
    int tower_degree = 1; // degree of the M that solved the norm equation
    int test_level = 0;   // filtration level of the membership test
    int matches = 0;      // number of sigma' passing the membership test
};

struct PsiOptions {
    /// Tower growth bound is p^max_growth * [L:F].
    int max_growth = 3;
    std::optional<int> test_level;
    /// Precomputed Upsilon values for the inversion strategy (index k).
    const std::vector<UpsilonResult>* upsilon_table = nullptr;
};

PsiResult psi(const CyclicExt& C, const UnramElem& eps, const UnitContext& ctx, const NormGroup& N,
              PsiStrategy strategy, const PsiOptions& opt = {});

/// Sequence checks at U_{1,LM}/U_{1,LM}^{p^r}.
struct SequenceReport {
    bool g_injective = false;
    bool norm_kills_g = false;
    bool set_identity = false;
    int rank = 0;
    int log_order_I = 0;
    std::vector<std::string> witnesses;
    bool pass() const { return g_injective && norm_kills_g && set_identity; }
};

SequenceReport sequence_check(const CyclicExt& C, int d, int r);

// ---------------------------------------------------------------- enumeration

struct EnumerationOptions {
    int B = 3;
    Int budget = 1000000;
    std::optional<int> precision;
    /// pi = p * u; defaults to u = 1.
    std::optional<std::vector<Int>> pi_unit;
};

struct EnumerationResult {
    std::vector<CyclicExt> exts;
    std::vector<NormGroup> norm_groups;
    Int candidates = 0;
    Int abelian_candidates = 0;
    Int predicted = 0;
    bool count_matches = false;
    bool cross_roots_ok = true;
    std::vector<std::string> notes;
};

/// Cyclic degree-p totally ramified L/F with pi in N(L^*), up to isomorphism
/// (n = 1 only). The count is compared with (q - 1)/(p - 1).
EnumerationResult enumerate_cyclic_exts(FieldSpecPtr spec, const UnitContext& ctx, const EnumerationOptions& opt = {});

/// Precision used for a cyclic extension of degree e when classes live mod U^{p^n}.
int cft_precision(Int p, int e, int n);

} // namespace lcft
