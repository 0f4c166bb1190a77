#pragma once

// Theorem verifiers over finite quotients and their JSON reports.

#include "lcft/cft_maps.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace lcft {

using nlohmann::json;

/// {check, parameters, witnesses, pass}
struct Report {
    std::string check;
    json parameters = json::object();
    json witnesses = json::object();
    bool pass = false;

    json to_json() const;
};

/// {n, p, f, log_index, howell_basis}
json subgroup_to_json(const UnitSubgroup& H, const UnitContext& ctx);
/// {base_spec: {p, f}, g, provenance, degree}; entries of g are balanced residues,
/// one integer per s-coefficient.
json ext_to_json(const EisensteinExt& L);
/// Balanced residue of an element of O_F / p^N, one entry per s-power.
json elem_to_json(const UnramField& F, const Elem& a);

struct VerifyOptions {
    int precision_offset = 0;
    Int budget = 1000000;
    int B = 3;
};

/// Witt ring operations against integer arithmetic in O_F / p^n through
/// witt_to_int. Exhaustive over pairs when samples = 0, else random pairs.
Report verify_witt_iso(FieldSpecPtr spec, int n, int samples = 0, std::uint64_t seed = 1);
/// Counts the distinct classes of E_{n,pi}(W_n(F_q)) in the filtered presentation
/// of U_1/U_1^{p^n} against q^n, with the homomorphism property on sampled pairs.
Report verify_en_pi_bijective(FieldSpecPtr spec, int n, int precision_offset = 0);
/// Random non-Teichmuller lifts change E_{n,pi}(a) only by p^n-th powers.
Report verify_en_pi_lifting(FieldSpecPtr spec, int n, int samples = 100, std::uint64_t seed = 1,
                            int precision_offset = 0);

/// A catalog entry together with the unit context it is checked in.
struct CatalogCase {
    Int p = 3;
    int f = 1;
    int level = 1; // catalog polynomial of degree p^level
    int n = 1;     // classes modulo U^{p^n}
};

CyclicExt catalog_extension(const CatalogCase& c, const VerifyOptions& opt = {});
UnitContext catalog_context(const CatalogCase& c, const VerifyOptions& opt = {});

/// Upsilon as a group isomorphism onto U_1/N (homomorphism table, bijectivity,
/// index) and its independence of auxiliary choices.
Report verify_upsilon(const CyclicExt& C, const UnitContext& ctx, int alternatives = 3);
/// Psi(Upsilon(sigma^k)) = k for every k, with both strategies agreeing.
Report verify_psi(const CyclicExt& C, const UnitContext& ctx);
Report verify_sequence(const CyclicExt& C, int d, int r);
/// Pairwise distinct norm groups, and strict reverse inclusion for the nested pairs
/// (indices into Ls, smaller field first).
Report uniqueness_check(const std::vector<CyclicExt>& Ls, const std::vector<NormGroup>& N,
                        const std::vector<std::pair<int, int>>& nested = {});
/// Norm groups of distinct extensions meet with index p^2.
Report intersection_check(const std::vector<NormGroup>& N, int expected_log_index);
/// A = B for the norm groups A of the cyclic degree-p^n extensions with p a norm
/// and the subgroups B built from E_{n,pi}(F(w) wp(W_n)). n = 1 enumerates A;
/// larger n only checks catalog witnesses against B.
Report correspondence_check(FieldSpecPtr spec, int n, const VerifyOptions& opt = {});

/// The correspondence table as CSV: w,subgroup,extension.
std::string correspondence_csv(const Report& r);

} // namespace lcft
