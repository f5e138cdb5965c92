#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "cyclotrace/bigint.hpp"
#include "cyclotrace/cyclotomic.hpp"
#include "cyclotrace/poly.hpp"
#include "cyclotrace/rng.hpp"
#include "cyclotrace/symbols.hpp"

namespace cyclotrace {

// The thin family of r-cyclic covers y^r = alpha * prod_{(i,r)=1} f_i^i of a
// fixed genus g over F_q, q = 1 mod r, 2g = 0 mod r-1.
struct FamilySpec {
    const Fq* field = nullptr;
    int r = 0;
    int g = 0;
    int d = 0; // (2g + 2r - 2)/(r - 1)

    FamilySpec(const Fq& f, int r_, int g_);

    std::vector<int> part_indices() const; // i in [1, r) with (i, r) = 1
};

enum class DegreeBranch {
    FullRadical, // (deg F, r) = r, radical degree d
    Coprime      // (deg F, r) = 1, radical degree d - 1
};

struct ThinModel {
    int alpha_index = 0; // alpha = beta^alpha_index mod r-th powers
    DegreeBranch branch = DegreeBranch::FullRadical;
    std::vector<std::pair<int, Poly>> parts; // (i, f_i), ascending i, f_i monic

    int radical_degree() const {
        int s = 0;
        for (const auto& [i, f] : parts) s += f.degree();
        return s;
    }
    int deg_f() const {
        int s = 0;
        for (const auto& [i, f] : parts) s += i * f.degree();
        return s;
    }
    // full model polynomial alpha * prod f_i^i
    Poly full_polynomial(const Fq& field) const;
};

// genus from 2g + 2r - 2 = (r-1) * sum deg f_i + r - (r, deg F)
int genus_of(int r, const std::vector<std::pair<int, Poly>>& parts);

// exact coefficients [u^0..u^dmax] of H_{r;s}(u;G) =
//   prod_{P not | G} (1 + (phi(r)/phi(s)) sum_{(i,s)=1} (xi_s^i u)^deg P)
// (conductor G = monic poly, or infinite/none). Values in Z[xi_r].
struct SeriesTable {
    int r = 0;
    int s = 0;
    int d_max = 0;
    std::vector<CycRing::BigCyc> coeffs;
};

// conductor: counts of *distinct* prime factors of G per degree
struct Conductor {
    std::map<int, int> excluded_primes_by_degree;

    static Conductor trivial() { return {}; }
    static Conductor of(const Poly& G);
};

SeriesTable series_coeff(const SymbolContext& ctx, int s, const Conductor& G, int d_max);

// |F-hat_{r;k}(D;G)|: monic members with radical degree D and deg F = k mod r
BigInt khat_count(const SymbolContext& ctx, const FamilySpec& spec, int D, int k,
                  const Conductor& G);

// |F^thin_r(g;G)| for finite conductor G (trivial G gives the full count);
// the infinite prime uses count_family_infinity
BigInt count_family(const SymbolContext& ctx, const FamilySpec& spec, const Conductor& G);
BigInt count_family_infinity(const SymbolContext& ctx, const FamilySpec& spec);

// evaluates (1/r) sum_s phi(s) [u^d] H_{r;s} + (phi(r)/r) sum_s mu(s) [u^{d-1}] H_{r;s}
// and multiplies back by r; must equal count_family with trivial conductor
BigInt count_from_series(const SymbolContext& ctx, const FamilySpec& spec);

// Lemma 4.3 right-hand side: the inclusion-exclusion expansion of
// [u^d] H_{r;s}(u;P) from the conductor-free coefficients
CycRing::BigCyc incexc_coeff(const SymbolContext& ctx, int s, const PrimePoly& P, int d);

// Proposition 4.1 / Corollary 4.7
struct UnramRatio {
    BigRat exact;   // |F(g;P)| / |F(g)|
    BigRat formula; // sum_{a=0}^{floor(d/n)} (-phi(r)/q^n)^a (1 - an/d)^{phi(r)-1}
    BigRat residual;
};
UnramRatio unram_ratio(const SymbolContext& ctx, const FamilySpec& spec, const PrimePoly& P);

// deterministic exhaustive enumeration; callback per member
void enumerate_family(const SymbolContext& ctx, const FamilySpec& spec,
                      const std::function<void(const ThinModel&)>& fn);

// monic layer of the family: every coprime squarefree tuple of both degree
// branches, alpha not included (callers multiply by the r alpha classes)
void enumerate_family_monic(const SymbolContext& ctx, const FamilySpec& spec,
                            const std::function<void(const ThinModel&)>& fn);

// all coprime squarefree monic tuples (f_i)_{(i,r)=1} with radical degree
// exactly D, no congruence filter; branch field of the emitted model is
// meaningful only modulo the caller's own filter
void enumerate_monic_radical(const SymbolContext& ctx, const FamilySpec& spec, int D,
                             const std::function<void(const ThinModel&)>& fn);

std::vector<ThinModel> sample_family(const SymbolContext& ctx, const FamilySpec& spec,
                                     std::size_t count, std::uint64_t seed);

} // namespace cyclotrace
