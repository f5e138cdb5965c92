#pragma once

#include <cstdint>
#include <vector>

#include "cyclotrace/family.hpp"
#include "cyclotrace/symbols.hpp"

namespace cyclotrace {

// F_(s) = prod_k f_k^(k mod s) over the model's parts (exponents k mod s are
// nonzero for thin models since (k, r) = 1); F_(s)(infinity) handling follows
// the point-count convention
Poly f_sub(const Fq& field, const ThinModel& model, int s);

struct Curve {
    const FamilySpec* spec = nullptr;
    ThinModel model;
    mutable std::vector<std::int64_t> t_cache; // t_cache[n-1] = t_n once computed

    Curve(const FamilySpec& s, ThinModel m) : spec(&s), model(std::move(m)) {}
};

// #C(F_{q^n}) via the character sum over P^1(F_{q^n})
std::int64_t count_points(const SymbolContext& ctx, const Curve& curve, int n);

// brute-force fiber count: for each affine x, #{y : y^r = F(x)}, plus the
// same infinity convention; independent of the character machinery
std::int64_t count_points_direct(const SymbolContext& ctx, const Curve& curve, int n);

// t_n = q^n + 1 - #C(F_{q^n}) = q^{n/2} Tr(Theta^n), cached
std::int64_t scaled_trace(const SymbolContext& ctx, const Curve& curve, int n);

// Lemma 3.4 right-hand side (negated trace, scaled): sums deg(P) * symbol
// powers over all primes of degree | n, including the prime at infinity;
// returns the integer equal to -t_n
std::int64_t trace_formula_thin(const SymbolContext& ctx, const Curve& curve, int n);

// Lemma 3.3 with F_(s); equals trace_formula_thin for thin models
std::int64_t trace_formula_general(const SymbolContext& ctx, const Curve& curve, int n);

struct LPolynomial {
    std::vector<std::int64_t> coeffs; // degree 2g, c_0 = 1
    int genus = 0;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// from t_1..t_g via Newton's identities plus the functional equation
// c_{2g-k} = q^{g-k} c_k; checks the Riemann hypothesis on the roots
LPolynomial l_polynomial(const SymbolContext& ctx, const Curve& curve);
LPolynomial l_polynomial_from_traces(std::int64_t q, int g,
                                     const std::vector<std::int64_t>& t);

// 2g angles sorted ascending in [0, 2pi); roots of L are q^{-1/2} e^{i theta}
std::vector<double> eigenangles(std::int64_t q, const LPolynomial& L);

// largest deviation of |root| from q^{-1/2}, for RH checks
double rh_root_deviation(std::int64_t q, const LPolynomial& L);

// Flat per-curve trace table for a whole family (exhaustive scans).
// Curves are indexed in enumeration order; traces t_n for n = 1..n_max.
struct FamilyTraces {
    int n_max = 0;
    int nparts = 0;
    std::size_t size = 0;
    std::vector<std::int8_t> alpha;       // alpha_index per curve
    std::vector<std::int8_t> branch;      // 0 = FullRadical, 1 = Coprime
    std::vector<std::int64_t> t;          // size * n_max, row-major
    std::vector<std::int64_t> part_code;  // size * nparts, lex codes
    std::vector<std::int8_t> part_deg;    // size * nparts

    std::int64_t trace(std::size_t idx, int n) const { return t[idx * n_max + (n - 1)]; }
};

// jobs > 1 splits each prime class across worker threads; every worker
// accumulates into a private table, and the integer merges reproduce the
// serial result exactly
FamilyTraces family_traces(const SymbolContext& ctx, const FamilySpec& spec, int n_max,
                           int jobs = 1);

// t_n for an explicit model list (sampled mode)
std::vector<std::int64_t> model_traces(const SymbolContext& ctx, const FamilySpec& spec,
                                       const std::vector<ThinModel>& models, int n);

} // namespace cyclotrace
