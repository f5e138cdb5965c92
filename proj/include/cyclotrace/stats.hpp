#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclotrace/family.hpp"
#include "cyclotrace/traces.hpp"

namespace cyclotrace {

// ---- trace averages, MT/ET split ----

struct SampleMode {
    std::size_t count = 0;
    std::uint64_t seed = 0;
};

struct TraceReport {
    int n = 0;
    BigInt family_size;
    BigRat avg_scaled;        // <t_n> = q^{n/2} <Tr(Theta^n)>
    BigRat mt_scaled;         // q^{n/2} MT_r(g,n)
    BigRat et_scaled;         // q^{n/2} ET_r(g,n)
    BigRat prediction_main;   // -sum_{s|(r,n),s!=1} phi(s) q^{n/s} - q^{n/2} D_r(g,n)
    BigRat residual;          // |avg_scaled - prediction_main|
    double bound_envelope = 0.0;
    bool exact_zero_expected = false; // (r, n) = 1
    bool decomposition_exact = false; // avg == mt + et checked exactly
    bool sampled = false;
    double std_error = 0.0; // sampled mode only (scaled units)
};

// q^{n/2} MT_r(g,n) as an exact rational (finite primes via conductor counts,
// P_inf via its branch convention)
BigRat mt_term_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n);

// q^{n/2} ET_r(g,n), exact. Computes the section-3.4 definition and the
// monic reduction and asserts exact equality when the family is enumerable;
// falls back to the generating-series route above that size.
BigRat et_term_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n);

// the three ET routes, exposed for cross-tests
BigRat et_definition_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n);
BigRat et_monic_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n);
BigRat et_series_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n);

// S_{j;k}(D;P) by direct enumeration over the monic family slice
CycRing::Cyc s_jk_sum(const SymbolContext& ctx, const FamilySpec& spec, int j, int k, int D,
                      const PrimePoly& P, int n);

// q^{n/2} D_r(g,n): sum over finite primes of degree | n
BigRat d_r_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n);

// a = 0 combinatorial identity: lhs = sum_{m|n} m pi_q(m) ((r, n/m) - 1),
// rhs = sum_{s | (r,n), s != 1} phi(s) q^{n/s}
std::pair<std::int64_t, std::int64_t> a0_identity(std::int64_t q, int r, int n);

enum class MatrixGroup { USp, U, Ms };
// analytic moments; for Ms pass s and require phi(s) | N, 1 <= n <= N/phi(s)
std::int64_t rmt_moment(MatrixGroup group, int N, int n, int s = 0);

TraceReport average_scaled_trace(const SymbolContext& ctx, const FamilySpec& spec, int n,
                                 const std::optional<SampleMode>& sample = std::nullopt,
                                 int jobs = 1);

std::vector<TraceReport> verify_theorem_1_5(const SymbolContext& ctx, const FamilySpec& spec,
                                            int n_max,
                                            const std::optional<SampleMode>& sample = std::nullopt,
                                            int jobs = 1);

// ---- test functions and one-level densities ----

struct TestFunction {
    enum class Kind { FejerEven, FejerOneSided, Table };
    Kind kind = Kind::FejerEven;
    double alpha = 0.5; // support bound: hat f = 0 outside [-alpha, alpha] (even)
                        // or [0, alpha) (one-sided)
    bool one_sided() const { return kind == Kind::FejerOneSided || (kind == Kind::Table && table_one_sided); }
    bool table_one_sided = false;
    std::vector<std::pair<double, double>> table; // (x, hat f(x)) grid points

    static TestFunction fejer_even(double alpha);
    static TestFunction fejer_one_sided(double alpha);
    static TestFunction from_table(std::vector<std::pair<double, double>> pts, bool one_sided,
                                   double support_bound);

    double fhat(double x) const;
    // inverse transform at y (closed form, built-ins only)
    std::complex<double> f(double y) const;
};

struct DensityPair {
    double spectral = 0.0;
    double eigenangle = 0.0;
};

// spectral route only: (1/2g) sum hat f(n/2g) t_n / q^{n/2}; works for every
// test-function kind
double one_level_density_spectral(const SymbolContext& ctx, const Curve& curve,
                                  const TestFunction& f);

// one curve, both routes: spectral plus the eigenangle route through the
// L-polynomial; the two agree within 1e-6. Table test functions have no
// closed form, so the eigenangle route refuses them.
DensityPair one_level_density_curve(const SymbolContext& ctx, const Curve& curve,
                                    const TestFunction& f);

// family average of D(L_C, f); exhaustive via exact trace sums, or sampled
double family_density_average(const SymbolContext& ctx, const FamilySpec& spec,
                              const TestFunction& f,
                              const std::optional<SampleMode>& sample = std::nullopt,
                              int jobs = 1);

// deviation term of the refined density prediction
double dev_r(const SymbolContext& ctx, const FamilySpec& spec, const TestFunction& f);

// hat f(0) - (1/2g) sum_{s|r,s!=1} phi(s) sum_n q^{n(1-s/2)} hat f(ns/2g),
// minus dev_r(f)/(2g) when full = true
double refined_prediction(const SymbolContext& ctx, const FamilySpec& spec,
                          const TestFunction& f, bool full = true);

// Katz-Sarnak prediction for the ambient symmetry type (USp for even r, U
// for odd r)
double ks_prediction(const SymbolContext& ctx, const FamilySpec& spec, const TestFunction& f);

struct DensityReport {
    int g = 0;
    double lhs = 0.0;
    double rhs_refined = 0.0;
    double rhs_ks = 0.0;
    double dev_r_value = 0.0;
    double residual_refined = 0.0;
    double residual_ks = 0.0;
    bool sampled = false;
};

DensityReport density_report(const SymbolContext& ctx, const FamilySpec& spec,
                             const TestFunction& f,
                             const std::optional<SampleMode>& sample = std::nullopt,
                             int jobs = 1);

} // namespace cyclotrace
