#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "cyclotrace/cyclotomic.hpp"
#include "cyclotrace/ext.hpp"
#include "cyclotrace/poly.hpp"

namespace cyclotrace {

// all monic irreducibles of one degree, each with a distinguished root in the
// canonical F_{q^m} (the root of smallest discrete log)
struct PrimeRootTable {
    std::vector<Poly> primes;        // lex order
    std::vector<std::int64_t> roots; // parallel to primes
};

// marker for "alpha = infinity" in char_via_symbol
struct InfinityPoint {};

// Evaluation context for the power residue symbols (F/P)_s with s | r over a
// fixed F_q with q = 1 mod r. Extensions and prime-root tables are cached per
// degree; warm_up() builds them ahead of multi-threaded use.
class SymbolContext {
  public:
    SymbolContext(const Fq& field, int r);

    const Fq& field() const { return *field_; }
    int r() const { return r_; }
    const CycRing& ring() const { return ring_; }

    const FqExt& ext(int m) const;
    const PrimeRootTable& prime_roots(int m) const;
    void warm_up(int max_degree) const;

    // (F/P)_s as exponent t of xi_s (i.e. value xi_s^t), or -1 when P | F
    int legendre_exp(const Poly& F, const PrimePoly& P, int s) const;
    CycRing::Cyc legendre(const Poly& F, const PrimePoly& P, int s) const;

    // Eq (3.4): 0 unless s | deg F, else chi_{s;1}(leading coefficient)
    int symbol_infinity_exp(const Poly& F, int s) const;
    CycRing::Cyc symbol_infinity(const Poly& F, int s) const;

    // Lemma 3.1 as an executable identity: evaluates both
    // legendre(F, P_alpha, s)^(n/deg P_alpha) and chi_{s;n}(F(alpha)) and
    // asserts they agree
    CycRing::Cyc char_via_symbol(const Poly& F, int n, std::int64_t alpha, int s) const;
    CycRing::Cyc char_via_symbol(const Poly& F, int n, InfinityPoint, int s) const;

    // minimal polynomial of alpha in F_{q^n}
    Poly minimal_polynomial(int n, std::int64_t alpha) const;

    CycRing::Cyc exp_to_cyc(int s, int t) const {
        if (t < 0) return ring_.zero<std::int64_t>();
        return ring_.root_pow<std::int64_t>(static_cast<long long>(r_ / s) * t);
    }

  private:
    const Fq* field_;
    int r_;
    CycRing ring_;
    mutable std::map<int, std::unique_ptr<FqExt>> exts_;
    mutable std::map<int, std::unique_ptr<PrimeRootTable>> roots_;

    std::int64_t root_of(const PrimePoly& P) const;
};

// Per-prime lookup of symbol exponents tau = log(h(rho_P)) mod r for every
// monic h with deg h <= dmax, indexed by degree then lex code. tau = r flags
// P | h. Built in one linear pass (Horner step per code).
struct MonicSymbolTable {
    int r = 0;
    int dmax = 0;
    std::vector<std::vector<std::int8_t>> tau; // [deg][code]

    int exponent(int deg, std::int64_t code) const { return tau[deg][code]; }
};

MonicSymbolTable build_monic_symbol_table(const SymbolContext& ctx, int m_prime_deg,
                                          std::int64_t root, int dmax);

} // namespace cyclotrace
