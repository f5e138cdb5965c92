#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cyclotrace/bigint.hpp"
#include "cyclotrace/cyclotomic.hpp"
#include "cyclotrace/fq.hpp"

namespace cyclotrace {

// univariate polynomial over a fixed Fq; coefficient element codes low->high,
// no trailing zeros (zero polynomial = empty vector)
struct Poly {
    const Fq* field = nullptr;
    std::vector<int> c;

    Poly() = default;
    Poly(const Fq& f, std::vector<int> coeffs) : field(&f), c(std::move(coeffs)) { trim(); }

    static Poly zero(const Fq& f) { return Poly(f, {}); }
    static Poly one(const Fq& f) { return Poly(f, {1}); }
    static Poly constant(const Fq& f, int v) { return Poly(f, {v}); }
    static Poly x(const Fq& f) { return Poly(f, {0, 1}); }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    int leading() const { return c.empty() ? 0 : c.back(); }
    bool is_monic() const { return !c.empty() && c.back() == 1; }
    int eval(int x) const;

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool operator==(const Poly& o) const { return c == o.c; }
};

Poly operator+(const Poly& f, const Poly& g);
Poly operator-(const Poly& f, const Poly& g);
Poly operator*(const Poly& f, const Poly& g);
Poly scale(int k, const Poly& f);

// quotient and remainder, g nonzero
std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g);
Poly poly_mod(const Poly& f, const Poly& g);
Poly make_monic(const Poly& f);

// monic gcd
Poly poly_gcd(const Poly& f, const Poly& g);
Poly derivative(const Poly& f);

bool is_squarefree(const Poly& f);

// product of distinct monic irreducible factors (char-p aware)
Poly radical(const Poly& f);

// monic irreducible of degree >= 1, or the prime at infinity (degree 1 by
// convention)
struct PrimePoly {
    bool infinite = false;
    Poly poly;

    static PrimePoly at_infinity() {
        PrimePoly p;
        p.infinite = true;
        return p;
    }
    static PrimePoly finite(Poly f); // certifies irreducibility

    int degree() const { return infinite ? 1 : poly.degree(); }
};

bool is_irreducible(const Poly& f);

// factorization into (monic irreducible, multiplicity); deg f <= 64
std::vector<std::pair<Poly, int>> factor(const Poly& f);

// all monic irreducibles of degree m in lexicographic order (degree, then
// coefficients from the constant term up, elements ranked 0-first-then-by-dlog)
std::vector<Poly> enumerate_irreducibles(const Fq& field, int m);

// pi_q(m) = (1/m) sum_{e|m} mu(e) q^{m/e}
std::int64_t prime_count(std::int64_t q, int m);
BigInt prime_count_big(std::int64_t q, int m);

// lexicographic rank-digit code of a monic polynomial of its degree class:
// code = sum rank(c_i) * q^(deg-1-i), so ascending code = ascending lex
std::int64_t monic_code(const Poly& f);
Poly monic_from_code(const Fq& field, int deg, std::int64_t code);

} // namespace cyclotrace
