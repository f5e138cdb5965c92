#pragma once

// Test-side oracles. These deliberately avoid the library's discrete-log and
// series machinery so the checks stay independent of the paths they certify.

#include <cstdint>
#include <map>
#include <vector>

#include "cyclotrace/ext.hpp"
#include "cyclotrace/poly.hpp"
#include "cyclotrace/symbols.hpp"

namespace oracle {

using namespace cyclotrace;

// Euler criterion: (F/P)_s = the t with (F mod P)^((q^m - 1)/s) = mu^t where
// mu = beta^((q-1)/s); -1 when P | F. Plain polynomial exponentiation in
// F_q[x]/(P), no log tables.
inline int euler_symbol_exp(const Fq& field, const Poly& F, const Poly& P, int s) {
    int m = P.degree();
    Poly R = poly_mod(F, P);
    if (R.is_zero()) return -1;
    std::int64_t qm = 1;
    for (int i = 0; i < m; ++i) qm *= field.q();
    std::int64_t e = (qm - 1) / s;
    Poly acc = Poly::one(field);
    Poly base = R;
    while (e) {
        if (e & 1) acc = poly_mod(acc * base, P);
        base = poly_mod(base * base, P);
        e >>= 1;
    }
    if (acc.degree() != 0) throw std::logic_error("euler value not a constant");
    int c = acc.c[0];
    int mu = field.pow(field.generator(), (field.q() - 1) / s);
    int x = 1;
    for (int t = 0; t < s; ++t) {
        if (x == c) return t;
        x = field.mul(x, mu);
    }
    throw std::logic_error("euler value not an s-th root of unity");
}

// counts monic irreducibles of degree m by trial division over plain integer
// polynomial codes (prime fields only)
inline std::int64_t count_irreducibles_prime_field(std::int64_t p, int m) {
    auto mul = [&](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> out(a.size() + b.size() - 1, 0);
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                out[i + j] = static_cast<int>((out[i + j] + static_cast<std::int64_t>(a[i]) * b[j]) % p);
        return out;
    };
    // sieve of monic composites up to degree m
    auto code_of = [&](const std::vector<int>& f) {
        std::int64_t c = 0;
        for (int i = static_cast<int>(f.size()) - 2; i >= 0; --i) c = c * p + f[i];
        return c;
    };
    std::vector<std::vector<char>> is_comp(m + 1);
    std::vector<std::vector<std::vector<int>>> irr(m + 1);
    std::int64_t pk = 1;
    for (int d = 1; d <= m; ++d) {
        pk *= p;
        is_comp[d].assign(pk, 0);
    }
    std::int64_t total = 0;
    for (int d = 1; d <= m; ++d) {
        std::int64_t pd = 1;
        for (int i = 0; i < d; ++i) pd *= p;
        for (std::int64_t code = 0; code < pd; ++code) {
            if (is_comp[d][code]) continue;
            std::vector<int> f(d + 1, 0);
            f[d] = 1;
            std::int64_t c = code;
            for (int i = 0; i < d; ++i) {
                f[i] = static_cast<int>(c % p);
                c /= p;
            }
            irr[d].push_back(f);
            if (d == m) ++total;
            // mark products f * h for deg h <= m - d
            for (int e = 1; e + d <= m; ++e) {
                std::int64_t pe = 1;
                for (int i = 0; i < e; ++i) pe *= p;
                for (std::int64_t hc = 0; hc < pe; ++hc) {
                    std::vector<int> h(e + 1, 0);
                    h[e] = 1;
                    std::int64_t hh = hc;
                    for (int i = 0; i < e; ++i) {
                        h[i] = static_cast<int>(hh % p);
                        hh /= p;
                    }
                    is_comp[d + e][code_of(mul(f, h))] = 1;
                }
            }
        }
    }
    if (m == 1) return p;
    return total;
}

// brute fiber count of y^r = F(x) over F_p (prime field, n = 1) by modular
// arithmetic alone, with the model's convention at infinity
inline std::int64_t brute_points_prime_field(std::int64_t p, int r,
                                             const std::vector<int>& F_coeffs, int degF) {
    auto eval = [&](std::int64_t x) {
        std::int64_t acc = 0;
        for (int i = static_cast<int>(F_coeffs.size()) - 1; i >= 0; --i)
            acc = (acc * x + F_coeffs[i]) % p;
        return acc;
    };
    std::int64_t cnt = 0;
    for (std::int64_t x = 0; x < p; ++x) {
        std::int64_t v = eval(x);
        for (std::int64_t y = 0; y < p; ++y) {
            std::int64_t yr = 1;
            for (int i = 0; i < r; ++i) yr = yr * y % p;
            if (yr == v) ++cnt;
        }
    }
    if (degF % r == 0) {
        std::int64_t lc = F_coeffs[degF];
        for (std::int64_t y = 0; y < p; ++y) {
            std::int64_t yr = 1;
            for (int i = 0; i < r; ++i) yr = yr * y % p;
            if (y != 0 && yr == lc) ++cnt;
        }
    } else {
        cnt += 1;
    }
    return cnt;
}

} // namespace oracle
