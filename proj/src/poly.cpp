#include "cyclotrace/poly.hpp"

#include <algorithm>
#include <cassert>

namespace cyclotrace {

int Poly::eval(int x) const {
    const Fq& F = *field;
    int acc = 0;
    for (int i = degree(); i >= 0; --i) acc = F.add(F.mul(acc, x), c[i]);
    return acc;
}

Poly operator+(const Poly& f, const Poly& g) {
    const Fq& F = *f.field;
    std::vector<int> out(std::max(f.c.size(), g.c.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int a = i < f.c.size() ? f.c[i] : 0;
        int b = i < g.c.size() ? g.c[i] : 0;
        out[i] = F.add(a, b);
    }
    return Poly(F, std::move(out));
}

Poly operator-(const Poly& f, const Poly& g) {
    const Fq& F = *f.field;
    std::vector<int> out(std::max(f.c.size(), g.c.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int a = i < f.c.size() ? f.c[i] : 0;
        int b = i < g.c.size() ? g.c[i] : 0;
        out[i] = F.sub(a, b);
    }
    return Poly(F, std::move(out));
}

Poly operator*(const Poly& f, const Poly& g) {
    const Fq& F = *f.field;
    if (f.is_zero() || g.is_zero()) return Poly::zero(F);
    std::vector<int> out(f.c.size() + g.c.size() - 1, 0);
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        if (!f.c[i]) continue;
        for (std::size_t j = 0; j < g.c.size(); ++j)
            if (g.c[j]) out[i + j] = F.add(out[i + j], F.mul(f.c[i], g.c[j]));
    }
    return Poly(F, std::move(out));
}

Poly scale(int k, const Poly& f) {
    const Fq& F = *f.field;
    std::vector<int> out(f.c);
    for (auto& v : out) v = F.mul(k, v);
    return Poly(F, std::move(out));
}

std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g) {
    const Fq& F = *f.field;
    if (g.is_zero()) throw std::domain_error("division by zero polynomial");
    if (f.degree() < g.degree()) return {Poly::zero(F), f};
    std::vector<int> rem(f.c);
    std::vector<int> quo(f.degree() - g.degree() + 1, 0);
    int inv_lead = F.inv(g.leading());
    for (int i = f.degree(); i >= g.degree(); --i) {
        int cur = rem[i];
        if (!cur) continue;
        int q = F.mul(cur, inv_lead);
        quo[i - g.degree()] = q;
        for (int j = 0; j <= g.degree(); ++j)
            rem[i - g.degree() + j] = F.sub(rem[i - g.degree() + j], F.mul(q, g.c[j]));
    }
    return {Poly(F, std::move(quo)), Poly(F, std::move(rem))};
}

Poly poly_mod(const Poly& f, const Poly& g) { return divmod(f, g).second; }

Poly make_monic(const Poly& f) {
    if (f.is_zero()) return f;
    if (f.is_monic()) return f;
    return scale(f.field->inv(f.leading()), f);
}

Poly poly_gcd(const Poly& f, const Poly& g) {
    if (f.is_zero() && g.is_zero()) throw BothZeroError("gcd(0, 0)");
    Poly a = f, b = g;
    while (!b.is_zero()) {
        Poly t = poly_mod(a, b);
        a = b;
        b = t;
    }
    return make_monic(a);
}

Poly derivative(const Poly& f) {
    const Fq& F = *f.field;
    if (f.degree() < 1) return Poly::zero(F);
    std::vector<int> out(f.degree(), 0);
    for (int i = 1; i <= f.degree(); ++i) {
        // i mod p as an element code is the constant i*1 in any F_{p^a}
        out[i - 1] = F.mul(f.c[i], static_cast<int>(i % F.p()));
    }
    return Poly(F, std::move(out));
}

bool is_squarefree(const Poly& f) {
    if (f.is_zero()) throw ZeroPolynomialError("is_squarefree(0)");
    if (f.degree() == 0) return true;
    Poly d = derivative(f);
    if (d.is_zero()) return false; // p-th power
    return poly_gcd(f, d).degree() == 0;
}

namespace {

// p-th root of f = g(x^p); in F_q with q = p^a the root of a coefficient c is
// c^(p^(a-1))
Poly pth_root(const Poly& f) {
    const Fq& F = *f.field;
    std::int64_t p = F.p();
    std::int64_t e = 1;
    for (int i = 0; i < F.a() - 1; ++i) e *= p;
    std::vector<int> out(f.degree() / static_cast<int>(p) + 1, 0);
    for (int i = 0; i <= f.degree(); ++i) {
        if (!f.c[i]) continue;
        assert(i % p == 0);
        out[i / p] = F.pow(f.c[i], e);
    }
    return Poly(F, std::move(out));
}

} // namespace

Poly radical(const Poly& f) {
    if (f.is_zero()) throw ZeroPolynomialError("radical(0)");
    const Fq& F = *f.field;
    Poly g = make_monic(f);
    if (g.degree() == 0) return Poly::one(F);
    Poly d = derivative(g);
    if (d.is_zero()) return radical(pth_root(g));
    Poly gc = poly_gcd(g, d);
    if (gc.degree() == 0) return g;
    Poly w = divmod(g, gc).first;      // each prime with multiplicity not
                                       // divisible by p, once
    Poly rest = radical(gc);
    return divmod(w * rest, poly_gcd(w, rest)).first; // lcm of two squarefrees
}

std::int64_t prime_count(std::int64_t q, int m) {
    if (m < 1) throw std::invalid_argument("degree must be >= 1");
    std::int64_t acc = 0;
    for (int e = 1; e <= m; ++e) {
        if (m % e) continue;
        int mu = moebius(e);
        if (!mu) continue;
        std::int64_t pw = 1;
        for (int i = 0; i < m / e; ++i) pw *= q;
        acc += mu * pw;
    }
    return acc / m;
}

BigInt prime_count_big(std::int64_t q, int m) {
    if (m < 1) throw std::invalid_argument("degree must be >= 1");
    BigInt acc = 0;
    for (int e = 1; e <= m; ++e) {
        if (m % e) continue;
        int mu = moebius(e);
        if (!mu) continue;
        acc += mu * big_pow(BigInt(q), static_cast<unsigned>(m / e));
    }
    return acc / m;
}

std::int64_t monic_code(const Poly& f) {
    const Fq& F = *f.field;
    if (!f.is_monic()) throw std::invalid_argument("monic_code needs a monic polynomial");
    std::int64_t code = 0;
    for (int i = 0; i < f.degree(); ++i) code = code * F.q() + F.rank(f.c[i]);
    return code;
}

Poly monic_from_code(const Fq& field, int deg, std::int64_t code) {
    // low digit of the code ranks c_{deg-1}, high digit ranks c_0
    std::vector<int> c(deg + 1, 0);
    c[deg] = 1;
    for (int i = deg - 1; i >= 0; --i) {
        c[i] = field.element_of_rank(static_cast<int>(code % field.q()));
        code /= field.q();
    }
    return Poly(field, std::move(c));
}

PrimePoly PrimePoly::finite(Poly f) {
    f = make_monic(f);
    if (!is_irreducible(f)) throw std::invalid_argument("polynomial is not irreducible");
    PrimePoly p;
    p.poly = std::move(f);
    return p;
}

bool is_irreducible(const Poly& f) {
    if (f.degree() < 1) return false;
    if (f.degree() == 1) return true;
    const Fq& F = *f.field;
    // x^(q^k) mod f by repeated q-powering
    auto pow_mod = [&](Poly base, std::int64_t e) {
        Poly acc = Poly::one(F);
        while (e) {
            if (e & 1) acc = poly_mod(acc * base, f);
            base = poly_mod(base * base, f);
            e >>= 1;
        }
        return acc;
    };
    int n = f.degree();
    Poly xq = poly_mod(Poly::x(F), f);
    for (int i = 0; i < n; ++i) xq = pow_mod(xq, F.q());
    // xq = x^(q^n) mod f
    if (!(xq - poly_mod(Poly::x(F), f)).is_zero()) return false;
    int m = n;
    for (int l = 2; l <= m; ++l) {
        if (m % l) continue;
        while (m % l == 0) m /= l;
        Poly xe = poly_mod(Poly::x(F), f);
        for (int i = 0; i < n / l; ++i) xe = pow_mod(xe, F.q());
        Poly d = xe - Poly::x(F);
        if (d.is_zero()) return false;
        if (poly_gcd(f, d).degree() > 0) return false;
    }
    return true;
}

std::vector<Poly> enumerate_irreducibles(const Fq& field, int m) {
    std::int64_t qm = 1;
    for (int i = 0; i < m; ++i) {
        qm *= field.q();
        if (qm > (1 << 24)) throw TooManyError("q^m exceeds 2^24");
    }
    if (m == 1) {
        std::vector<Poly> out;
        out.reserve(field.q());
        for (std::int64_t code = 0; code < field.q(); ++code)
            out.push_back(monic_from_code(field, 1, code));
        return out;
    }
    // sieve: a composite of degree m has an irreducible factor of degree <= m/2
    std::vector<char> composite(qm, 0);
    for (int d = 1; d <= m / 2; ++d) {
        for (const Poly& p : enumerate_irreducibles(field, d)) {
            std::int64_t qh = 1;
            for (int i = 0; i < m - d; ++i) qh *= field.q();
            for (std::int64_t hc = 0; hc < qh; ++hc) {
                Poly prod = p * monic_from_code(field, m - d, hc);
                composite[monic_code(prod)] = 1;
            }
        }
    }
    std::vector<Poly> out;
    for (std::int64_t code = 0; code < qm; ++code)
        if (!composite[code]) out.push_back(monic_from_code(field, m, code));
    return out;
}

std::vector<std::pair<Poly, int>> factor(const Poly& f) {
    if (f.is_zero()) throw ZeroPolynomialError("factor(0)");
    if (f.degree() > 64) throw DegreeTooLargeError("factor: degree > 64");
    const Fq& F = *f.field;
    std::vector<std::pair<Poly, int>> out;
    Poly rest = make_monic(f);
    for (int d = 1; rest.degree() > 0 && 2 * d <= rest.degree(); ++d) {
        for (const Poly& p : enumerate_irreducibles(F, d)) {
            if (rest.degree() < d) break;
            int mult = 0;
            for (;;) {
                auto [q, rem] = divmod(rest, p);
                if (!rem.is_zero()) break;
                rest = q;
                ++mult;
            }
            if (mult) out.emplace_back(p, mult);
        }
    }
    // whatever survives has no factor of degree <= deg/2
    if (rest.degree() > 0) out.emplace_back(rest, 1);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return monic_code(a.first) < monic_code(b.first);
    });
    return out;
}

} // namespace cyclotrace
