#include "cyclotrace/fq.hpp"

#include <cassert>

namespace cyclotrace {

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// minimal polynomial arithmetic over Z/p for modulus construction only
using ZpPoly = std::vector<int>; // low->high, trimmed

ZpPoly trim(ZpPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

ZpPoly pmul(const ZpPoly& f, const ZpPoly& g, std::int64_t p) {
    if (f.empty() || g.empty()) return {};
    ZpPoly out(f.size() + g.size() - 1, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f[i]) continue;
        for (std::size_t j = 0; j < g.size(); ++j)
            out[i + j] = static_cast<int>((out[i + j] + static_cast<std::int64_t>(f[i]) * g[j]) % p);
    }
    return trim(out);
}

std::int64_t zpow(std::int64_t b, std::int64_t e, std::int64_t p) {
    std::int64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

ZpPoly pmod(ZpPoly f, const ZpPoly& g, std::int64_t p) {
    std::int64_t inv = zpow(g.back(), p - 2, p);
    while (f.size() >= g.size()) {
        std::int64_t c = f.back() * inv % p;
        if (c) {
            std::size_t off = f.size() - g.size();
            for (std::size_t i = 0; i < g.size(); ++i)
                f[off + i] = static_cast<int>(((f[off + i] - c * g[i]) % p + p) % p);
        }
        f.pop_back();
        f = trim(f);
        if (f.size() < g.size()) break;
    }
    return trim(f);
}

ZpPoly pgcd(ZpPoly f, ZpPoly g, std::int64_t p) {
    while (!g.empty()) {
        ZpPoly t = pmod(f, g, p);
        f = g;
        g = t;
    }
    return f;
}

ZpPoly pow_x_q(const ZpPoly& mod, std::int64_t p, std::int64_t e) {
    // x^(p^e) mod 'mod' via repeated p-th powering
    ZpPoly x = {0, 1};
    x = pmod(x, mod, p);
    ZpPoly cur = x;
    for (std::int64_t i = 0; i < e; ++i) {
        // cur = cur^p mod
        ZpPoly acc = {1};
        ZpPoly b = cur;
        std::int64_t k = p;
        while (k) {
            if (k & 1) acc = pmod(pmul(acc, b, p), mod, p);
            b = pmod(pmul(b, b, p), mod, p);
            k >>= 1;
        }
        cur = acc;
    }
    return cur;
}

bool irreducible_zp(const ZpPoly& f, std::int64_t p) {
    int n = static_cast<int>(f.size()) - 1;
    if (n < 1) return false;
    // x^(p^n) == x mod f, and gcd(x^(p^(n/l)) - x, f) == 1 for prime l | n
    ZpPoly xq = pow_x_q(f, p, n);
    ZpPoly x = pmod(ZpPoly{0, 1}, f, p);
    if (trim(xq) != trim(x)) {
        // compare xq - x == 0
        ZpPoly d = xq;
        d.resize(std::max(d.size(), x.size()), 0);
        for (std::size_t i = 0; i < x.size(); ++i)
            d[i] = static_cast<int>(((d[i] - x[i]) % p + p) % p);
        if (!trim(d).empty()) return false;
    }
    int m = n;
    for (int l = 2; l <= m; ++l) {
        if (m % l) continue;
        while (m % l == 0) m /= l;
        ZpPoly xe = pow_x_q(f, p, n / l);
        ZpPoly d = xe;
        d.resize(std::max(d.size(), std::size_t(2)), 0);
        d[1] = static_cast<int>(((d[1] - 1) % p + p) % p);
        if (pgcd(f, trim(d), p).size() > 1) return false;
    }
    return true;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

} // namespace

Fq Fq::make(std::int64_t p, int a) {
    if (!is_prime(p)) throw NonPrimeError("p is not prime");
    if (a < 1) throw std::invalid_argument("exponent must be positive");
    std::int64_t q = 1;
    for (int i = 0; i < a; ++i) {
        q *= p;
        if (q > kMaxQ) throw FieldTooLargeError("q exceeds 2^20");
    }

    Fq f;
    f.p_ = p;
    f.a_ = a;
    f.q_ = q;

    // modulus: first monic irreducible of degree a in lex order, c_0 compared
    // first. Candidate index encodes (c_0,...,c_{a-1}) with c_0 as the most
    // significant base-p digit so ascending index = ascending lex.
    if (a == 1) {
        f.modulus_ = {0, 1}; // x
    } else {
        bool found = false;
        for (std::int64_t code = 0; code < q && !found; ++code) {
            ZpPoly cand(a + 1, 0);
            cand[a] = 1;
            // c_0 is the most significant base-p digit of the candidate index
            std::int64_t c = code;
            for (int i = a - 1; i >= 0; --i) {
                cand[i] = static_cast<int>(c % p);
                c /= p;
            }
            if (irreducible_zp(cand, p)) {
                f.modulus_.assign(cand.begin(), cand.end());
                found = true;
            }
        }
        if (!found) throw std::logic_error("no irreducible modulus found");
    }

    // raw multiplication through digit polynomials (construction only)
    auto code2poly = [&](int x) {
        ZpPoly out;
        while (x) {
            out.push_back(x % static_cast<int>(p));
            x /= static_cast<int>(p);
        }
        return out;
    };
    auto poly2code = [&](const ZpPoly& g) {
        int c = 0;
        for (int i = static_cast<int>(g.size()) - 1; i >= 0; --i)
            c = c * static_cast<int>(p) + g[i];
        return c;
    };
    ZpPoly mod(f.modulus_.begin(), f.modulus_.end());
    auto raw_mul = [&](int x, int y) {
        if (a == 1) return static_cast<int>(static_cast<std::int64_t>(x) * y % p);
        return poly2code(pmod(pmul(code2poly(x), code2poly(y), p), mod, p));
    };
    auto raw_pow = [&](int x, std::int64_t e) {
        int r = 1;
        while (e) {
            if (e & 1) r = raw_mul(r, x);
            x = raw_mul(x, x);
            e >>= 1;
        }
        return r;
    };

    auto factors = prime_factors(q - 1);
    int gen = 0;
    for (int cand = 1; cand < q; ++cand) {
        bool ok = true;
        for (auto l : factors) {
            if (raw_pow(cand, (q - 1) / l) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            gen = cand;
            break;
        }
    }
    if (gen == 0) {
        if (q == 2)
            gen = 1; // F_2^* = {1}
        else
            throw std::logic_error("no generator found");
    }
    f.gen_ = gen;

    f.log_.assign(q, -1);
    f.exp_.assign(q - 1, 0);
    int x = 1;
    for (std::int64_t k = 0; k < q - 1; ++k) {
        f.exp_[k] = x;
        f.log_[x] = static_cast<std::int32_t>(k);
        x = raw_mul(x, gen);
    }
    if (x != 1) throw std::logic_error("generator order mismatch");
    return f;
}

int Fq::pow(int x, std::int64_t e) const {
    if (x == 0) return e == 0 ? 1 : 0;
    std::int64_t k = log_[x] % (q_ - 1);
    std::int64_t ke = static_cast<std::int64_t>((static_cast<__int128>(k) * (e % (q_ - 1)) % (q_ - 1) + (q_ - 1)) % (q_ - 1));
    return exp_[ke];
}

int Fq::add_ext(int x, int y) const {
    int out = 0, mult = 1;
    int pp = static_cast<int>(p_);
    while (x || y) {
        int d = (x % pp) + (y % pp);
        if (d >= pp) d -= pp;
        out += d * mult;
        mult *= pp;
        x /= pp;
        y /= pp;
    }
    return out;
}

int Fq::neg_ext(int x) const {
    int out = 0, mult = 1;
    int pp = static_cast<int>(p_);
    while (x) {
        int d = x % pp;
        out += (d ? pp - d : 0) * mult;
        mult *= pp;
        x /= pp;
    }
    return out;
}

} // namespace cyclotrace
