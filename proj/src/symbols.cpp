#include "cyclotrace/symbols.hpp"

#include <algorithm>
#include <cassert>

namespace cyclotrace {

namespace {

std::int64_t neg_elem(const FqExt& E, std::int64_t x) {
    const Fq& F = E.base();
    std::int64_t q = F.q();
    std::int64_t out = 0, mult = 1;
    while (x) {
        out += static_cast<std::int64_t>(F.neg(static_cast<int>(x % q))) * mult;
        mult *= q;
        x /= q;
    }
    return out;
}

} // namespace

SymbolContext::SymbolContext(const Fq& field, int r) : field_(&field), r_(r), ring_(r) {
    if (r < 2) throw std::invalid_argument("cover degree r must be >= 2");
    if ((field.q() - 1) % r != 0) throw BadCongruenceError("q not congruent to 1 mod r");
}

const FqExt& SymbolContext::ext(int m) const {
    auto it = exts_.find(m);
    if (it == exts_.end())
        it = exts_.emplace(m, std::make_unique<FqExt>(FqExt::extend(*field_, m))).first;
    return *it->second;
}

const PrimeRootTable& SymbolContext::prime_roots(int m) const {
    auto it = roots_.find(m);
    if (it != roots_.end()) return *it->second;

    const FqExt& E = ext(m);
    auto table = std::make_unique<PrimeRootTable>();

    // Frobenius-orbit sweep: each orbit of size m in F_{q^m}^* (plus 0 for the
    // prime z when m == 1) corresponds to one monic irreducible of degree m,
    // with minimal polynomial prod_j (x - alpha^(q^j)). The smallest-log root
    // is distinguished.
    std::int64_t ord = E.size() - 1;
    std::int64_t q = field_->q();
    std::vector<char> seen(ord, 0);
    std::vector<std::pair<std::int64_t, std::int64_t>> found; // (code of prime, root)
    for (std::int64_t k = 0; k < ord; ++k) {
        if (seen[k]) continue;
        // orbit of exponents k, kq, kq^2, ... mod ord
        std::int64_t orbit[32];
        int len = 0;
        std::int64_t cur = k;
        do {
            orbit[len++] = cur;
            seen[cur] = 1;
            cur = static_cast<std::int64_t>((static_cast<__int128>(cur) * q) % ord);
        } while (cur != k);
        if (len != m) continue;
        // minimal polynomial: coefficients land in the embedded F_q
        std::vector<std::int64_t> prod{1};
        for (int j = 0; j < len; ++j) {
            std::int64_t rootj = E.from_log(orbit[j]);
            std::vector<std::int64_t> nxt(prod.size() + 1, 0);
            for (std::size_t i = 0; i < prod.size(); ++i) {
                nxt[i + 1] = E.add(nxt[i + 1], prod[i]);                       // * x
                nxt[i] = E.add(nxt[i], E.mul(prod[i], neg_elem(E, rootj)));    // * (-root)
            }
            prod = std::move(nxt);
        }
        std::vector<int> c(m + 1, 0);
        for (int i = 0; i <= m; ++i) {
            if (prod[i] >= q) throw std::logic_error("orbit product not in F_q");
            c[i] = static_cast<int>(prod[i]);
        }
        Poly p(*field_, std::move(c));
        table->primes.push_back(p);
        table->roots.push_back(E.from_log(k));
    }
    if (m == 1) {
        // the element 0 has minimal polynomial x
        table->primes.push_back(Poly::x(*field_));
        table->roots.push_back(0);
    }
    // lex order = monic_code order
    std::vector<std::size_t> idx(table->primes.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return monic_code(table->primes[a]) < monic_code(table->primes[b]);
    });
    PrimeRootTable sorted;
    for (auto i : idx) {
        sorted.primes.push_back(table->primes[i]);
        sorted.roots.push_back(table->roots[i]);
    }
    *table = std::move(sorted);
    assert(static_cast<std::int64_t>(table->primes.size()) == prime_count(field_->q(), m));

    auto ref = table.get();
    roots_.emplace(m, std::move(table));
    return *ref;
}

void SymbolContext::warm_up(int max_degree) const {
    for (int m = 1; m <= max_degree; ++m) prime_roots(m);
}

std::int64_t SymbolContext::root_of(const PrimePoly& P) const {
    if (P.infinite) throw std::invalid_argument("no root table for the infinite prime");
    int m = P.degree();
    const PrimeRootTable& T = prime_roots(m);
    std::int64_t code = monic_code(P.poly);
    // binary search over lex-sorted primes
    auto lo = std::lower_bound(T.primes.begin(), T.primes.end(), code,
                               [](const Poly& p, std::int64_t c) { return monic_code(p) < c; });
    if (lo == T.primes.end() || monic_code(*lo) != code)
        throw std::invalid_argument("prime not found in root table");
    return T.roots[lo - T.primes.begin()];
}

int SymbolContext::legendre_exp(const Poly& F, const PrimePoly& P, int s) const {
    if ((field_->q() - 1) % s != 0) throw BadCongruenceError("q not congruent to 1 mod s");
    if (P.infinite) return symbol_infinity_exp(F, s);
    int m = P.degree();
    const FqExt& E = ext(m);
    std::int64_t v = E.eval_poly(F, root_of(P));
    if (v == 0) return -1;
    return static_cast<int>(E.dlog(v) % s);
}

CycRing::Cyc SymbolContext::legendre(const Poly& F, const PrimePoly& P, int s) const {
    return exp_to_cyc(s, legendre_exp(F, P, s));
}

int SymbolContext::symbol_infinity_exp(const Poly& F, int s) const {
    if (F.is_zero()) return -1;
    if (F.degree() % s != 0) return -1;
    int lc = F.leading();
    return static_cast<int>(field_->dlog(lc) % s);
}

CycRing::Cyc SymbolContext::symbol_infinity(const Poly& F, int s) const {
    return exp_to_cyc(s, symbol_infinity_exp(F, s));
}

Poly SymbolContext::minimal_polynomial(int n, std::int64_t alpha) const {
    const FqExt& E = ext(n);
    if (alpha == 0) return Poly::x(*field_);
    std::int64_t ord = E.size() - 1;
    std::int64_t q = field_->q();
    std::int64_t k = E.dlog(alpha);
    std::vector<std::int64_t> expos;
    std::int64_t cur = k;
    do {
        expos.push_back(cur);
        cur = static_cast<std::int64_t>((static_cast<__int128>(cur) * q) % ord);
    } while (cur != k);
    std::vector<std::int64_t> prod{1};
    for (auto e : expos) {
        std::int64_t rootj = E.from_log(e);
        std::vector<std::int64_t> nxt(prod.size() + 1, 0);
        for (std::size_t i = 0; i < prod.size(); ++i) {
            nxt[i + 1] = E.add(nxt[i + 1], prod[i]);
            nxt[i] = E.add(nxt[i], E.mul(prod[i], neg_elem(E, rootj)));
        }
        prod = std::move(nxt);
    }
    std::vector<int> c(prod.size(), 0);
    for (std::size_t i = 0; i < prod.size(); ++i) {
        if (prod[i] >= q) throw std::logic_error("minimal polynomial not over F_q");
        c[i] = static_cast<int>(prod[i]);
    }
    return Poly(*field_, std::move(c));
}

CycRing::Cyc SymbolContext::char_via_symbol(const Poly& F, int n, std::int64_t alpha, int s) const {
    const FqExt& E = ext(n);
    Poly pa = minimal_polynomial(n, alpha);
    int d = pa.degree();
    assert(n % d == 0);
    PrimePoly P = PrimePoly{};
    P.poly = pa;
    int t = legendre_exp(F, P, s);
    CycRing::Cyc via_symbol;
    if (t < 0) {
        via_symbol = ring_.zero<std::int64_t>();
    } else {
        via_symbol = exp_to_cyc(s, static_cast<int>((static_cast<std::int64_t>(t) * (n / d)) % s));
    }
    CycRing::Cyc direct = char_eval(E, ring_, s, E.eval_poly(F, alpha));
    if (via_symbol != direct)
        throw NonIntegerResultError("character/symbol identity failed");
    return direct;
}

CycRing::Cyc SymbolContext::char_via_symbol(const Poly& F, int n, InfinityPoint, int s) const {
    // Eq (3.5): chi_{s;n}(lc F) = (F/P_inf)_s^n when s | deg F, else symbol 0
    int t = symbol_infinity_exp(F, s);
    if (t < 0) return ring_.zero<std::int64_t>();
    int tn = static_cast<int>((static_cast<std::int64_t>(t) * n) % s);
    CycRing::Cyc via_symbol = exp_to_cyc(s, tn);
    const FqExt& E = ext(n);
    CycRing::Cyc direct = char_eval(E, ring_, s, E.embed(F.leading()));
    if (via_symbol != direct)
        throw NonIntegerResultError("infinity character/symbol identity failed");
    return direct;
}

MonicSymbolTable build_monic_symbol_table(const SymbolContext& ctx, int m_prime_deg,
                                          std::int64_t root, int dmax) {
    const FqExt& E = ctx.ext(m_prime_deg);
    const Fq& F = ctx.field();
    int r = ctx.r();
    std::int64_t q = F.q();

    MonicSymbolTable out;
    out.r = r;
    out.dmax = dmax;
    out.tau.resize(dmax + 1);

    // value table: h(root) for each monic h, by increasing degree;
    // h = x*h1 + c0 where h1 is the previous-degree monic with code
    // (code mod q^(deg-1)) and c0 has rank (code div q^(deg-1))
    std::vector<std::vector<std::int64_t>> val(dmax + 1);
    val[0] = {1}; // the monic constant 1
    out.tau[0].assign(1, static_cast<std::int8_t>(0));
    std::int64_t qpow = 1;
    for (int deg = 1; deg <= dmax; ++deg) {
        std::int64_t count = qpow * q;
        val[deg].resize(count);
        out.tau[deg].resize(count);
        for (std::int64_t code = 0; code < count; ++code) {
            std::int64_t prev = val[deg - 1][code % qpow];
            int c0 = F.element_of_rank(static_cast<int>(code / qpow));
            std::int64_t v = E.add_constant(E.mul(prev, root), c0);
            val[deg][code] = v;
            out.tau[deg][code] =
                v == 0 ? static_cast<std::int8_t>(r)
                       : static_cast<std::int8_t>(E.dlog(v) % r);
        }
        qpow = count;
    }
    return out;
}

} // namespace cyclotrace
