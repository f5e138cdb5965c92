#include "cyclotrace/family.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace cyclotrace {

FamilySpec::FamilySpec(const Fq& f, int r_, int g_) : field(&f), r(r_), g(g_) {
    if (r < 2) throw std::invalid_argument("r must be >= 2");
    if (g < 1) throw std::invalid_argument("genus must be >= 1");
    if ((f.q() - 1) % r != 0) throw BadCongruenceError("q not congruent to 1 mod r");
    if ((2 * g) % (r - 1) != 0)
        throw EmptyFamilyError("2g not congruent to 0 mod r-1: thin family with s in {1,r} is empty");
    d = (2 * g + 2 * r - 2) / (r - 1);
}

std::vector<int> FamilySpec::part_indices() const {
    std::vector<int> out;
    for (int i = 1; i < r; ++i)
        if (std::gcd(i, r) == 1) out.push_back(i);
    return out;
}

Poly ThinModel::full_polynomial(const Fq& field) const {
    Poly F = Poly::constant(field, field.pow(field.generator(), alpha_index));
    for (const auto& [i, f] : parts)
        for (int k = 0; k < i; ++k) F = F * f;
    return F;
}

int genus_of(int r, const std::vector<std::pair<int, Poly>>& parts) {
    int sumdeg = 0, degF = 0;
    for (const auto& [i, f] : parts) {
        sumdeg += f.degree();
        degF += i * f.degree();
    }
    int rhs = (r - 1) * sumdeg + r - std::gcd(r, degF);
    if (rhs % 2 != 0 || rhs < 2 * r - 2) throw NonIntegralGenusError("no integral genus for these parts");
    return (rhs - 2 * r + 2) / 2;
}

Conductor Conductor::of(const Poly& G) {
    Conductor c;
    if (G.degree() < 1) return c;
    for (const auto& [p, mult] : factor(G)) {
        (void)mult;
        c.excluded_primes_by_degree[p.degree()] += 1;
    }
    return c;
}

namespace {

void series_mul_assign(const CycRing& ring, std::vector<CycRing::BigCyc>& a,
                       const std::vector<CycRing::BigCyc>& b, int d_max) {
    std::vector<CycRing::BigCyc> out(d_max + 1, ring.zero<BigInt>());
    for (int i = 0; i <= d_max; ++i) {
        if (ring.is_zero(a[i])) continue;
        for (int j = 0; j + i <= d_max; ++j) {
            if (ring.is_zero(b[j])) continue;
            ring.add_assign(out[i + j], ring.mul(a[i], b[j]));
        }
    }
    a = std::move(out);
}

} // namespace

SeriesTable series_coeff(const SymbolContext& ctx, int s, const Conductor& G, int d_max) {
    const CycRing& ring = ctx.ring();
    int r = ctx.r();
    if (r % s != 0) throw std::invalid_argument("s must divide r");
    if (d_max > 40) throw std::invalid_argument("series degree capped at 40");
    std::int64_t q = ctx.field().q();

    SeriesTable t;
    t.r = r;
    t.s = s;
    t.d_max = d_max;
    t.coeffs.assign(d_max + 1, ring.zero<BigInt>());
    t.coeffs[0] = ring.one<BigInt>();

    int c = euler_phi(r) / euler_phi(s);
    for (int m = 1; m <= d_max; ++m) {
        BigInt count = prime_count_big(q, m);
        auto it = G.excluded_primes_by_degree.find(m);
        if (it != G.excluded_primes_by_degree.end()) count -= it->second;
        if (count <= 0) continue;

        // local factor 1 + (phi(r)/phi(s)) * sum_{(i,s)=1} xi_r^{(r/s) i m} u^m
        CycRing::BigCyc coef = ring.zero<BigInt>();
        for (int i = 1; i <= s; ++i) {
            if (std::gcd(i, s) != 1) continue;
            ring.add_assign(coef, ring.root_pow<BigInt>(static_cast<long long>(r / s) * i * m));
        }
        coef = ring.scale(BigInt(c), std::move(coef));

        std::vector<CycRing::BigCyc> base(d_max + 1, ring.zero<BigInt>());
        base[0] = ring.one<BigInt>();
        base[m] = coef;

        // base^count, truncated
        std::vector<CycRing::BigCyc> acc(d_max + 1, ring.zero<BigInt>());
        acc[0] = ring.one<BigInt>();
        BigInt e = count;
        while (e != 0) {
            if ((e & 1) != 0) series_mul_assign(ring, acc, base, d_max);
            e >>= 1;
            if (e != 0) {
                auto b2 = base;
                series_mul_assign(ring, b2, base, d_max);
                base = std::move(b2);
            }
        }
        series_mul_assign(ring, t.coeffs, acc, d_max);
    }
    return t;
}

BigInt khat_count(const SymbolContext& ctx, const FamilySpec& spec, int D, int k,
                  const Conductor& G) {
    const CycRing& ring = ctx.ring();
    int r = spec.r;
    if (D < 0) return 0;
    CycRing::BigCyc total = ring.zero<BigInt>();
    for (int s : divisors_of(r)) {
        SeriesTable H = series_coeff(ctx, s, G, D);
        for (int j = 1; j <= s; ++j) {
            if (std::gcd(j, s) != 1) continue;
            long long e = -static_cast<long long>(r / s) * j * k;
            ring.add_assign(total, ring.mul(ring.root_pow<BigInt>(e), H.coeffs[D]));
        }
    }
    BigInt v = ring.to_integer(total);
    if (v % r != 0) throw NonIntegerResultError("k-refined count not divisible by r");
    return v / r;
}

BigInt count_family(const SymbolContext& ctx, const FamilySpec& spec, const Conductor& G) {
    int r = spec.r;
    BigInt tot = khat_count(ctx, spec, spec.d, 0, G);
    for (int k = 1; k < r; ++k)
        if (std::gcd(k, r) == 1) tot += khat_count(ctx, spec, spec.d - 1, k, G);
    return tot * r;
}

BigInt count_family_infinity(const SymbolContext& ctx, const FamilySpec& spec) {
    // P_inf | F iff deg F != 0 mod r, so the coprime members are exactly the
    // full-radical branch: r * |F-hat_{r;0}(d)|
    return khat_count(ctx, spec, spec.d, 0, Conductor::trivial()) * spec.r;
}

BigInt count_from_series(const SymbolContext& ctx, const FamilySpec& spec) {
    const CycRing& ring = ctx.ring();
    int r = spec.r;
    CycRing::BigCyc acc = ring.zero<BigInt>();
    for (int s : divisors_of(r)) {
        SeriesTable H = series_coeff(ctx, s, Conductor::trivial(), spec.d);
        ring.scaled_add_assign(acc, BigInt(euler_phi(s)), H.coeffs[spec.d]);
        ring.scaled_add_assign(acc, BigInt(euler_phi(r) * moebius(s)), H.coeffs[spec.d - 1]);
    }
    // (1/r)|F| = (1/r) sum_s phi(s)[u^d]H + (phi(r)/r) sum_s mu(s)[u^{d-1}]H,
    // and the r alpha-classes cancel the 1/r
    return ring.to_integer(acc);
}

CycRing::BigCyc incexc_coeff(const SymbolContext& ctx, int s, const PrimePoly& P, int d) {
    if (P.infinite) throw std::invalid_argument("incexc_coeff needs a finite prime");
    const CycRing& ring = ctx.ring();
    int r = ctx.r();
    int n = P.degree();
    int c = euler_phi(r) / euler_phi(s);
    SeriesTable H1 = series_coeff(ctx, s, Conductor::trivial(), d);

    // W = sum_{(i,s)=1} xi_s^{n i}
    CycRing::BigCyc W = ring.zero<BigInt>();
    for (int i = 1; i <= s; ++i) {
        if (std::gcd(i, s) != 1) continue;
        ring.add_assign(W, ring.root_pow<BigInt>(static_cast<long long>(r / s) * i * n));
    }

    CycRing::BigCyc acc = ring.zero<BigInt>();
    CycRing::BigCyc Wa = ring.one<BigInt>();
    BigInt sign = 1;
    for (int a = 0; a * n <= d; ++a) {
        CycRing::BigCyc term = ring.scale(sign, ring.mul(Wa, H1.coeffs[d - a * n]));
        ring.add_assign(acc, term);
        Wa = ring.mul(Wa, W);
        sign *= -c;
    }
    return acc;
}

UnramRatio unram_ratio(const SymbolContext& ctx, const FamilySpec& spec, const PrimePoly& P) {
    BigInt tot = count_family(ctx, spec, Conductor::trivial());
    BigInt cop;
    int n = P.degree();
    if (P.infinite) {
        cop = count_family_infinity(ctx, spec);
    } else {
        Conductor c;
        c.excluded_primes_by_degree[n] = 1;
        cop = count_family(ctx, spec, c);
    }
    UnramRatio out;
    out.exact = BigRat(cop, tot);

    int phir = euler_phi(spec.r);
    BigInt qn = big_pow(BigInt(ctx.field().q()), static_cast<unsigned>(n));
    BigRat formula = 0;
    for (int a = 0; a * n <= spec.d; ++a) {
        BigRat term = rat_pow(BigRat(-phir, qn), static_cast<unsigned>(a));
        term *= rat_pow(BigRat(spec.d - a * n, spec.d), static_cast<unsigned>(phir - 1));
        formula += term;
    }
    out.formula = formula;
    out.residual = rat_abs(out.exact - out.formula);
    return out;
}

namespace {

struct DfsState {
    const SymbolContext* ctx;
    const FamilySpec* spec;
    const std::function<void(const ThinModel&)>* fn;
    std::vector<int> part_idx;
    // primes of degree <= budget in (degree, lex) order
    std::vector<const Poly*> primes;
    std::vector<int> prime_deg;
    // current assignment
    std::vector<std::pair<int, const Poly*>> assigned; // (part index position, prime)
    int target_radical = 0;
    int deg_f_mod_target = 0; // -1 means "coprime to r" filter
    int r = 0;
};

void emit_current(DfsState& st) {
    const Fq& F = st.ctx->field();
    ThinModel m;
    m.alpha_index = 0;
    m.branch = (st.deg_f_mod_target == 0) ? DegreeBranch::FullRadical : DegreeBranch::Coprime;
    std::vector<Poly> parts(st.part_idx.size(), Poly::one(F));
    for (const auto& [pos, pr] : st.assigned) parts[pos] = parts[pos] * (*pr);
    for (std::size_t i = 0; i < st.part_idx.size(); ++i)
        m.parts.emplace_back(st.part_idx[i], parts[i]);
    (*st.fn)(m);
}

void dfs(DfsState& st, std::size_t start, int budget, int deg_f_mod) {
    if (budget == 0) {
        // deg_f_mod tracks deg F mod r
        bool ok = st.deg_f_mod_target == 0   ? (deg_f_mod == 0)
                  : st.deg_f_mod_target == -1 ? (std::gcd(deg_f_mod, st.r) == 1)
                                              : true;
        if (ok) emit_current(st);
        return;
    }
    for (std::size_t j = start; j < st.primes.size(); ++j) {
        int dg = st.prime_deg[j];
        if (dg > budget) break;
        for (std::size_t pos = 0; pos < st.part_idx.size(); ++pos) {
            st.assigned.emplace_back(static_cast<int>(pos), st.primes[j]);
            dfs(st, j + 1, budget - dg,
                (deg_f_mod + st.part_idx[pos] * dg) % st.r);
            st.assigned.pop_back();
        }
    }
}

} // namespace

void enumerate_family(const SymbolContext& ctx, const FamilySpec& spec,
                      const std::function<void(const ThinModel&)>& fn) {
    BigInt est = count_family(ctx, spec, Conductor::trivial());
    if (est > BigInt(100000000)) throw FamilyTooLargeError("family larger than 10^8");
    enumerate_family_monic(ctx, spec, [&](const ThinModel& monic) {
        ThinModel m = monic;
        for (int j = 0; j < spec.r; ++j) {
            m.alpha_index = j;
            fn(m);
        }
    });
}

namespace {

void run_dfs(const SymbolContext& ctx, const FamilySpec& spec,
             const std::function<void(const ThinModel&)>& fn, int D, int filter) {
    DfsState st;
    st.ctx = &ctx;
    st.spec = &spec;
    st.fn = &fn;
    st.part_idx = spec.part_indices();
    st.r = spec.r;

    std::vector<Poly> pool;
    for (int m = 1; m <= D; ++m) {
        const auto& tab = ctx.prime_roots(m);
        for (const auto& p : tab.primes) pool.push_back(p);
    }
    st.primes.reserve(pool.size());
    st.prime_deg.reserve(pool.size());
    for (const auto& p : pool) {
        st.primes.push_back(&p);
        st.prime_deg.push_back(p.degree());
    }
    st.target_radical = D;
    st.deg_f_mod_target = filter;
    dfs(st, 0, D, 0);
}

} // namespace

void enumerate_family_monic(const SymbolContext& ctx, const FamilySpec& spec,
                            const std::function<void(const ThinModel&)>& fn) {
    // branch A: radical degree d, r | deg F; branch B: radical d-1, (deg F, r) = 1
    run_dfs(ctx, spec, fn, spec.d, 0);
    run_dfs(ctx, spec, fn, spec.d - 1, -1);
}

void enumerate_monic_radical(const SymbolContext& ctx, const FamilySpec& spec, int D,
                             const std::function<void(const ThinModel&)>& fn) {
    if (D < 0) return;
    if (D == 0) {
        ThinModel m;
        m.branch = DegreeBranch::FullRadical;
        for (int i : spec.part_indices()) m.parts.emplace_back(i, Poly::one(ctx.field()));
        fn(m);
        return;
    }
    run_dfs(ctx, spec, fn, D, -2);
}

std::vector<ThinModel> sample_family(const SymbolContext& ctx, const FamilySpec& spec,
                                     std::size_t count, std::uint64_t seed) {
    const Fq& F = ctx.field();
    std::vector<int> parts = spec.part_indices();
    int r = spec.r;

    // enumerate admissible degree compositions per branch
    struct Comp {
        DegreeBranch branch;
        std::vector<int> degs;
    };
    std::vector<Comp> comps;
    for (int branch = 0; branch < 2; ++branch) {
        int D = branch == 0 ? spec.d : spec.d - 1;
        std::vector<int> degs(parts.size(), 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
            if (pos + 1 == degs.size()) {
                degs[pos] = left;
                int degF = 0;
                for (std::size_t i = 0; i < degs.size(); ++i) degF += parts[i] * degs[i];
                bool ok = branch == 0 ? (degF % r == 0) : (std::gcd(degF % r, r) == 1);
                if (ok)
                    comps.push_back({branch == 0 ? DegreeBranch::FullRadical : DegreeBranch::Coprime, degs});
                return;
            }
            for (int d0 = 0; d0 <= left; ++d0) {
                degs[pos] = d0;
                rec(pos + 1, left - d0);
            }
        };
        rec(0, D);
    }

    // branch selection uses exact counts; within a branch all compositions
    // carry equal coefficient mass q^D, so a uniform composition plus uniform
    // coefficients plus rejection is uniform over the branch
    BigInt nA = khat_count(ctx, spec, spec.d, 0, Conductor::trivial());
    BigInt nB = 0;
    for (int k = 1; k < r; ++k)
        if (std::gcd(k, r) == 1) nB += khat_count(ctx, spec, spec.d - 1, k, Conductor::trivial());
    if (nA + nB == 0) throw EmptyFamilyError("empty thin family");
    // branch A probability as a 64-bit fixed-point threshold
    BigInt denom = nA + nB;
    std::uint64_t thresholdA = static_cast<std::uint64_t>(
        (BigInt(nA) << 63) / denom);

    std::vector<Comp> compsA, compsB;
    for (auto& c : comps)
        (c.branch == DegreeBranch::FullRadical ? compsA : compsB).push_back(c);

    SplitMix64 rng(seed);
    std::vector<ThinModel> out;
    out.reserve(count);
    while (out.size() < count) {
        // branch and alpha are drawn once from the exact counts; only the
        // tuple is rejection-sampled, so acceptance-rate differences between
        // branches cannot bias the branch mix
        bool branchA = (rng.next() >> 1) < thresholdA;
        const auto& cs = branchA ? compsA : compsB;
        ThinModel m;
        m.alpha_index = static_cast<int>(rng.below(r));
        for (;;) {
            const Comp& comp = cs[rng.below(cs.size())];
            m.branch = comp.branch;
            bool ok = true;
            std::vector<Poly> fs;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                int dg = comp.degs[i];
                std::vector<int> c(dg + 1, 0);
                c[dg] = 1;
                for (int t = 0; t < dg; ++t)
                    c[t] = static_cast<int>(rng.below(static_cast<std::uint64_t>(F.q())));
                fs.emplace_back(F, std::move(c));
            }
            for (const auto& f : fs)
                if (f.degree() > 0 && !is_squarefree(f)) ok = false;
            if (ok) {
                for (std::size_t i = 0; i < fs.size() && ok; ++i)
                    for (std::size_t j = i + 1; j < fs.size() && ok; ++j)
                        if (fs[i].degree() > 0 && fs[j].degree() > 0 &&
                            poly_gcd(fs[i], fs[j]).degree() > 0)
                            ok = false;
            }
            if (!ok) continue;
            m.parts.clear();
            for (std::size_t i = 0; i < parts.size(); ++i) m.parts.emplace_back(parts[i], fs[i]);
            break;
        }
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace cyclotrace
