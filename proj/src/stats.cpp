#include "cyclotrace/stats.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace cyclotrace {

namespace {

// flat monic-layer family table: tuple classes and part codes
struct MonicTable {
    int nparts = 0;
    std::vector<int> pidx;
    std::size_t size = 0;
    std::vector<std::int8_t> branch; // 0 = full-radical (k = 0), 1 = coprime
    std::vector<std::int8_t> kclass; // deg F mod r
    std::vector<std::int64_t> code;
    std::vector<std::int8_t> deg;
};

MonicTable build_monic_table(const SymbolContext& ctx, const FamilySpec& spec) {
    MonicTable t;
    t.pidx = spec.part_indices();
    t.nparts = static_cast<int>(t.pidx.size());
    enumerate_family_monic(ctx, spec, [&](const ThinModel& m) {
        t.branch.push_back(m.branch == DegreeBranch::FullRadical ? 0 : 1);
        t.kclass.push_back(static_cast<std::int8_t>(m.deg_f() % spec.r));
        for (const auto& [k, f] : m.parts) {
            t.code.push_back(f.degree() == 0 ? 0 : monic_code(f));
            t.deg.push_back(static_cast<std::int8_t>(f.degree()));
        }
    });
    t.size = t.branch.size();
    return t;
}

// histogram over tau classes (index r = symbol vanished) of the monic tuples,
// refined by (branch, kclass); weight exponent applied later
struct MonicHists {
    // hist[class][tau]: class 0 = branch A (k = 0); classes 1.. = branch B by k
    std::map<int, std::vector<std::int64_t>> by_k; // key: -1 for branch A else k
};

MonicHists monic_hists_for_prime(const SymbolContext& ctx, const FamilySpec& spec,
                                 const MonicTable& mt, int m, std::int64_t rho) {
    int r = spec.r;
    MonicSymbolTable st = build_monic_symbol_table(ctx, m, rho, spec.d);
    MonicHists out;
    auto& histA = out.by_k[-1];
    histA.assign(r + 1, 0);
    for (int k = 1; k < r; ++k)
        if (std::gcd(k, r) == 1) out.by_k[k].assign(r + 1, 0);
    for (std::size_t idx = 0; idx < mt.size; ++idx) {
        int tau = 0;
        bool dead = false;
        const std::int64_t* codes = &mt.code[idx * mt.nparts];
        const std::int8_t* degs = &mt.deg[idx * mt.nparts];
        for (int pz = 0; pz < mt.nparts; ++pz) {
            int tq = st.exponent(degs[pz], codes[pz]);
            if (tq >= r) {
                dead = true;
                break;
            }
            tau = (tau + mt.pidx[pz] * tq) % r;
        }
        int slot = dead ? r : tau;
        if (mt.branch[idx] == 0)
            histA[slot] += 1;
        else
            out.by_k[mt.kclass[idx]][slot] += 1;
    }
    return out;
}

BigInt pow_int(std::int64_t q, int e) { return big_pow(BigInt(q), static_cast<unsigned>(e)); }

} // namespace

BigRat mt_term_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n) {
    std::int64_t q = ctx.field().q();
    int r = spec.r;
    BigInt tot = count_family(ctx, spec, Conductor::trivial());
    BigInt acc = 0;
    for (int m = 1; m <= n; ++m) {
        if (n % m) continue;
        int cnt_i = std::gcd(r, n / m) - 1;
        if (!cnt_i) continue;
        Conductor c;
        c.excluded_primes_by_degree[m] = 1;
        BigInt coprime = count_family(ctx, spec, c);
        acc += BigInt(m) * prime_count_big(q, m) * cnt_i * coprime;
    }
    int cnt_inf = std::gcd(r, n) - 1;
    if (cnt_inf) acc += BigInt(cnt_inf) * count_family_infinity(ctx, spec);
    return BigRat(-acc, tot);
}

namespace {

// qualifying (m, i) pairs for the ET definition: all i in [1, r) with
// r not dividing i * (n/m)
std::vector<int> et_def_is(int r, int e) {
    std::vector<int> out;
    for (int i = 1; i < r; ++i)
        if ((static_cast<std::int64_t>(i) * e) % r != 0) out.push_back(i);
    return out;
}

} // namespace

BigRat et_definition_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n) {
    const CycRing& ring = ctx.ring();
    int r = spec.r;
    MonicTable mt = build_monic_table(ctx, spec);
    BigInt tot = count_family(ctx, spec, Conductor::trivial());
    CycRing::Cyc acc = ring.zero<std::int64_t>();

    for (int m = 1; m <= n; ++m) {
        if (n % m) continue;
        int e = n / m;
        std::vector<int> is = et_def_is(r, e);
        if (is.empty()) continue;
        const PrimeRootTable& tab = ctx.prime_roots(m);
        for (std::size_t pi = 0; pi < tab.primes.size(); ++pi) {
            MonicHists h = monic_hists_for_prime(ctx, spec, mt, m, tab.roots[pi]);
            // full-family histogram: alpha class j shifts tau by j*m
            std::vector<std::int64_t> hist(r, 0);
            for (const auto& [key, hv] : h.by_k) {
                (void)key;
                for (int t = 0; t < r; ++t) {
                    if (!hv[t]) continue;
                    for (int j = 0; j < r; ++j)
                        hist[(t + j * m) % r] += hv[t];
                }
            }
            for (int i : is) {
                for (int t = 0; t < r; ++t) {
                    if (!hist[t]) continue;
                    long long ex = (static_cast<long long>(t) * i % r) * e % r;
                    ring.scaled_add_assign(acc, static_cast<std::int64_t>(m) * hist[t],
                                           ring.root_pow<std::int64_t>(ex));
                }
            }
        }
    }
    // prime at infinity: (F/P_inf)_r = chi_{r;1}(alpha) on the full-radical
    // branch; the alpha classes cancel whenever r does not divide i*n
    std::int64_t count_A = 0;
    for (std::size_t idx = 0; idx < mt.size; ++idx)
        if (mt.branch[idx] == 0) ++count_A;
    for (int i : et_def_is(r, n)) {
        for (int j = 0; j < r; ++j) {
            long long ex = static_cast<long long>(j) * i % r * n % r;
            ring.scaled_add_assign(acc, count_A, ring.root_pow<std::int64_t>(ex));
        }
    }
    std::int64_t v = ring.to_integer(acc);
    return BigRat(BigInt(-v), tot);
}

BigRat et_monic_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n) {
    const CycRing& ring = ctx.ring();
    int r = spec.r;
    int rn = std::gcd(r, n);
    if (rn == 1) return BigRat(0);
    MonicTable mt = build_monic_table(ctx, spec);
    BigInt tot = count_family(ctx, spec, Conductor::trivial());
    CycRing::Cyc acc = ring.zero<std::int64_t>();

    for (int m = 1; m <= n; ++m) {
        if (n % m) continue;
        int e = n / m;
        std::vector<int> js;
        for (int j = 1; j < rn; ++j)
            if ((static_cast<std::int64_t>(j) * e) % rn != 0) js.push_back(j);
        if (js.empty()) continue;
        const PrimeRootTable& tab = ctx.prime_roots(m);
        for (std::size_t pi = 0; pi < tab.primes.size(); ++pi) {
            MonicHists h = monic_hists_for_prime(ctx, spec, mt, m, tab.roots[pi]);
            for (int j : js) {
                long long w = static_cast<long long>(r / rn) * j % r * e % r;
                for (const auto& [key, hv] : h.by_k) {
                    (void)key;
                    for (int t = 0; t < r; ++t) {
                        if (!hv[t]) continue;
                        ring.scaled_add_assign(acc, static_cast<std::int64_t>(r) * m * hv[t],
                                               ring.root_pow<std::int64_t>(
                                                   static_cast<long long>(t) * w % r));
                    }
                }
            }
        }
    }
    std::int64_t v = ring.to_integer(acc);
    return BigRat(BigInt(-v), tot);
}

namespace {

// 2D truncated series over (radical degree u <= dmax, deg F class mod r) with
// Cyc coefficients; used by the generating-series ET route
struct Grid {
    int dmax;
    int r;
    const CycRing* ring;
    std::vector<CycRing::Cyc> v; // (dmax+1) * r

    CycRing::Cyc& at(int d, int k) { return v[d * r + k]; }
    const CycRing::Cyc& at(int d, int k) const { return v[d * r + k]; }

    static Grid zero(const CycRing& ring, int dmax, int r) {
        Grid g{dmax, r, &ring, {}};
        g.v.assign(static_cast<std::size_t>(dmax + 1) * r, ring.zero<std::int64_t>());
        return g;
    }
    static Grid one(const CycRing& ring, int dmax, int r) {
        Grid g = zero(ring, dmax, r);
        g.at(0, 0) = ring.one<std::int64_t>();
        return g;
    }
};

Grid grid_mul(const Grid& a, const Grid& b) {
    const CycRing& ring = *a.ring;
    Grid out = Grid::zero(ring, a.dmax, a.r);
    for (int d1 = 0; d1 <= a.dmax; ++d1)
        for (int k1 = 0; k1 < a.r; ++k1) {
            const auto& x = a.at(d1, k1);
            if (ring.is_zero(x)) continue;
            for (int d2 = 0; d1 + d2 <= a.dmax; ++d2)
                for (int k2 = 0; k2 < a.r; ++k2) {
                    const auto& y = b.at(d2, k2);
                    if (ring.is_zero(y)) continue;
                    ring.add_assign(out.at(d1 + d2, (k1 + k2) % a.r), ring.mul(x, y));
                }
        }
    return out;
}

Grid grid_pow(Grid base, std::int64_t e) {
    const CycRing& ring = *base.ring;
    Grid acc = Grid::one(ring, base.dmax, base.r);
    while (e) {
        if (e & 1) acc = grid_mul(acc, base);
        e >>= 1;
        if (e) base = grid_mul(base, base);
    }
    return acc;
}

} // namespace

BigRat et_series_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n) {
    const CycRing& ring = ctx.ring();
    const Fq& F = ctx.field();
    int r = spec.r;
    int rn = std::gcd(r, n);
    if (rn == 1) return BigRat(0);
    std::vector<int> pidx = spec.part_indices();
    BigInt tot = count_family(ctx, spec, Conductor::trivial());
    CycRing::Cyc acc = ring.zero<std::int64_t>();

    for (int m = 1; m <= n; ++m) {
        if (n % m) continue;
        int e = n / m;
        std::vector<int> js;
        for (int j = 1; j < rn; ++j)
            if ((static_cast<std::int64_t>(j) * e) % rn != 0) js.push_back(j);
        if (js.empty()) continue;
        const PrimeRootTable& tab = ctx.prime_roots(m);
        const FqExt& E = ctx.ext(m);
        for (std::size_t pi = 0; pi < tab.primes.size(); ++pi) {
            std::int64_t rho = tab.roots[pi];
            // classify all primes Q of degree <= d by chi_r exponent of Q(rho)
            // counts[m'][tau], tau = r for Q = P (the only vanishing Q)
            std::vector<std::vector<std::int64_t>> counts(spec.d + 1,
                                                          std::vector<std::int64_t>(r + 1, 0));
            for (int mq = 1; mq <= spec.d; ++mq) {
                const PrimeRootTable& qtab = ctx.prime_roots(mq);
                for (const Poly& Q : qtab.primes) {
                    std::int64_t v = E.eval_poly(Q, rho);
                    counts[mq][v == 0 ? r : static_cast<int>(E.dlog(v) % r)] += 1;
                }
            }
            for (int j : js) {
                int w = static_cast<int>(static_cast<std::int64_t>(r / rn) * j % r * e % r);
                Grid g = Grid::one(ring, spec.d, r);
                for (int mq = 1; mq <= spec.d; ++mq) {
                    for (int tq = 0; tq <= r; ++tq) {
                        std::int64_t cnt = counts[mq][tq];
                        if (!cnt) continue;
                        if (tq == r) continue; // P itself: factor 1
                        Grid base = Grid::one(ring, spec.d, r);
                        for (int iz : pidx) {
                            long long ex = static_cast<long long>(w) * iz % r * tq % r;
                            ring.add_assign(base.at(mq, (iz * mq) % r),
                                            ring.root_pow<std::int64_t>(ex));
                        }
                        g = grid_mul(g, grid_pow(base, cnt));
                    }
                }
                // branch A: radical degree d, k = 0; branch B: d-1, (k, r) = 1
                CycRing::Cyc sum = g.at(spec.d, 0);
                for (int k = 1; k < r; ++k)
                    if (std::gcd(k, r) == 1) ring.add_assign(sum, g.at(spec.d - 1, k));
                ring.scaled_add_assign(acc, static_cast<std::int64_t>(r) * m, sum);
            }
        }
    }
    std::int64_t v = ring.to_integer(acc);
    return BigRat(BigInt(-v), tot);
}

BigRat et_term_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n) {
    int r = spec.r;
    if (std::gcd(r, n) == 1) return BigRat(0);
    BigInt monic_size = count_family(ctx, spec, Conductor::trivial()) / r;
    if (monic_size <= BigInt(2000000)) {
        BigRat a = et_definition_scaled(ctx, spec, n);
        BigRat b = et_monic_scaled(ctx, spec, n);
        if (a != b) throw NonIntegerResultError("ET definition and monic reduction disagree");
        return a;
    }
    return et_series_scaled(ctx, spec, n);
}

CycRing::Cyc s_jk_sum(const SymbolContext& ctx, const FamilySpec& spec, int j, int k, int D,
                      const PrimePoly& P, int n) {
    if (P.infinite) throw std::invalid_argument("s_jk_sum needs a finite prime");
    const CycRing& ring = ctx.ring();
    int r = spec.r;
    int rn = std::gcd(r, n);
    int m = P.degree();
    if (n % m) throw std::invalid_argument("deg P must divide n");
    // locate the distinguished root of P
    const PrimeRootTable& tab = ctx.prime_roots(m);
    std::int64_t code = monic_code(P.poly);
    std::int64_t rho = -1;
    for (std::size_t i = 0; i < tab.primes.size(); ++i)
        if (monic_code(tab.primes[i]) == code) rho = tab.roots[i];
    if (rho < 0) throw std::invalid_argument("prime not found");
    MonicSymbolTable st = build_monic_symbol_table(ctx, m, rho, std::max(D, 0));

    long long w = static_cast<long long>(r / rn) * j % r * (n / m) % r;
    CycRing::Cyc acc = ring.zero<std::int64_t>();
    int kk = ((k % r) + r) % r;
    enumerate_monic_radical(ctx, spec, D, [&](const ThinModel& mod) {
        if (mod.deg_f() % r != kk) return;
        int tau = 0;
        for (const auto& [iz, f] : mod.parts) {
            int tq = st.exponent(f.degree(), f.degree() == 0 ? 0 : monic_code(f));
            if (tq >= r) return; // P | F: symbol 0
            tau = (tau + iz * tq) % r;
        }
        ring.add_assign(acc, ring.root_pow<std::int64_t>(static_cast<long long>(tau) * w % r));
    });
    return acc;
}

BigRat d_r_scaled(const SymbolContext& ctx, const FamilySpec& spec, int n) {
    std::int64_t q = ctx.field().q();
    int r = spec.r;
    int d = spec.d;
    int phir = euler_phi(r);
    BigRat acc = 0;
    for (int m = 1; m <= n; ++m) {
        if (n % m) continue;
        int f = std::gcd(r, n / m) - 1;
        if (!f || m > d) continue;
        BigRat s = 0;
        for (int a = 1; a * m <= d; ++a) {
            BigRat term = rat_pow(BigRat(-phir, pow_int(q, m)), static_cast<unsigned>(a));
            term *= rat_pow(BigRat(d - a * m, d), static_cast<unsigned>(phir - 1));
            s += term;
        }
        acc += BigRat(BigInt(m) * prime_count_big(q, m) * f) * s;
    }
    return acc;
}

std::pair<std::int64_t, std::int64_t> a0_identity(std::int64_t q, int r, int n) {
    if (n > 12) throw std::invalid_argument("a0 identity capped at n <= 12");
    std::int64_t lhs = 0;
    for (int m = 1; m <= n; ++m) {
        if (n % m) continue;
        lhs += static_cast<std::int64_t>(m) * prime_count(q, m) * (std::gcd(r, n / m) - 1);
    }
    std::int64_t rhs = 0;
    int rn = std::gcd(r, n);
    for (int s : divisors_of(rn)) {
        if (s == 1) continue;
        std::int64_t pw = 1;
        for (int i = 0; i < n / s; ++i) pw *= q;
        rhs += euler_phi(s) * pw;
    }
    return {lhs, rhs};
}

std::int64_t rmt_moment(MatrixGroup group, int N, int n, int s) {
    switch (group) {
        case MatrixGroup::USp:
            if (n == 0) return N;
            if (n > 0 && n <= N && n % 2 == 0) return -1;
            return 0;
        case MatrixGroup::U:
            return n == 0 ? N : 0;
        case MatrixGroup::Ms: {
            if (s < 2) throw OutOfRangeError("M_(s) needs s >= 2");
            int phs = euler_phi(s);
            if (N % phs != 0) throw OutOfRangeError("M_(s)(N) needs phi(s) | N");
            if (n < 1 || n > N / phs) throw OutOfRangeError("M_(s) moment outside declared range");
            return n % s == 0 ? -phs : 0;
        }
    }
    throw std::logic_error("unknown matrix group");
}

namespace {

bool literal_exhaustive_feasible(const SymbolContext& ctx, const FamilySpec& spec, int n,
                                 const BigInt& size) {
    if (size > BigInt(6000000)) return false;
    std::int64_t q = ctx.field().q();
    double cost = 0;
    for (int m = 1; m <= n; ++m) {
        if (n % m) continue;
        std::int64_t qm = 1;
        bool fits = true;
        for (int i = 0; i < m; ++i) {
            qm *= q;
            if (qm > FqExt::kMaxSize) {
                fits = false;
                break;
            }
        }
        if (!fits) return false;
        double primes = static_cast<double>(prime_count(q, m));
        double table = 0;
        std::int64_t qe = 1;
        for (int e = 1; e <= spec.d; ++e) {
            qe *= q;
            table += static_cast<double>(qe);
        }
        cost += primes * (table + static_cast<double>(size));
    }
    return cost < 2.5e9;
}

} // namespace

TraceReport average_scaled_trace(const SymbolContext& ctx, const FamilySpec& spec, int n,
                                 const std::optional<SampleMode>& sample, int jobs) {
    std::int64_t q = ctx.field().q();
    int r = spec.r;
    TraceReport rep;
    rep.n = n;
    rep.family_size = count_family(ctx, spec, Conductor::trivial());
    if (rep.family_size == 0) throw EmptyFamilyError("empty family");
    rep.exact_zero_expected = (std::gcd(r, n) == 1);

    if (sample) {
        auto models = sample_family(ctx, spec, sample->count, sample->seed);
        auto ts = model_traces(ctx, spec, models, n);
        double mean = 0;
        for (auto t : ts) mean += static_cast<double>(t);
        mean /= static_cast<double>(ts.size());
        double var = 0;
        for (auto t : ts) var += (t - mean) * (t - mean);
        var = ts.size() > 1 ? var / static_cast<double>(ts.size() - 1) : 0.0;
        rep.sampled = true;
        rep.std_error = std::sqrt(var / static_cast<double>(ts.size()));
        // exact rational mean of the sample
        std::int64_t sum = std::accumulate(ts.begin(), ts.end(), std::int64_t(0));
        rep.avg_scaled = BigRat(BigInt(sum), BigInt(ts.size()));
    } else {
        rep.mt_scaled = mt_term_scaled(ctx, spec, n);
        rep.et_scaled = et_term_scaled(ctx, spec, n);
        BigRat decomposed = rep.mt_scaled + rep.et_scaled;
        if (literal_exhaustive_feasible(ctx, spec, n, rep.family_size)) {
            FamilyTraces ft = family_traces(ctx, spec, n, jobs);
            BigInt sum = 0;
            for (std::size_t i = 0; i < ft.size; ++i) sum += ft.trace(i, n);
            rep.avg_scaled = BigRat(sum, rep.family_size);
            if (rep.avg_scaled != decomposed)
                throw NonIntegerResultError("MT+ET does not match the literal family average");
            rep.decomposition_exact = true;
        } else {
            rep.avg_scaled = decomposed;
            rep.decomposition_exact = false;
        }
    }
    // prediction and residual (both modes)
    BigInt main = 0;
    int rn = std::gcd(r, n);
    for (int s : divisors_of(rn)) {
        if (s == 1) continue;
        main += BigInt(euler_phi(s)) * pow_int(q, n / s);
    }
    rep.prediction_main = BigRat(-main) - d_r_scaled(ctx, spec, n);
    rep.residual = rat_abs(rep.avg_scaled - rep.prediction_main);
    rep.bound_envelope =
        10.0 * (1.0 / spec.g + std::pow(static_cast<double>(q), n - 0.6 * spec.d));
    return rep;
}

std::vector<TraceReport> verify_theorem_1_5(const SymbolContext& ctx, const FamilySpec& spec,
                                            int n_max, const std::optional<SampleMode>& sample,
                                            int jobs) {
    std::vector<TraceReport> out;
    for (int n = 1; n <= n_max; ++n)
        out.push_back(average_scaled_trace(ctx, spec, n, sample, jobs));
    return out;
}

// ---- test functions and densities ----

TestFunction TestFunction::fejer_even(double alpha) {
    TestFunction f;
    f.kind = Kind::FejerEven;
    f.alpha = alpha;
    return f;
}

TestFunction TestFunction::fejer_one_sided(double alpha) {
    TestFunction f;
    f.kind = Kind::FejerOneSided;
    f.alpha = alpha;
    return f;
}

TestFunction TestFunction::from_table(std::vector<std::pair<double, double>> pts, bool one_sided,
                                      double support_bound) {
    TestFunction f;
    f.kind = Kind::Table;
    f.alpha = support_bound;
    f.table_one_sided = one_sided;
    f.table = std::move(pts);
    for (const auto& [x, v] : f.table) {
        bool outside = one_sided ? (x < 0 || x >= support_bound) : (std::abs(x) >= support_bound);
        if (outside && v != 0.0)
            throw SupportViolationError("table value nonzero outside declared support at x=" +
                                        std::to_string(x));
    }
    return f;
}

double TestFunction::fhat(double x) const {
    switch (kind) {
        case Kind::FejerEven: {
            double ax = std::abs(x);
            return ax < alpha ? 1.0 - ax / alpha : 0.0;
        }
        case Kind::FejerOneSided:
            return (x >= 0 && x < alpha) ? 1.0 - x / alpha : 0.0;
        case Kind::Table: {
            for (const auto& [gx, v] : table)
                if (std::abs(gx - x) < 1e-9) return v;
            return 0.0;
        }
    }
    return 0.0;
}

std::complex<double> TestFunction::f(double y) const {
    if (kind == Kind::Table) throw UnsupportedDirectEvalError("no closed form for table test functions");
    double phi = 2.0 * M_PI * y;
    if (kind == Kind::FejerEven) {
        if (std::abs(phi) < 1e-12) return {alpha, 0.0};
        double s = std::sin(M_PI * alpha * y) / (M_PI * alpha * y);
        return {alpha * s * s, 0.0};
    }
    // one-sided: int_0^alpha (1 - x/alpha) e^{i phi x} dx
    if (std::abs(phi) < 1e-9) return {alpha / 2.0, 0.0};
    std::complex<double> iaphi(0.0, alpha * phi);
    std::complex<double> num = 1.0 + iaphi - std::exp(iaphi);
    return num / (alpha * phi * phi);
}

double one_level_density_spectral(const SymbolContext& ctx, const Curve& curve,
                                  const TestFunction& f) {
    int twog = 2 * curve.spec->g;
    std::int64_t q = ctx.field().q();
    int n_top = std::min(static_cast<int>(std::ceil(f.alpha * twog)) + 1, 2 * twog);
    double spectral = f.fhat(0.0);
    for (int n = 1; n <= n_top; ++n) {
        double x = static_cast<double>(n) / twog;
        double w = f.fhat(x);
        double wneg = f.one_sided() ? 0.0 : f.fhat(-x);
        if (w == 0.0 && wneg == 0.0) continue;
        double tn = static_cast<double>(scaled_trace(ctx, curve, n));
        spectral += (w + wneg) * tn / std::pow(static_cast<double>(q), n / 2.0) / twog;
    }
    return spectral;
}

DensityPair one_level_density_curve(const SymbolContext& ctx, const Curve& curve,
                                    const TestFunction& f) {
    int g = curve.spec->g;
    int twog = 2 * g;
    std::int64_t q = ctx.field().q();
    int n_top = std::min(static_cast<int>(std::ceil(f.alpha * twog)) + 1, 2 * twog);

    DensityPair out;
    out.spectral = one_level_density_spectral(ctx, curve, f);

    if (f.kind == TestFunction::Kind::Table)
        throw UnsupportedDirectEvalError("eigenangle route needs a built-in test function");
    LPolynomial L = l_polynomial(ctx, curve);
    std::vector<double> thetas = eigenangles(q, L);
    std::complex<double> acc(0.0, 0.0);
    for (double th : thetas) {
        double x = th / (2.0 * M_PI);
        // periodization of f(2g .) evaluated through its finite Fourier series
        std::complex<double> val(f.fhat(0.0) / twog, 0.0);
        for (int n = 1; n <= n_top; ++n) {
            double gx = static_cast<double>(n) / twog;
            double w = f.fhat(gx);
            double wn = f.one_sided() ? 0.0 : f.fhat(-gx);
            if (w != 0.0) val += w / static_cast<double>(twog) *
                                 std::exp(std::complex<double>(0.0, 2.0 * M_PI * n * x));
            if (wn != 0.0) val += wn / static_cast<double>(twog) *
                                  std::exp(std::complex<double>(0.0, -2.0 * M_PI * n * x));
        }
        acc += val;
    }
    out.eigenangle = acc.real();
    return out;
}

double family_density_average(const SymbolContext& ctx, const FamilySpec& spec,
                              const TestFunction& f, const std::optional<SampleMode>& sample,
                              int jobs) {
    int twog = 2 * spec.g;
    std::int64_t q = ctx.field().q();
    int n_top = 0;
    for (int n = 1; n < twog; ++n)
        if (f.fhat(static_cast<double>(n) / twog) != 0.0 ||
            (!f.one_sided() && f.fhat(-static_cast<double>(n) / twog) != 0.0))
            n_top = n;
    double lhs = f.fhat(0.0);
    if (n_top == 0) return lhs;

    if (sample) {
        auto models = sample_family(ctx, spec, sample->count, sample->seed);
        for (int n = 1; n <= n_top; ++n) {
            double w = f.fhat(static_cast<double>(n) / twog) +
                       (f.one_sided() ? 0.0 : f.fhat(-static_cast<double>(n) / twog));
            if (w == 0.0) continue;
            auto ts = model_traces(ctx, spec, models, n);
            double mean = 0;
            for (auto t : ts) mean += static_cast<double>(t);
            mean /= static_cast<double>(ts.size());
            lhs += w * mean / std::pow(static_cast<double>(q), n / 2.0) / twog;
        }
        return lhs;
    }

    FamilyTraces ft = family_traces(ctx, spec, n_top, jobs);
    BigInt size(static_cast<std::int64_t>(ft.size));
    for (int n = 1; n <= n_top; ++n) {
        double w = f.fhat(static_cast<double>(n) / twog) +
                   (f.one_sided() ? 0.0 : f.fhat(-static_cast<double>(n) / twog));
        if (w == 0.0) continue;
        BigInt sum = 0;
        for (std::size_t i = 0; i < ft.size; ++i) sum += ft.trace(i, n);
        double avg = to_double(BigRat(sum, size));
        lhs += w * avg / std::pow(static_cast<double>(q), n / 2.0) / twog;
    }
    return lhs;
}

double dev_r(const SymbolContext& ctx, const FamilySpec& spec, const TestFunction& f) {
    double fh0 = f.fhat(0.0);
    if (fh0 == 0.0) return 0.0;
    std::int64_t q = ctx.field().q();
    int r = spec.r;
    int d = spec.d;
    int phir = euler_phi(r);
    double total = 0.0;
    for (int s : divisors_of(r)) {
        if (s == 1) continue;
        double inner = 0.0;
        for (int m = 1; m <= d; ++m) {
            double S = 0.0;
            for (int a = 1; a * m <= d; ++a)
                S += std::pow(-static_cast<double>(phir) / std::pow(q, m), a) *
                     std::pow(1.0 - static_cast<double>(a) * m / d, phir - 1);
            double braket = static_cast<double>(m) /
                            (std::pow(static_cast<double>(q), m * s / 2.0) - 1.0);
            inner += static_cast<double>(prime_count(q, m)) * braket * S;
        }
        total += euler_phi(s) * inner;
    }
    return fh0 * total;
}

double refined_prediction(const SymbolContext& ctx, const FamilySpec& spec,
                          const TestFunction& f, bool full) {
    int r = spec.r;
    if (!f.one_sided())
        throw SupportViolationError("refined prediction needs a one-sided test function");
    if (f.alpha > 1.0 / (r - 1) + 1e-12)
        throw SupportViolationError("support bound exceeds 1/(r-1)");
    int twog = 2 * spec.g;
    std::int64_t q = ctx.field().q();
    double out = f.fhat(0.0);
    for (int s : divisors_of(r)) {
        if (s == 1) continue;
        int n_lim = twog / (s * (r - 1));
        double sum = 0.0;
        for (int n = 1; n <= n_lim; ++n)
            sum += std::pow(static_cast<double>(q), n * (1.0 - s / 2.0)) *
                   f.fhat(static_cast<double>(n) * s / twog);
        out -= euler_phi(s) * sum / twog;
    }
    if (full) out -= dev_r(ctx, spec, f) / twog;
    return out;
}

double ks_prediction(const SymbolContext& ctx, const FamilySpec& spec, const TestFunction& f) {
    (void)ctx;
    int twog = 2 * spec.g;
    double out = f.fhat(0.0);
    if (spec.r % 2 == 0) {
        // USp: -1 for even nonzero |n| <= 2g
        for (int n = -twog; n <= twog; ++n) {
            if (n == 0 || n % 2 != 0) continue;
            out -= f.fhat(static_cast<double>(n) / twog) / twog;
        }
    }
    return out;
}

DensityReport density_report(const SymbolContext& ctx, const FamilySpec& spec,
                             const TestFunction& f, const std::optional<SampleMode>& sample,
                             int jobs) {
    DensityReport rep;
    rep.g = spec.g;
    rep.lhs = family_density_average(ctx, spec, f, sample, jobs);
    rep.rhs_refined = refined_prediction(ctx, spec, f, true);
    rep.rhs_ks = ks_prediction(ctx, spec, f);
    rep.dev_r_value = dev_r(ctx, spec, f);
    rep.residual_refined = std::abs(rep.lhs - rep.rhs_refined);
    rep.residual_ks = std::abs(rep.lhs - rep.rhs_ks);
    rep.sampled = sample.has_value();
    return rep;
}

} // namespace cyclotrace
