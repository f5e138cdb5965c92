#include "cyclotrace/traces.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <thread>

#include "cyclotrace/bigint.hpp"

namespace cyclotrace {

namespace {

// exact rational polynomial helpers for the squarefree decomposition of
// L-polynomials; repeated roots are common (e.g. powers of elliptic factors)
// and companion-matrix eigenvalues lose ~eps^(1/m) digits at multiplicity m,
// so roots are extracted from exactly-computed squarefree factors instead
using QPoly = std::vector<BigRat>;

QPoly qtrim(QPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

QPoly qderiv(const QPoly& f) {
    QPoly out;
    for (std::size_t i = 1; i < f.size(); ++i) out.push_back(BigRat(static_cast<int>(i)) * f[i]);
    return qtrim(out);
}

QPoly qdivexact(QPoly num, const QPoly& den) {
    QPoly out(num.size() >= den.size() ? num.size() - den.size() + 1 : 0, BigRat(0));
    while (num.size() >= den.size() && !num.empty()) {
        BigRat c = num.back() / den.back();
        out[num.size() - den.size()] = c;
        for (std::size_t i = 0; i < den.size(); ++i)
            num[num.size() - den.size() + i] -= c * den[i];
        num = qtrim(std::move(num));
        if (num.empty()) break;
    }
    return out;
}

QPoly qmod(QPoly num, const QPoly& den) {
    while (num.size() >= den.size() && !num.empty()) {
        BigRat c = num.back() / den.back();
        for (std::size_t i = 0; i < den.size(); ++i)
            num[num.size() - den.size() + i] -= c * den[i];
        num = qtrim(std::move(num));
    }
    return num;
}

QPoly qgcd(QPoly a, QPoly b) {
    while (!b.empty()) {
        QPoly t = qmod(a, b);
        a = std::move(b);
        b = std::move(t);
    }
    // monic normalization
    if (!a.empty()) {
        BigRat inv = BigRat(1) / a.back();
        for (auto& c : a) c *= inv;
    }
    return a;
}

QPoly qsub(QPoly a, const QPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), BigRat(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return qtrim(std::move(a));
}

// Yun's algorithm: f = prod g_m^m with the g_m squarefree and coprime
std::vector<std::pair<QPoly, int>> squarefree_decomposition(const QPoly& f) {
    std::vector<std::pair<QPoly, int>> out;
    QPoly df = qderiv(f);
    QPoly a0 = qgcd(f, df);
    if (a0.size() <= 1) {
        out.emplace_back(f, 1);
        return out;
    }
    QPoly b = qdivexact(f, a0);
    QPoly c = qdivexact(df, a0);
    QPoly d = qsub(c, qderiv(b));
    int m = 1;
    while (b.size() > 1) {
        QPoly g = qgcd(b, d);
        if (g.size() > 1) out.emplace_back(g, m);
        b = qdivexact(b, g.size() > 1 ? g : QPoly{BigRat(1)});
        c = g.size() > 1 ? qdivexact(d, g) : d;
        d = qsub(c, qderiv(b));
        ++m;
    }
    return out;
}

// roots of one squarefree rational polynomial by companion eigenvalues
std::vector<std::complex<double>> companion_roots(const QPoly& f) {
    int deg = static_cast<int>(f.size()) - 1;
    std::vector<std::complex<double>> out;
    if (deg < 1) return out;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
    double lead = to_double(f[deg]);
    for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) C(i, deg - 1) = -to_double(f[i]) / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    for (int i = 0; i < deg; ++i) out.push_back(es.eigenvalues()[i]);
    return out;
}

// all roots of an integer polynomial, with multiplicity, via the exact
// squarefree decomposition
std::vector<std::complex<double>> roots_with_multiplicity(const std::vector<std::int64_t>& coeffs) {
    QPoly f;
    for (auto c : coeffs) f.emplace_back(c);
    f = qtrim(std::move(f));
    std::vector<std::complex<double>> out;
    for (const auto& [g, mult] : squarefree_decomposition(f)) {
        auto rts = companion_roots(g);
        for (int i = 0; i < mult; ++i) out.insert(out.end(), rts.begin(), rts.end());
    }
    return out;
}

} // namespace

Poly f_sub(const Fq& field, const ThinModel& model, int s) {
    // alpha * prod f_k^(k mod s); exponents are nonzero since (k, r) = 1
    int alpha = field.pow(field.generator(), model.alpha_index);
    Poly out = Poly::constant(field, alpha);
    for (const auto& [k, f] : model.parts) {
        int e = k % s;
        for (int t = 0; t < e; ++t) out = out * f;
    }
    return out;
}

std::int64_t count_points(const SymbolContext& ctx, const Curve& curve, int n) {
    const Fq& F = ctx.field();
    int r = ctx.r();
    const FqExt& E = ctx.ext(n);
    const CycRing& ring = ctx.ring();

    // histogram of chi_s exponents per divisor s, filled over all alpha in P^1
    std::vector<Poly> fsub(r + 1, Poly::zero(F));
    std::vector<int> divs;
    for (int s : divisors_of(r))
        if (s > 1) {
            divs.push_back(s);
            fsub[s] = f_sub(F, curve.model, s);
        }

    CycRing::Cyc acc = ring.zero<std::int64_t>();
    std::vector<std::vector<std::int64_t>> hist(r + 1);
    for (int s : divs) hist[s].assign(s, 0);

    for (std::int64_t x = 0; x < E.size(); ++x) {
        for (int s : divs) {
            std::int64_t v = E.eval_poly(fsub[s], x);
            if (v == 0) continue;
            hist[s][E.dlog(v) % s] += 1;
        }
    }
    // infinity: F_(s)(inf) = lc F = alpha when s | deg F, else 0
    int degF = curve.model.deg_f();
    int alpha = F.pow(F.generator(), curve.model.alpha_index);
    for (int s : divs) {
        if (degF % s != 0) continue;
        hist[s][E.dlog(E.embed(alpha)) % s] += 1;
    }

    for (int s : divs) {
        for (int t = 0; t < s; ++t) {
            if (!hist[s][t]) continue;
            // sum_{(i,s)=1} xi_s^{i t}, weighted by the histogram count
            for (int i = 1; i < s; ++i) {
                if (std::gcd(i, s) != 1) continue;
                ring.scaled_add_assign(acc, hist[s][t],
                                       ring.root_pow<std::int64_t>(
                                           static_cast<long long>(r / s) * i * t));
            }
        }
    }
    std::int64_t qn = E.size();
    std::int64_t chi_total = ring.to_integer(acc);
    return qn + 1 + chi_total;
}

std::int64_t count_points_direct(const SymbolContext& ctx, const Curve& curve, int n) {
    const Fq& F = ctx.field();
    int r = ctx.r();
    const FqExt& E = ctx.ext(n);
    Poly full = curve.model.full_polynomial(F);

    std::int64_t cnt = 0;
    for (std::int64_t x = 0; x < E.size(); ++x) {
        std::int64_t v = E.eval_poly(full, x);
        if (v == 0)
            cnt += 1;
        else if (E.dlog(v) % r == 0)
            cnt += r;
    }
    // infinity per the same convention: full fiber when r | deg F, single
    // point otherwise
    int degF = curve.model.deg_f();
    if (degF % r == 0) {
        std::int64_t v = E.embed(full.leading());
        if (E.dlog(v) % r == 0) cnt += r;
    } else {
        cnt += 1;
    }
    return cnt;
}

std::int64_t scaled_trace(const SymbolContext& ctx, const Curve& curve, int n) {
    if (curve.t_cache.size() >= static_cast<std::size_t>(n) && curve.t_cache[n - 1] != INT64_MIN)
        return curve.t_cache[n - 1];
    std::int64_t qn = 1;
    for (int i = 0; i < n; ++i) qn *= ctx.field().q();
    std::int64_t tn = qn + 1 - count_points(ctx, curve, n);
    if (curve.t_cache.size() < static_cast<std::size_t>(n))
        curve.t_cache.resize(n, INT64_MIN);
    curve.t_cache[n - 1] = tn;
    return tn;
}

namespace {

// sum_{i=1}^{r-1} omega^i for omega = xi_r^e: r-1 when e = 0, -1 otherwise;
// 0 when the symbol vanished
inline int unit_sum_weight(int r, int e_or_dead, bool dead) {
    if (dead) return 0;
    return e_or_dead == 0 ? r - 1 : -1;
}

} // namespace

std::int64_t trace_formula_thin(const SymbolContext& ctx, const Curve& curve, int n) {
    const Fq& F = ctx.field();
    int r = ctx.r();
    std::int64_t total = 0;

    for (int m = 1; m <= n; ++m) {
        if (n % m) continue;
        const PrimeRootTable& tab = ctx.prime_roots(m);
        const FqExt& E = ctx.ext(m);
        int e_n = n / m;
        int alpha_exp = static_cast<int>((static_cast<std::int64_t>(curve.model.alpha_index) * m) % r);
        for (std::size_t pi = 0; pi < tab.primes.size(); ++pi) {
            std::int64_t rho = tab.roots[pi];
            bool dead = false;
            int tau = alpha_exp;
            for (const auto& [k, f] : curve.model.parts) {
                std::int64_t v = E.eval_poly(f, rho);
                if (v == 0) {
                    dead = true;
                    break;
                }
                tau = static_cast<int>((tau + static_cast<std::int64_t>(k) * (E.dlog(v) % r)) % r);
            }
            int w;
            if (dead)
                w = 0;
            else
                w = unit_sum_weight(r, static_cast<int>((static_cast<std::int64_t>(tau) * e_n) % r), false);
            total += static_cast<std::int64_t>(m) * w;
        }
    }
    // prime at infinity: symbol chi_{r;1}(alpha) when r | deg F, else 0
    if (curve.model.deg_f() % r == 0) {
        int tau = curve.model.alpha_index % r;
        int e = static_cast<int>((static_cast<std::int64_t>(tau) * n) % r);
        total += unit_sum_weight(r, e, false);
    }
    (void)F;
    return total;
}

std::int64_t trace_formula_general(const SymbolContext& ctx, const Curve& curve, int n) {
    const Fq& F = ctx.field();
    int r = ctx.r();
    const CycRing& ring = ctx.ring();
    CycRing::Cyc acc = ring.zero<std::int64_t>();
    int degF = curve.model.deg_f();
    int alpha = F.pow(F.generator(), curve.model.alpha_index);

    for (int s : divisors_of(r)) {
        if (s == 1) continue;
        Poly fs = f_sub(F, curve.model, s);
        for (int m = 1; m <= n; ++m) {
            if (n % m) continue;
            const PrimeRootTable& tab = ctx.prime_roots(m);
            const FqExt& E = ctx.ext(m);
            for (std::size_t pi = 0; pi < tab.primes.size(); ++pi) {
                std::int64_t v = E.eval_poly(fs, tab.roots[pi]);
                if (v == 0) continue;
                int t = static_cast<int>(E.dlog(v) % s);
                for (int i = 1; i < s; ++i) {
                    if (std::gcd(i, s) != 1) continue;
                    long long ex = static_cast<long long>(t) * i % s * (n / m) % s;
                    ring.add_assign(acc,
                                    ring.scale<std::int64_t>(m, ring.root_pow<std::int64_t>(
                                                                    static_cast<long long>(r / s) * ex)));
                }
            }
        }
        // infinity: (F_(s)/P_inf)_s uses the full deg F and lc F = alpha
        if (degF % s == 0) {
            int t = static_cast<int>(F.dlog(alpha) % s);
            for (int i = 1; i < s; ++i) {
                if (std::gcd(i, s) != 1) continue;
                long long ex = static_cast<long long>(t) * i % s * n % s;
                ring.add_assign(acc, ring.root_pow<std::int64_t>(static_cast<long long>(r / s) * ex));
            }
        }
    }
    return ring.to_integer(acc);
}

LPolynomial l_polynomial_from_traces(std::int64_t q, int g, const std::vector<std::int64_t>& t) {
    if (static_cast<int>(t.size()) < g)
        throw std::invalid_argument("need t_1..t_g");
    int twog = 2 * g;
    auto newton = [&](int upto) {
        std::vector<std::int64_t> e(upto + 1, 0);
        e[0] = 1;
        for (int k = 1; k <= upto; ++k) {
            std::int64_t acc = 0;
            std::int64_t sign = 1;
            for (int i = 1; i <= k; ++i) {
                acc += sign * e[k - i] * t[i - 1];
                sign = -sign;
            }
            if (acc % k != 0) throw NonIntegerResultError("Newton identity division failed");
            e[k] = acc / k;
        }
        return e;
    };
    std::vector<std::int64_t> e = newton(g);
    LPolynomial L;
    L.genus = g;
    L.coeffs.assign(twog + 1, 0);
    std::int64_t sign = 1;
    for (int k = 0; k <= g; ++k) {
        L.coeffs[k] = sign * e[k];
        sign = -sign;
    }
    // functional equation c_{2g-k} = q^{g-k} c_k
    for (int k = 0; k < g; ++k) {
        std::int64_t f = 1;
        for (int i = 0; i < g - k; ++i) f *= q;
        L.coeffs[twog - k] = f * L.coeffs[k];
    }
    if (static_cast<int>(t.size()) >= twog) {
        // full-trace derivation must agree
        std::vector<std::int64_t> e2 = newton(twog);
        std::int64_t s2 = 1;
        for (int k = 0; k <= twog; ++k) {
            if (L.coeffs[k] != s2 * e2[k])
                throw NonIntegerResultError("functional equation vs direct Newton mismatch");
            s2 = -s2;
        }
    }
    double dev = rh_root_deviation(q, L);
    if (dev > 1e-6) throw RhViolationError("L-polynomial roots off the half-line");
    return L;
}

LPolynomial l_polynomial(const SymbolContext& ctx, const Curve& curve) {
    int g = curve.spec->g;
    std::vector<std::int64_t> t;
    std::int64_t q2g = 1;
    bool full = true;
    for (int i = 0; i < 2 * g; ++i) {
        q2g *= ctx.field().q();
        if (q2g > FqExt::kMaxSize) {
            full = false;
            break;
        }
    }
    int upto = full ? 2 * g : g;
    for (int n = 1; n <= upto; ++n) t.push_back(scaled_trace(ctx, curve, n));
    return l_polynomial_from_traces(ctx.field().q(), g, t);
}

std::vector<double> eigenangles(std::int64_t q, const LPolynomial& L) {
    (void)q;
    std::vector<double> out;
    for (const auto& u : roots_with_multiplicity(L.coeffs)) {
        double theta = std::atan2(u.imag(), u.real());
        if (theta < 0) theta += 2 * M_PI;
        out.push_back(theta);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double rh_root_deviation(std::int64_t q, const LPolynomial& L) {
    double target = 1.0 / std::sqrt(static_cast<double>(q));
    double worst = 0.0;
    for (const auto& u : roots_with_multiplicity(L.coeffs))
        worst = std::max(worst, std::abs(std::abs(u) - target));
    return worst;
}

FamilyTraces family_traces(const SymbolContext& ctx, const FamilySpec& spec, int n_max,
                           int jobs) {
    BigInt est = count_family(ctx, spec, Conductor::trivial());
    if (est > BigInt(8000000)) throw FamilyTooLargeError("family too large for per-curve traces");
    if (jobs < 1) jobs = 1;

    FamilyTraces out;
    out.n_max = n_max;
    int nparts = static_cast<int>(spec.part_indices().size());
    std::vector<int> pidx = spec.part_indices();
    int r = spec.r;

    out.nparts = nparts;
    enumerate_family(ctx, spec, [&](const ThinModel& m) {
        out.alpha.push_back(static_cast<std::int8_t>(m.alpha_index));
        out.branch.push_back(m.branch == DegreeBranch::FullRadical ? 0 : 1);
        for (const auto& [k, f] : m.parts) {
            out.part_code.push_back(f.degree() == 0 ? 0 : monic_code(f));
            out.part_deg.push_back(static_cast<std::int8_t>(f.degree()));
        }
    });
    out.size = out.alpha.size();
    out.t.assign(out.size * n_max, 0);

    for (int m = 1; m <= n_max; ++m) {
        bool used = false;
        for (int n = m; n <= n_max; ++n)
            if (n % m == 0) used = true;
        if (!used) continue;
        const PrimeRootTable& tab = ctx.prime_roots(m);
        auto scan_primes = [&](std::size_t plo, std::size_t phi, std::int64_t* tbuf) {
            for (std::size_t pi = plo; pi < phi; ++pi) {
                MonicSymbolTable st = build_monic_symbol_table(ctx, m, tab.roots[pi], spec.d);
                for (std::size_t idx = 0; idx < out.size; ++idx) {
                    int tau = static_cast<int>((static_cast<std::int64_t>(out.alpha[idx]) * m) % r);
                    bool dead = false;
                    const std::int64_t* codes = &out.part_code[idx * nparts];
                    const std::int8_t* degs = &out.part_deg[idx * nparts];
                    for (int pz = 0; pz < nparts; ++pz) {
                        int tq = st.exponent(degs[pz], codes[pz]);
                        if (tq >= r) {
                            dead = true;
                            break;
                        }
                        tau = (tau + pidx[pz] * tq) % r;
                    }
                    if (dead) continue; // weight 0 for every n
                    for (int n = m; n <= n_max; n += m) {
                        int e = static_cast<int>((static_cast<std::int64_t>(tau) * (n / m)) % r);
                        tbuf[idx * n_max + (n - 1)] -= m * (e == 0 ? r - 1 : -1);
                    }
                }
            }
        };
        std::size_t nprimes = tab.primes.size();
        int workers = std::min<std::size_t>(jobs, nprimes ? nprimes : 1);
        if (workers <= 1) {
            scan_primes(0, nprimes, out.t.data());
        } else {
            std::vector<std::vector<std::int64_t>> bufs(
                workers, std::vector<std::int64_t>(out.t.size(), 0));
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) {
                std::size_t lo = nprimes * w / workers;
                std::size_t hi = nprimes * (w + 1) / workers;
                pool.emplace_back(scan_primes, lo, hi, bufs[w].data());
            }
            for (auto& th : pool) th.join();
            for (const auto& buf : bufs)
                for (std::size_t i = 0; i < out.t.size(); ++i) out.t[i] += buf[i];
        }
    }
    // prime at infinity
    for (std::size_t idx = 0; idx < out.size; ++idx) {
        if (out.branch[idx] != 0) continue; // symbol 0 on the coprime branch
        int tau = out.alpha[idx] % r;
        for (int n = 1; n <= n_max; ++n) {
            int e = static_cast<int>((static_cast<std::int64_t>(tau) * n) % r);
            out.t[idx * n_max + (n - 1)] -= (e == 0 ? r - 1 : -1);
        }
    }
    return out;
}

std::vector<std::int64_t> model_traces(const SymbolContext& ctx, const FamilySpec& spec,
                                       const std::vector<ThinModel>& models, int n) {
    std::vector<std::int64_t> out;
    out.reserve(models.size());
    for (const auto& m : models) {
        Curve c(spec, m);
        out.push_back(-trace_formula_thin(ctx, c, n));
    }
    return out;
}

} // namespace cyclotrace
