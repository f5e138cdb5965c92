// Acceptance suite: desk-scale reproduction targets. Each criterion prints
// one pass/fail line; the process exits nonzero if any criterion fails.

#include <chrono>
#include <complex>
#include <numeric>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cyclotrace/stats.hpp"

using namespace cyclotrace;

namespace {

int failures = 0;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %2d [%s]: %s%s%s\n", idx, name.c_str(), pass ? "PASS" : "FAIL",
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string rat_str(const BigRat& x) {
    std::string s = boost::multiprecision::numerator(x).str();
    if (boost::multiprecision::denominator(x) != 1)
        s += "/" + boost::multiprecision::denominator(x).str();
    return s;
}

// ---- criterion 1: exact vanishing of <t_n> whenever (r, n) = 1 ----
void criterion1() {
    struct Spec {
        int q, r, g;
    };
    bool pass = true;
    std::string detail;
    for (const Spec& s : {Spec{7, 3, 2}, Spec{7, 3, 4}, Spec{13, 4, 3}}) {
        auto t0 = Clock::now();
        Fq f = Fq::make(s.q, 1);
        SymbolContext ctx(f, s.r);
        FamilySpec spec(f, s.r, s.g);
        for (int n = 1; n <= 8; ++n) {
            if (std::gcd(s.r, n) != 1) continue;
            TraceReport rep = average_scaled_trace(ctx, spec, n);
            if (rep.avg_scaled != 0) {
                pass = false;
                detail += "(q=" + std::to_string(s.q) + ",g=" + std::to_string(s.g) +
                          ",n=" + std::to_string(n) + ") avg=" + rat_str(rep.avg_scaled) + " ";
            }
        }
        double el = seconds_since(t0);
        if (el > 120.0) {
            pass = false;
            detail += "runtime " + std::to_string(el) + "s over budget ";
        }
        detail += "q=" + std::to_string(s.q) + ",g=" + std::to_string(s.g) + ": " +
                  std::to_string(el).substr(0, 5) + "s ";
    }
    report(1, "exact vanishing (r,n)=1", pass, detail);
}

// ---- criterion 2: triple trace agreement on two whole families ----
double g_max_rh_dev = 0.0; // shared with criterion 9
std::int64_t g_lpoly_count = 0;

void criterion2() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    struct Spec {
        int q, r, g;
    };
    for (const Spec& s : {Spec{7, 3, 2}, Spec{5, 2, 2}}) {
        Fq f = Fq::make(s.q, 1);
        SymbolContext ctx(f, s.r);
        FamilySpec spec(f, s.r, s.g);
        std::int64_t bad_exact = 0;
        double worst_power_sum = 0.0;
        enumerate_family(ctx, spec, [&](const ThinModel& m) {
            Curve c(spec, m);
            for (int n = 1; n <= 4; ++n) {
                std::int64_t tn = scaled_trace(ctx, c, n);
                if (tn != -trace_formula_thin(ctx, c, n)) ++bad_exact;
            }
            LPolynomial L = l_polynomial(ctx, c);
            g_max_rh_dev = std::max(g_max_rh_dev, rh_root_deviation(s.q, L));
            ++g_lpoly_count;
            auto th = eigenangles(s.q, L);
            for (int n = 1; n <= 4; ++n) {
                std::complex<double> ps(0, 0);
                for (double x : th) ps += std::polar(1.0, n * x);
                double want = c.t_cache[n - 1] / std::pow(static_cast<double>(s.q), n / 2.0);
                worst_power_sum = std::max(worst_power_sum, std::abs(ps.real() - want));
                worst_power_sum = std::max(worst_power_sum, std::abs(ps.imag()));
            }
        });
        if (bad_exact) pass = false;
        if (worst_power_sum > 1e-8) pass = false;
        detail += "q=" + std::to_string(s.q) + ": exact mismatches " + std::to_string(bad_exact) +
                  ", max power-sum err " + std::to_string(worst_power_sum) + "; ";
    }
    double el = seconds_since(t0);
    if (el > 300.0) pass = false;
    detail += std::to_string(el).substr(0, 5) + "s";
    report(2, "triple trace agreement", pass, detail);
}

// ---- criterion 3: the MT/ET partition is a literal re-summation ----
void criterion3() {
    Fq f = Fq::make(7, 1);
    SymbolContext ctx(f, 3);
    FamilySpec spec(f, 3, 2);
    bool pass = true;
    std::string detail;
    for (int n = 1; n <= 6; ++n) {
        TraceReport rep = average_scaled_trace(ctx, spec, n);
        if (!rep.decomposition_exact || rep.avg_scaled != rep.mt_scaled + rep.et_scaled) {
            pass = false;
            detail += "n=" + std::to_string(n) + " ";
        }
    }
    report(3, "MT/ET partition exact", pass, detail);
}

// ---- criterion 4: counting identities ----
void criterion4() {
    bool pass = true;
    std::string detail;
    struct Spec {
        int q, r, g;
    };
    for (const Spec& s : {Spec{3, 2, 1}, Spec{3, 2, 2}, Spec{7, 3, 1}, Spec{7, 3, 2}}) {
        Fq f = Fq::make(s.q, 1);
        SymbolContext ctx(f, s.r);
        FamilySpec spec(f, s.r, s.g);
        BigInt series = count_from_series(ctx, spec);
        std::int64_t enumerated = 0;
        enumerate_family(ctx, spec, [&](const ThinModel&) { ++enumerated; });
        if (series != BigInt(enumerated) ||
            series != count_family(ctx, spec, Conductor::trivial())) {
            pass = false;
            detail += "count(q=" + std::to_string(s.q) + ",g=" + std::to_string(s.g) + ") ";
        }
    }
    {
        Fq f3 = Fq::make(3, 1);
        SymbolContext ctx(f3, 2);
        for (int s = 1; s <= 2; ++s) {
            for (int m = 1; m <= 2; ++m) {
                for (const Poly& pp : enumerate_irreducibles(f3, m)) {
                    PrimePoly P = PrimePoly::finite(pp);
                    Conductor c;
                    c.excluded_primes_by_degree[m] = 1;
                    SeriesTable hp = series_coeff(ctx, s, c, 8);
                    for (int d = 0; d <= 8; ++d) {
                        if (hp.coeffs[d] != incexc_coeff(ctx, s, P, d)) {
                            pass = false;
                            detail += "incexc ";
                        }
                    }
                }
            }
        }
    }
    report(4, "counting identities", pass, detail);
}

// ---- criterion 5: a = 0 combinatorial identity ----
void criterion5() {
    auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    for (std::int64_t q : {3, 5, 7, 13})
        for (int r = 2; r <= 12; ++r)
            for (int n = 1; n <= 12; ++n) {
                auto [lhs, rhs] = a0_identity(q, r, n);
                if (lhs != rhs) {
                    pass = false;
                    detail += "(q=" + std::to_string(q) + ",r=" + std::to_string(r) +
                              ",n=" + std::to_string(n) + ") ";
                }
            }
    double el = seconds_since(t0);
    if (el > 30.0) pass = false;
    report(5, "a=0 identity", pass, detail + std::to_string(el).substr(0, 5) + "s");
}

// ---- criterion 6: coprime-ratio formula trend ----
void criterion6() {
    Fq f = Fq::make(7, 1);
    SymbolContext ctx(f, 3);
    PrimePoly P = PrimePoly::finite(enumerate_irreducibles(f, 1)[0]); // P = x
    bool pass = true;
    std::string detail;
    BigRat prev(-1);
    for (int g : {2, 4, 6}) {
        FamilySpec spec(f, 3, g);
        UnramRatio u = unram_ratio(ctx, spec, P);
        BigRat bound(10, g * 7);
        bool ok = u.residual <= bound && (prev < 0 || u.residual < prev);
        if (!ok) pass = false;
        detail += "g=" + std::to_string(g) + ": |res|=" +
                  std::to_string(to_double(u.residual)).substr(0, 8) + " ";
        prev = u.residual;
    }
    report(6, "coprime-ratio trend", pass, detail);
}

// ---- criterion 7: the secondary main term reduces the residual ----
void criterion7() {
    Fq f = Fq::make(7, 1);
    SymbolContext ctx(f, 3);
    FamilySpec spec(f, 3, 4);
    int n = 3;
    TraceReport rep = average_scaled_trace(ctx, spec, n);
    // scaled comparison: main = -phi(3) q^{n/3} = -14, refined subtracts
    // q^{n/2} D_3(4,3)
    BigRat main(-14);
    BigRat refined = main - d_r_scaled(ctx, spec, n);
    BigRat res_with = rat_abs(rep.avg_scaled - refined);
    BigRat res_without = rat_abs(rep.avg_scaled - main);
    bool pass = res_with < res_without;
    std::string detail = "avg=" + rat_str(rep.avg_scaled) +
                         " |avg-(main-D)|=" + std::to_string(to_double(res_with)).substr(0, 8) +
                         " |avg-main|=" + std::to_string(to_double(res_without)).substr(0, 8);
    if (!pass)
        detail += " (the D_r correction is asymptotic; at g=4 the finite-size error of the "
                  "coprime-ratio formula dominates and the bare main term is closer; see "
                  "docs in the repository README)";
    report(7, "secondary main term at g=4", pass, detail);
}

// ---- criterion 8: refined one-level density ----
void criterion8() {
    auto t0 = Clock::now();
    Fq f = Fq::make(7, 1);
    SymbolContext ctx(f, 3);
    TestFunction tf = TestFunction::fejer_one_sided(0.45);
    double res2, res4;
    {
        FamilySpec spec(f, 3, 2);
        DensityReport r2 = density_report(ctx, spec, tf);
        res2 = r2.residual_refined;
    }
    {
        FamilySpec spec(f, 3, 4);
        DensityReport r4 = density_report(ctx, spec, tf);
        res4 = r4.residual_refined;
    }
    double el = seconds_since(t0);
    bool pass = res4 < res2 && res4 <= 0.25 && el <= 600.0;
    report(8, "refined density residuals", pass,
           "res(g=2)=" + std::to_string(res2) + " res(g=4)=" + std::to_string(res4) + " " +
               std::to_string(el).substr(0, 5) + "s");
}

// ---- criterion 9: Riemann hypothesis on every computed L-polynomial ----
void criterion9() {
    // criterion 2 already accumulated the two full genus-2 families; add the
    // full (5,2,3) family and samples of (7,3,4) and (13,4,3)
    auto add_family_exhaustive = [&](int q, int r, int g) {
        Fq f = Fq::make(q, 1);
        SymbolContext ctx(f, r);
        FamilySpec spec(f, r, g);
        FamilyTraces ft = family_traces(ctx, spec, g);
        for (std::size_t i = 0; i < ft.size; ++i) {
            std::vector<std::int64_t> t(g);
            for (int n = 1; n <= g; ++n) t[n - 1] = ft.trace(i, n);
            LPolynomial L = l_polynomial_from_traces(q, g, t);
            g_max_rh_dev = std::max(g_max_rh_dev, rh_root_deviation(q, L));
            ++g_lpoly_count;
        }
    };
    auto add_family_sampled = [&](int q, int r, int g, std::size_t count) {
        Fq f = Fq::make(q, 1);
        SymbolContext ctx(f, r);
        FamilySpec spec(f, r, g);
        auto models = sample_family(ctx, spec, count, 20260809);
        std::vector<std::vector<std::int64_t>> t(models.size(), std::vector<std::int64_t>(g));
        for (int n = 1; n <= g; ++n) {
            auto ts = model_traces(ctx, spec, models, n);
            for (std::size_t i = 0; i < models.size(); ++i) t[i][n - 1] = ts[i];
        }
        for (auto& row : t) {
            LPolynomial L = l_polynomial_from_traces(q, g, row);
            g_max_rh_dev = std::max(g_max_rh_dev, rh_root_deviation(q, L));
            ++g_lpoly_count;
        }
    };
    add_family_exhaustive(5, 2, 3);
    add_family_sampled(7, 3, 4, 2000);
    add_family_sampled(13, 4, 3, 2000);
    bool pass = g_max_rh_dev <= 1e-8 && g_lpoly_count > 0;
    report(9, "RH on computed L-polynomials", pass,
           std::to_string(g_lpoly_count) + " L-polynomials, max |root|-q^{-1/2} deviation " +
               std::to_string(g_max_rh_dev));
}

// ---- criterion 10: symplectic signature at (5,2,3) ----
void criterion10() {
    Fq f = Fq::make(5, 1);
    SymbolContext ctx(f, 2);
    FamilySpec spec(f, 2, 3);
    bool pass = true;
    std::string detail;
    for (int n = 4; n < 6; ++n) {
        TraceReport rep = average_scaled_trace(ctx, spec, n);
        double tr = to_double(rep.avg_scaled) / std::pow(5.0, n / 2.0);
        double target = (n % 2 == 0) ? -1.0 : 0.0;
        if (std::abs(tr - target) > 0.2) pass = false;
        detail += "n=" + std::to_string(n) + ": <Tr>=" + std::to_string(tr) + " ";
    }
    report(10, "USp signature at (5,2,3)", pass, detail);
}

} // namespace

int main() {
    auto t0 = Clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    std::printf("acceptance: %d of 10 criteria passed (%.1fs total)\n", 10 - failures,
                seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
