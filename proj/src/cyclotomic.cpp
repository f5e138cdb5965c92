#include "cyclotrace/cyclotomic.hpp"

#include <cassert>

namespace cyclotrace {

int euler_phi(int n) {
    int res = n, m = n;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            while (m % p == 0) m /= p;
            res -= res / p;
        }
    }
    if (m > 1) res -= res / m;
    return res;
}

int moebius(int n) {
    int res = 1, m = n;
    for (int p = 2; p * p <= m; ++p) {
        if (m % p == 0) {
            m /= p;
            if (m % p == 0) return 0;
            res = -res;
        }
    }
    if (m > 1) res = -res;
    return res;
}

std::vector<int> divisors_of(int n) {
    std::vector<int> out;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) out.push_back(d);
    return out;
}

namespace {

// exact division f / g over Z with g monic
std::vector<std::int64_t> zdiv(std::vector<std::int64_t> f, const std::vector<std::int64_t>& g) {
    std::vector<std::int64_t> out(f.size() - g.size() + 1, 0);
    while (f.size() >= g.size()) {
        std::int64_t c = f.back();
        out[f.size() - g.size()] = c;
        for (std::size_t i = 0; i < g.size(); ++i)
            f[f.size() - g.size() + i] -= c * g[i];
        assert(f.back() == 0);
        f.pop_back();
    }
    for (auto c : f) {
        (void)c;
        assert(c == 0);
    }
    return out;
}

} // namespace

std::vector<std::int64_t> cyclotomic_polynomial(int r) {
    if (r == 1) return {-1, 1};
    // (x^r - 1) / prod_{d | r, d < r} Phi_d
    std::vector<std::int64_t> f(r + 1, 0);
    f[0] = -1;
    f[r] = 1;
    for (int d : divisors_of(r)) {
        if (d == r) continue;
        f = zdiv(f, cyclotomic_polynomial(d));
    }
    return f;
}

CycRing::CycRing(int r) : r_(r) {
    if (r < 1) throw std::invalid_argument("cyclotomic order must be >= 1");
    phi_ = cyclotomic_polynomial(r);
    deg_ = static_cast<int>(phi_.size()) - 1;

    // x^k mod Phi_r for k in [deg, 2*deg-2]
    std::vector<std::int64_t> cur(deg_, 0);
    for (int i = 0; i < deg_; ++i) cur[i] = -phi_[i]; // x^deg
    red_.push_back(cur);
    for (int k = deg_ + 1; k <= 2 * deg_ - 2; ++k) {
        std::vector<std::int64_t> nxt(deg_, 0);
        for (int i = 0; i + 1 < deg_; ++i) nxt[i + 1] = cur[i];
        if (cur[deg_ - 1] != 0)
            for (int i = 0; i < deg_; ++i) nxt[i] += cur[deg_ - 1] * red_[0][i];
        red_.push_back(nxt);
        cur = nxt;
    }

    root_cache_.assign(r_, std::vector<std::int64_t>(deg_, 0));
    std::vector<std::int64_t> x(deg_, 0);
    x[0] = 1;
    for (int t = 0; t < r_; ++t) {
        root_cache_[t] = x;
        // multiply by x
        std::vector<std::int64_t> nxt(deg_, 0);
        for (int i = 0; i + 1 < deg_; ++i) nxt[i + 1] = x[i];
        if (x[deg_ - 1] != 0)
            for (int i = 0; i < deg_; ++i) nxt[i] += x[deg_ - 1] * red_[0][i];
        x = nxt;
    }
}

} // namespace cyclotrace
