#include "cyclotrace/ext.hpp"

namespace cyclotrace {

namespace {

std::vector<std::int64_t> prime_factors64(std::int64_t n) {
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

std::int64_t FqExt::add(std::int64_t x, std::int64_t y) const {
    const Fq& F = *base_;
    std::int64_t q = F.q();
    std::int64_t out = 0, mult = 1;
    while (x || y) {
        int d = F.add(static_cast<int>(x % q), static_cast<int>(y % q));
        out += d * mult;
        mult *= q;
        x /= q;
        y /= q;
    }
    return out;
}

std::int64_t FqExt::raw_mul(std::int64_t x, std::int64_t y) const {
    const Fq& F = *base_;
    std::int64_t q = F.q();
    // digit polynomials
    int dx[32], dy[32];
    int nx = 0, ny = 0;
    while (x) {
        dx[nx++] = static_cast<int>(x % q);
        x /= q;
    }
    while (y) {
        dy[ny++] = static_cast<int>(y % q);
        y /= q;
    }
    if (!nx || !ny) return 0;
    int conv[64] = {0};
    for (int i = 0; i < nx; ++i) {
        if (!dx[i]) continue;
        for (int j = 0; j < ny; ++j)
            if (dy[j]) conv[i + j] = F.add(conv[i + j], F.mul(dx[i], dy[j]));
    }
    // reduce mod modulus
    for (int k = nx + ny - 2; k >= n_; --k) {
        int c = conv[k];
        if (!c) continue;
        conv[k] = 0;
        for (int i = 0; i < n_; ++i)
            conv[k - n_ + i] = F.sub(conv[k - n_ + i], F.mul(c, modulus_[i]));
    }
    std::int64_t out = 0;
    for (int i = n_ - 1; i >= 0; --i) out = out * q + conv[i];
    return out;
}

std::int64_t FqExt::pow(std::int64_t x, std::int64_t e) const {
    if (x == 0) return e == 0 ? 1 : 0;
    std::int64_t ord = size_ - 1;
    std::int64_t k = log_[x];
    __int128 ke = static_cast<__int128>(k % ord) * (e % ord) % ord;
    if (ke < 0) ke += ord;
    return exp_[static_cast<std::int64_t>(ke)];
}

FqExt FqExt::extend(const Fq& base, int n) {
    if (n < 1) throw std::invalid_argument("extension degree must be positive");
    std::int64_t size = 1;
    for (int i = 0; i < n; ++i) {
        size *= base.q();
        if (size > kMaxSize) throw ExtensionTooLargeError("q^n exceeds 2^24");
    }

    FqExt E;
    E.base_ = &base;
    E.n_ = n;
    E.size_ = size;

    if (n == 1) {
        // identity extension: modulus z - beta-free, i.e. z - 0? use z itself
        E.modulus_ = {0, 1};
        E.gen_ = base.generator();
        E.log_.assign(size, -1);
        E.exp_.assign(size - 1, 0);
        for (std::int64_t k = 0; k < size - 1; ++k) {
            int v = base.element_of_rank(static_cast<int>(k) + 1);
            // element_of_rank(1+k) = beta^k
            E.exp_[k] = static_cast<std::int32_t>(v);
            E.log_[v] = static_cast<std::int32_t>(k);
        }
        return E;
    }

    // modulus: first monic irreducible of degree n in the polynomial lex order
    Poly mod;
    {
        std::int64_t qm = 1;
        for (int i = 0; i < n; ++i) qm *= base.q();
        bool found = false;
        for (std::int64_t code = 0; code < qm && !found; ++code) {
            Poly cand = monic_from_code(base, n, code);
            if (is_irreducible(cand)) {
                mod = cand;
                found = true;
            }
        }
        if (!found) throw std::logic_error("no extension modulus found");
    }
    E.modulus_ = mod.c;

    std::int64_t ord = size - 1;
    auto factors = prime_factors64(ord);
    std::int64_t norm_exp = ord / (base.q() - 1);
    auto raw_pow = [&](std::int64_t x, std::int64_t e) {
        std::int64_t r = 1;
        while (e) {
            if (e & 1) r = E.raw_mul(r, x);
            x = E.raw_mul(x, x);
            e >>= 1;
        }
        return r;
    };

    std::int64_t gen = 0;
    for (std::int64_t cand = base.q(); cand < size && !gen; ++cand) {
        // constants can never generate for n > 1; start above them
        bool ok = true;
        for (auto l : factors) {
            if (raw_pow(cand, ord / l) == 1) {
                ok = false;
                break;
            }
        }
        if (ok && raw_pow(cand, norm_exp) == base.generator()) gen = cand;
    }
    if (!gen) throw std::logic_error("no norm-compatible generator found");
    E.gen_ = gen;

    E.log_.assign(size, -1);
    E.exp_.assign(size - 1, 0);
    std::int64_t x = 1;
    for (std::int64_t k = 0; k < ord; ++k) {
        E.exp_[k] = static_cast<std::int32_t>(x);
        E.log_[x] = static_cast<std::int32_t>(k);
        x = E.raw_mul(x, gen);
    }
    if (x != 1) throw std::logic_error("extension generator order mismatch");
    return E;
}

CycRing::Cyc char_eval(const FqExt& ext, const CycRing& ring, int s, std::int64_t x) {
    if ((ext.base().q() - 1) % s != 0)
        throw BadCongruenceError("q not congruent to 1 mod s");
    if (ring.order() % s != 0) throw std::invalid_argument("s does not divide the ring order");
    if (x == 0) return ring.zero<std::int64_t>();
    long long t = static_cast<long long>(ext.dlog(x) % s);
    return ring.root_pow<std::int64_t>(static_cast<long long>(ring.order() / s) * t);
}

} // namespace cyclotrace
