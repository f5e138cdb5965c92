#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "cyclotrace/cyclotomic.hpp"
#include "cyclotrace/fq.hpp"
#include "cyclotrace/poly.hpp"

namespace cyclotrace {

// F_{q^n} = F_q[z]/(M), q^n <= 2^24. Element codes are base-q digit strings
// (digit i = F_q element code of the coefficient of z^i), so F_q embeds as
// the codes < q (constants). The generator is chosen norm-compatible with the
// base generator: gen^((q^n-1)/(q-1)) = base generator. That single condition
// makes every character identity mod s (s | q-1) hold across degrees.
class FqExt {
  public:
    static constexpr std::int64_t kMaxSize = 1 << 24;

    static FqExt extend(const Fq& base, int n);

    const Fq& base() const { return *base_; }
    int n() const { return n_; }
    std::int64_t size() const { return size_; }
    const std::vector<int>& modulus() const { return modulus_; } // F_q codes, monic, deg n
    std::int64_t generator() const { return gen_; }

    std::int64_t embed(int base_elem) const { return base_elem; }

    std::int64_t add(std::int64_t x, std::int64_t y) const;
    std::int64_t add_constant(std::int64_t x, int c) const {
        if (!c) return x;
        std::int64_t low = x % base_->q();
        return x - low + base_->add(static_cast<int>(low), c);
    }
    std::int64_t mul(std::int64_t x, std::int64_t y) const {
        if (x == 0 || y == 0) return 0;
        std::int64_t k = log_[x] + log_[y];
        if (k >= size_ - 1) k -= size_ - 1;
        return exp_[k];
    }
    std::int64_t pow(std::int64_t x, std::int64_t e) const;
    std::int64_t dlog(std::int64_t x) const { return log_[x]; }
    std::int64_t from_log(std::int64_t k) const { return exp_[k]; }

    // F(alpha) for F with F_q coefficients
    std::int64_t eval_poly(const Poly& F, std::int64_t alpha) const {
        std::int64_t acc = 0;
        for (int i = F.degree(); i >= 0; --i) acc = add_constant(mul(acc, alpha), F.c[i]);
        return acc;
    }

  private:
    const Fq* base_ = nullptr;
    int n_ = 0;
    std::int64_t size_ = 0;
    std::vector<int> modulus_;
    std::int64_t gen_ = 0;
    std::vector<std::int32_t> log_;
    std::vector<std::int32_t> exp_;

    std::int64_t raw_mul(std::int64_t x, std::int64_t y) const;
};

// chi_{s;n} of Eq-(3.1) shape: 0 at zero, else xi_s^t for x = beta^t,
// realized inside Z[xi_r] as xi_r^{(r/s) t}. Requires q = 1 mod s.
CycRing::Cyc char_eval(const FqExt& ext, const CycRing& ring, int s, std::int64_t x);

// exponent form: t mod s for x != 0, or -1 for x == 0
inline int char_exp(const FqExt& ext, int s, std::int64_t x) {
    if (x == 0) return -1;
    return static_cast<int>(ext.dlog(x) % s);
}

} // namespace cyclotrace
