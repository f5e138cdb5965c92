#pragma once

#include <cstdint>
#include <vector>

#include "cyclotrace/errors.hpp"

namespace cyclotrace {

// F_q, q = p^a <= 2^20. Elements are integer codes in [0, q): the base-p
// digits of a code are the coefficients of the residue polynomial mod the
// field modulus (digit i = coefficient of x^i). Multiplication runs on the
// discrete-log tables; addition is digit arithmetic.
class Fq {
  public:
    static constexpr std::int64_t kMaxQ = 1 << 20;

    // lexicographically smallest monic irreducible modulus (coefficients
    // compared low-degree first, natural integer order on F_p) and smallest
    // generator in the integer element encoding
    static Fq make(std::int64_t p, int a);

    std::int64_t p() const { return p_; }
    int a() const { return a_; }
    std::int64_t q() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }
    int generator() const { return gen_; }

    int add(int x, int y) const {
        if (a_ == 1) {
            int s = x + y;
            return s >= p_ ? s - static_cast<int>(p_) : s;
        }
        return add_ext(x, y);
    }
    int neg(int x) const {
        if (a_ == 1) return x == 0 ? 0 : static_cast<int>(p_) - x;
        return neg_ext(x);
    }
    int sub(int x, int y) const { return add(x, neg(y)); }
    int mul(int x, int y) const {
        if (x == 0 || y == 0) return 0;
        std::int64_t k = log_[x] + log_[y];
        if (k >= q_ - 1) k -= q_ - 1;
        return exp_[k];
    }
    int inv(int x) const {
        if (x == 0) throw std::domain_error("inverse of zero");
        std::int64_t k = log_[x];
        return exp_[k == 0 ? 0 : q_ - 1 - k];
    }
    int pow(int x, std::int64_t e) const;

    // discrete log base the generator; x must be nonzero
    std::int64_t dlog(int x) const { return log_[x]; }

    // element ordering used by polynomial lexicographic enumeration:
    // 0 first, then by discrete-log index
    int rank(int x) const { return x == 0 ? 0 : static_cast<int>(log_[x]) + 1; }
    int element_of_rank(int rk) const { return rk == 0 ? 0 : exp_[rk - 1]; }

    bool operator==(const Fq& o) const { return p_ == o.p_ && a_ == o.a_; }

  private:
    std::int64_t p_ = 0;
    int a_ = 0;
    std::int64_t q_ = 0;
    std::vector<int> modulus_;
    int gen_ = 0;
    std::vector<std::int32_t> log_; // log_[0] = -1
    std::vector<std::int32_t> exp_;

    int add_ext(int x, int y) const;
    int neg_ext(int x) const;
};

bool is_prime(std::int64_t n);

} // namespace cyclotrace
