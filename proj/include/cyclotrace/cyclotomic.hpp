#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "cyclotrace/bigint.hpp"
#include "cyclotrace/errors.hpp"

namespace cyclotrace {

// Z[xi_r], canonical representatives modulo the r-th cyclotomic polynomial.
// Elements are bare coefficient vectors of length phi(r); all arithmetic goes
// through the ring object. Two coefficient types are used: int64 on the
// character-sum hot paths, BigInt for generating-series tables whose entries
// grow like q^d.
class CycRing {
  public:
    template <class Z>
    using Elem = std::vector<Z>;
    using Cyc = Elem<std::int64_t>;
    using BigCyc = Elem<BigInt>;

    explicit CycRing(int r);

    int order() const { return r_; }
    int degree() const { return deg_; } // phi(r)
    const std::vector<std::int64_t>& modulus() const { return phi_; }

    template <class Z>
    Elem<Z> zero() const {
        return Elem<Z>(deg_, Z(0));
    }
    template <class Z>
    Elem<Z> one() const {
        Elem<Z> e(deg_, Z(0));
        e[0] = Z(1);
        return e;
    }
    template <class Z>
    Elem<Z> from_int(const Z& n) const {
        Elem<Z> e(deg_, Z(0));
        e[0] = n;
        return e;
    }

    // xi_r^t in canonical form
    template <class Z>
    Elem<Z> root_pow(long long t) const {
        t %= r_;
        if (t < 0) t += r_;
        Elem<Z> e(deg_, Z(0));
        if (t < deg_) {
            e[t] = Z(1);
            return e;
        }
        for (int i = 0; i < deg_; ++i) e[i] = Z(root_cache_[t][i]);
        return e;
    }

    template <class Z>
    void add_assign(Elem<Z>& a, const Elem<Z>& b) const {
        for (int i = 0; i < deg_; ++i) a[i] += b[i];
    }
    template <class Z>
    void sub_assign(Elem<Z>& a, const Elem<Z>& b) const {
        for (int i = 0; i < deg_; ++i) a[i] -= b[i];
    }
    template <class Z>
    void scaled_add_assign(Elem<Z>& a, const Z& c, const Elem<Z>& b) const {
        for (int i = 0; i < deg_; ++i) a[i] += c * b[i];
    }
    template <class Z>
    Elem<Z> add(Elem<Z> a, const Elem<Z>& b) const {
        add_assign(a, b);
        return a;
    }
    template <class Z>
    Elem<Z> sub(Elem<Z> a, const Elem<Z>& b) const {
        sub_assign(a, b);
        return a;
    }
    template <class Z>
    Elem<Z> scale(const Z& c, Elem<Z> a) const {
        for (int i = 0; i < deg_; ++i) a[i] *= c;
        return a;
    }

    template <class Z>
    Elem<Z> mul(const Elem<Z>& a, const Elem<Z>& b) const {
        std::vector<Z> conv(2 * deg_ - 1, Z(0));
        for (int i = 0; i < deg_; ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; j < deg_; ++j) conv[i + j] += a[i] * b[j];
        }
        Elem<Z> out(conv.begin(), conv.begin() + deg_);
        for (int k = deg_; k < 2 * deg_ - 1; ++k) {
            if (conv[k] == 0) continue;
            const auto& row = red_[k - deg_];
            for (int i = 0; i < deg_; ++i) out[i] += conv[k] * Z(row[i]);
        }
        return out;
    }

    template <class Z>
    bool is_zero(const Elem<Z>& a) const {
        for (const auto& c : a)
            if (c != 0) return false;
        return true;
    }
    template <class Z>
    bool is_rational_integer(const Elem<Z>& a) const {
        for (int i = 1; i < deg_; ++i)
            if (a[i] != 0) return false;
        return true;
    }
    template <class Z>
    Z to_integer(const Elem<Z>& a) const {
        if (!is_rational_integer(a))
            throw NonIntegerResultError("cyclotomic value is not a rational integer");
        return a[0];
    }

    template <class Z>
    std::complex<double> to_complex(const Elem<Z>& a) const {
        std::complex<double> acc(0.0, 0.0);
        for (int i = 0; i < deg_; ++i)
            acc += static_cast<double>(a[i]) * std::polar(1.0, 2.0 * M_PI * i / r_);
        return acc;
    }

  private:
    int r_;
    int deg_;
    std::vector<std::int64_t> phi_;                 // Phi_r, low->high, monic
    std::vector<std::vector<std::int64_t>> red_;    // x^{deg..2deg-2} mod Phi_r
    std::vector<std::vector<std::int64_t>> root_cache_; // x^t mod Phi_r for t < r
};

int euler_phi(int n);
int moebius(int n);
std::vector<int> divisors_of(int n);

// Phi_r over Z, coefficients low->high.
std::vector<std::int64_t> cyclotomic_polynomial(int r);

} // namespace cyclotrace
