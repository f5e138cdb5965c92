#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace cyclotrace {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline double to_double(const BigRat& x) {
    return static_cast<double>(x);
}

inline BigRat rat_abs(const BigRat& x) { return x < 0 ? BigRat(-x) : x; }

inline BigInt big_pow(BigInt base, unsigned e) {
    BigInt r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline BigRat rat_pow(const BigRat& base, unsigned e) {
    BigRat r = 1, b = base;
    unsigned k = e;
    while (k) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

} // namespace cyclotrace
