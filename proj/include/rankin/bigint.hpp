#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rankin {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int den(const Rat& x) { return boost::multiprecision::denominator(x); }

inline Int pow_int(Int base, unsigned long e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline Int factorial(long n) {
    if (n < 0) throw std::domain_error("factorial of negative integer");
    Int r = 1;
    for (long i = 2; i <= n; i++) r *= i;
    return r;
}

// C(n, k) with the convention that out-of-range indices give 0.
inline Int binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (long i = 1; i <= k; i++) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline Int gcd_int(Int a, Int b) { return boost::multiprecision::gcd(a, b); }

// parses "n", "-n", "n/d"
inline Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
}

inline std::string rat_str(const Rat& x) {
    if (den(x) == 1) return num(x).str();
    return num(x).str() + "/" + den(x).str();
}

inline long mod_pow_long(long b, long e, long m) {
    long r = 1 % m;
    b %= m;
    if (b < 0) b += m;
    while (e) {
        if (e & 1) r = (long)((__int128)r * b % m);
        b = (long)((__int128)b * b % m);
        e >>= 1;
    }
    return r;
}

} // namespace rankin
