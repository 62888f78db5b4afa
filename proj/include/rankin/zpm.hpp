#pragma once

#include <cstdint>
#include <stdexcept>

namespace rankin {

// The ring Z/p^M for a prime p, with p^M required to fit in 63 bits.
// Elements are plain uint64_t in [0, q); the descriptor is passed alongside.
struct Zpm {
    uint64_t p = 0;
    unsigned M = 0;
    uint64_t q = 0; // p^M

    Zpm() = default;
    Zpm(uint64_t p_, unsigned M_) : p(p_), M(M_) {
        q = 1;
        for (unsigned i = 0; i < M; i++) {
            if (q > (uint64_t(1) << 62) / p) throw std::overflow_error("Zpm: p^M exceeds 2^62");
            q *= p;
        }
    }

    bool operator==(const Zpm& o) const { return p == o.p && M == o.M; }

    uint64_t reduce_int(long long v) const {
        long long r = v % (long long)q;
        if (r < 0) r += (long long)q;
        return (uint64_t)r;
    }
    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= q ? s - q : s;
    }
    uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + q - b; }
    uint64_t neg(uint64_t a) const { return a ? q - a : 0; }
    uint64_t mul(uint64_t a, uint64_t b) const { return (uint64_t)((__uint128_t)a * b % q); }
    uint64_t pow(uint64_t a, uint64_t e) const {
        uint64_t r = 1 % q;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    bool is_unit(uint64_t a) const { return a % p != 0; }
    // extended Euclid; requires gcd(a, q) = 1
    uint64_t inv(uint64_t a) const {
        if (!is_unit(a)) throw std::domain_error("Zpm::inv: non-unit");
        long long t = 0, newt = 1;
        long long r = (long long)q, newr = (long long)(a % q);
        while (newr != 0) {
            long long quot = r / newr;
            long long tmp = t - quot * newt;
            t = newt;
            newt = tmp;
            tmp = r - quot * newr;
            r = newr;
            newr = tmp;
        }
        if (t < 0) t += (long long)q;
        return (uint64_t)t;
    }
    // p-adic valuation capped at M (val(0) = M)
    unsigned val(uint64_t a) const {
        if (a == 0) return M;
        unsigned v = 0;
        while (a % p == 0) {
            a /= p;
            v++;
        }
        return v;
    }
};

} // namespace rankin
