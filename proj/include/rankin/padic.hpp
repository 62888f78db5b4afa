#pragma once

#include <optional>

#include "rankin/bigint.hpp"

namespace rankin {

// Capped-precision p-adic number  x = mantissa * p^vfloor,  mantissa known
// modulo p^M. Absolute precision is p^(vfloor+M). Precision tracking is
// pessimistic: every binary operation returns the minimum guaranteed
// precision of its operands.
class PadicNum {
  public:
    PadicNum() = default;
    PadicNum(Int p, unsigned M, Int mantissa, long vfloor = 0);

    static PadicNum from_rational(const Rat& x, const Int& p, unsigned M);
    static PadicNum zero(const Int& p, unsigned M) { return PadicNum(p, M, 0, 0); }
    static PadicNum one(const Int& p, unsigned M) { return PadicNum(p, M, 1, 0); }

    const Int& prime() const { return p_; }
    unsigned precision() const { return M_; }
    long vfloor() const { return vfloor_; }
    const Int& mantissa() const { return m_; }
    Int pM() const { return pow_int(p_, M_); }

    // valuation of the value (capped: if the mantissa is 0 the value is
    // only known to be divisible by p^(vfloor+M))
    long valuation() const;
    bool is_zero() const { return m_ == 0; }

    PadicNum operator+(const PadicNum& o) const;
    PadicNum operator-(const PadicNum& o) const;
    PadicNum operator*(const PadicNum& o) const;
    PadicNum operator/(const PadicNum& o) const; // divides by p-powers via the floor
    PadicNum operator-() const;

    PadicNum pow(long e) const;

    // equal iff the values agree to the common guaranteed precision
    bool same(const PadicNum& o) const;

    // digits base p, least significant first, of the mantissa
    std::vector<Int> digits() const;

    std::string str() const;

  private:
    Int p_ = 0;
    unsigned M_ = 0;
    Int m_ = 0;      // in [0, p^M)
    long vfloor_ = 0;

    void normalize(); // push p-divisibility of the mantissa into vfloor
};

// Unique unit root of X^2 - aX + c over Z_p (requires a a unit: the
// ordinary case). Newton iteration from X = a mod p.
PadicNum hensel_unit_root(const PadicNum& a, const PadicNum& c);

// Rational reconstruction: the unique n/d with |n|, d <= floor(sqrt(q/2)),
// n ≡ d*x (mod q), if it exists. Continued-fraction (extended Euclid) on
// (q, x).
std::optional<Rat> rational_reconstruct(const Int& x, const Int& q);
std::optional<Rat> rational_reconstruct(const PadicNum& x);

} // namespace rankin
