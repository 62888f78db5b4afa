#pragma once

#include <vector>

#include "rankin/bigint.hpp"
#include "rankin/zpm.hpp"

namespace rankin {

// integer coefficients of the N-th cyclotomic polynomial, constant first
std::vector<Int> cyclotomic_polynomial(long N);

unsigned long euler_phi(long N);

// Residue ring Q[x]/Phi_N(x), x the image of a primitive N-th root of
// unity. A field when N is prime (or a prime power); in general reduction
// modulo Phi_N keeps degrees at phi(N) and makes zero-testing exact.
class CycQ {
  public:
    CycQ() = default;
    explicit CycQ(long N); // zero element
    CycQ(long N, const Rat& c); // rational constant
    static CycQ zeta_power(long N, long e); // zeta_N^e reduced mod Phi_N

    long modulus() const { return N_; }
    const std::vector<Rat>& coeffs() const { return c_; }
    bool is_zero() const;
    bool is_rational(Rat* value = nullptr) const;

    CycQ operator+(const CycQ& o) const;
    CycQ operator-(const CycQ& o) const;
    CycQ operator*(const CycQ& o) const;
    CycQ operator*(const Rat& s) const;
    CycQ operator-() const;
    bool operator==(const CycQ& o) const;

    // galois action zeta -> zeta^a, gcd(a, N) = 1
    CycQ galois(long a) const;

    // multiplicative inverse (resultant-free: linear solve); throws if not a unit
    CycQ inverse() const;

  private:
    long N_ = 1;
    std::vector<Rat> c_; // length phi(N)

    static const std::vector<Int>& phi_poly(long N);
    void reduce(std::vector<Rat>& raw) const; // degree < N -> degree < phi(N)
    friend CycQ mul_raw(const CycQ& a, const CycQ& b);
};

// The same ring with Z/p^M coefficients: (Z/p^M)[x]/Phi_N(x). Used for
// p-adic Eisenstein series with zeta_N coefficients; requires gcd(p, N)=1.
class CycZpm {
  public:
    struct Ring {
        Zpm zp;
        long N = 1;
        std::vector<uint64_t> phi; // Phi_N mod p^M, constant first, monic
        unsigned deg = 1;
        Ring() = default;
        Ring(const Zpm& zp_, long N_);
        bool operator==(const Ring& o) const { return zp == o.zp && N == o.N; }
    };

    static std::vector<uint64_t> zero(const Ring& R) { return std::vector<uint64_t>(R.deg, 0); }
    static std::vector<uint64_t> constant(const Ring& R, uint64_t c);
    static std::vector<uint64_t> zeta_power(const Ring& R, long e);
    static std::vector<uint64_t> add(const Ring& R, const std::vector<uint64_t>& a,
                                     const std::vector<uint64_t>& b);
    static std::vector<uint64_t> sub(const Ring& R, const std::vector<uint64_t>& a,
                                     const std::vector<uint64_t>& b);
    static std::vector<uint64_t> mul(const Ring& R, const std::vector<uint64_t>& a,
                                     const std::vector<uint64_t>& b);
    static std::vector<uint64_t> scal(const Ring& R, uint64_t s, const std::vector<uint64_t>& a);
    static bool is_zero(const std::vector<uint64_t>& a);
};

} // namespace rankin
