#pragma once

#include <vector>

#include "rankin/bigint.hpp"

namespace rankin {

// Degree-k symmetric tensors over a rank-2 module with basis u, v.
// Coefficients are indexed by the second basis index: coeffs[s] multiplies
// w^{[k-s, s]} (divided-power basis u^{[k-s]} v^{[s]}).
struct TSymVec {
    long k = 0;
    std::vector<Rat> c; // size k+1

    TSymVec() = default;
    explicit TSymVec(long deg) : k(deg), c((size_t)deg + 1, Rat(0)) {}
    static TSymVec basis(long deg, long s) {
        TSymVec t(deg);
        t.c[(size_t)s] = 1;
        return t;
    }
};

// Sym^k of the dual module; coeffs[s] multiplies w^{(k-s, s)}. The pairing
// <w^{[r,s]}, w^{(r',s')}> = delta_{rr'} delta_{ss'}.
struct SymVec {
    long k = 0;
    std::vector<Rat> c;

    SymVec() = default;
    explicit SymVec(long deg) : k(deg), c((size_t)deg + 1, Rat(0)) {}
    static SymVec basis(long deg, long s) {
        SymVec t(deg);
        t.c[(size_t)s] = 1;
        return t;
    }
};

// Element of TSym^k (x) TSym^k' (x) det^{-j}; coeffs[b][d] multiplies
// w^{[k-b, b]} (x) w^{[k'-d, d]}. The determinant twist is tracked and
// never silently dropped.
struct CGTensor {
    long k = 0, kp = 0, j = 0;
    std::vector<std::vector<Rat>> c; // (k+1) x (k'+1)

    CGTensor() = default;
    CGTensor(long k_, long kp_, long j_)
        : k(k_), kp(kp_), j(j_),
          c((size_t)k_ + 1, std::vector<Rat>((size_t)kp_ + 1, Rat(0))) {}

    bool operator==(const CGTensor& o) const {
        return k == o.k && kp == o.kp && j == o.j && c == o.c;
    }
};

// value together with its determinant-twist exponent
struct TwistedRat {
    Rat value;
    long det_twist = 0;
};

// w^{[a,b]} * w^{[c,d]} = C(a+c,a) C(b+d,b) w^{[a+c,b+d]}, bilinearly
TSymVec tsym_mul(const TSymVec& x, const TSymVec& y);

// Clebsch-Gordan map TSym^{k+k'-2j} -> TSym^k (x) TSym^k' (x) det^{-j}
// by the explicit double sum; requires k, k' >= 0 and 0 <= j <= min(k,k').
CGTensor cg_map(long k, long kp, long j, const TSymVec& t);

// full contraction of cg_map(t) against a (x) b
TwistedRat cg_trilinear(long k, long kp, long j, const SymVec& a, const SymVec& b,
                        const TSymVec& t);

// the same map built from first principles in the full tensor algebra
// H^{(x)(k+k')}; cost guard k + k' - 2j <= 8
CGTensor cg_oracle(long k, long kp, long j, const TSymVec& t);

// dimension of Fil^n of the de Rham realization attached to weights
// (k+2, k'+2): 4 / 3 / 2 / 1 / 0 with jumps at 1, min+2, max+2, k+k'+3
int motive_fil_dim(long k, long kp, long n);

} // namespace rankin
