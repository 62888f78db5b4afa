#pragma once

#include "rankin/bernoulli.hpp"
#include "rankin/qexp.hpp"

namespace rankin {

// weight-(k+2) Eisenstein series with constant term zeta(-1-k) and
// divisor-sum coefficients twisted by zeta_N^b; k >= -1, b != 0 mod N
QExp<CycQRing> eis_holo(long k, long b, long N, long Q);

// p-adic Eisenstein family over (Z/p^M)[zeta_N]: a_0 = 0 and
//   a_n = sum_{dd'=n, p∤d'} d^{t+s-1} (d')^{-s} (zeta^{bd'} + (-1)^t zeta^{-bd'})
// The integral constructor requires t+s >= 1 so that all coefficients lie
// in Z_p[zeta_N].
QExp<CycZpmRing> eis_padic_integral(long t, long s, long b, long N, const Zpm& zp, long Q);

// Arbitrary integer (t, s): the n-th coefficient is a finite p-adic sum
// but can have bounded negative valuation through d^{t+s-1}. The series is
// returned multiplied by p^pscale with the minimal uniform scale that
// clears denominators up to the q-precision.
struct EisPadic {
    QExp<CycZpmRing> series;
    long pscale = 0; // value = p^{-pscale} * series
};
EisPadic eis_padic(long t, long s, long b, long N, const Zpm& zp, long Q);
EisPadic eis_padic_scaled(long t, long s, long b, long N, const Zpm& zp, long Q, long pscale);

// p-depleted version: coefficients supported away from p only
EisPadic eis_depleted(long t, long s, long b, long N, const Zpm& zp, long Q);

// Galois-averaged series  sum_{b in (Z/N)^x} F^{(p)}_{t,0,b}, which has
// rational coefficients (Ramanujan sums); t must be even and t >= 2.
// Used where a rational spanning set is wanted.
QExp<ZpmRing> eis_stab_avg(long t, long N, const Zpm& zp, long Q);

// same over Q, without the p-stabilization: sum_b F_{t,b}
QExp<RatRing> eis_avg_rational(long t, long N, long Q);

// Ramanujan sum c_N(m) = sum_{d | gcd(m,N)} d mu(N/d)
long ramanujan_sum(long N, long m);

// ---- TSym-valued sections ----------------------------------------------

// components indexed by the second basis index: comp[j] multiplies v^{[k-j, j]}
template <class P>
struct TSymSection {
    long k = 0;
    std::vector<QExp<P>> comp;

    TSymSection() = default;
    TSymSection(const typename P::Ring& R, long deg, long Q)
        : k(deg), comp((size_t)deg + 1, QExp<P>(R, Q)) {}
};

// de Rham Eisenstein section: -N^k F_{k+2,b} concentrated in v^{[0,k]}
TSymSection<CycQRing> derham_eis(long k, long b, long N, long Q);

// alpha_rig = -N^k sum_j (-1)^{k-j} (k-j)! F^{(p)}_{2j-k, k+1-j, b} v^{[k-j,j]}
TSymSection<CycZpmRing> syntomic_alpha_rig(long k, long b, long N, const Zpm& zp, long Q);

// nabla(F v^{[r,s]}) = theta(F) v^{[r,s]} + (r+1) F v^{[r+1,s-1]}, the
// second term dropped at s = 0; degree is preserved
template <class P>
TSymSection<P> nabla(const TSymSection<P>& sec) {
    TSymSection<P> out;
    out.k = sec.k;
    out.comp.reserve(sec.comp.size());
    for (long j = 0; j <= sec.k; j++) out.comp.push_back(theta_op(sec.comp[j]));
    for (long j = 1; j <= sec.k; j++) {
        long r = sec.k - j;
        auto term = qexp_scal(sec.comp[j], P::from_long(sec.comp[j].ring, r + 1));
        out.comp[j - 1] = qexp_add(out.comp[j - 1], term);
    }
    return out;
}

} // namespace rankin
