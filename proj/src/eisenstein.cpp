#include "rankin/eisenstein.hpp"

#include <numeric>

namespace rankin {

namespace {

long mobius(long n) {
    long r = 1;
    for (long p = 2; p * p <= n; p++) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        r = -r;
    }
    if (n > 1) r = -r;
    return r;
}

long ipow_log(long b, long e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

} // namespace

long ramanujan_sum(long N, long m) {
    m %= N;
    if (m < 0) m += N;
    long g = std::gcd(m == 0 ? N : m, N);
    long acc = 0;
    for (long d = 1; d <= g; d++)
        if (g % d == 0) acc += d * mobius(N / d);
    return acc;
}

QExp<CycQRing> eis_holo(long k, long b, long N, long Q) {
    if (k < -1) throw std::domain_error("eis_holo: k >= -1 required");
    b %= N;
    if (b < 0) b += N;
    if (b == 0) throw std::domain_error("eis_holo: b must be nonzero mod N");
    CycQRing::Ring R{N};
    // zeta-part table: zeta^{bm} + (-1)^k zeta^{-bm}
    std::vector<CycQ> zp(N, CycQ(N));
    for (long m = 0; m < N; m++) {
        CycQ z = CycQ::zeta_power(N, b * m);
        CycQ zi = CycQ::zeta_power(N, -b * m);
        zp[m] = (k % 2) ? z - zi : z + zi;
    }
    auto w = [&](long d, long dp) {
        return zp[dp % N] * Rat(pow_int(d, (unsigned long)(k + 1)));
    };
    auto out = divisor_sum_series<CycQRing>(R, Q, CycQ(N, zeta_neg(k)), w, false);
    return out;
}

namespace {

QExp<CycZpmRing> eis_padic_core(long t, long s, long b, long N, const Zpm& zp, long Q,
                                long pscale) {
    b %= N;
    if (b < 0) b += N;
    CycZpm::Ring R(zp, N);
    std::vector<std::vector<uint64_t>> ztab(N);
    for (long m = 0; m < N; m++) {
        auto z = CycZpm::zeta_power(R, b * m);
        auto zi = CycZpm::zeta_power(R, -b * m);
        ztab[m] = (t % 2) ? CycZpm::sub(R, z, zi) : CycZpm::add(R, z, zi);
    }
    long dexp = t + s - 1;
    auto weight = [&](long d, long dp) -> std::vector<uint64_t> {
        if (dp % (long)zp.p == 0) return CycZpm::zero(R);
        // d = p^v d0 with d0 a unit
        long v = 0;
        long d0 = d;
        while (d0 % (long)zp.p == 0) {
            d0 /= (long)zp.p;
            v++;
        }
        long pexp = pscale + v * dexp;
        if (pexp < 0) throw std::domain_error("eis_padic: insufficient p-scale");
        uint64_t c = zp.pow(zp.p % zp.q, (uint64_t)pexp);
        uint64_t u0 = zp.reduce_int(d0 % (long long)zp.q);
        c = zp.mul(c, dexp >= 0 ? zp.pow(u0, (uint64_t)dexp)
                                : zp.pow(zp.inv(u0), (uint64_t)(-dexp)));
        uint64_t dpu = zp.reduce_int(dp % (long long)zp.q);
        c = zp.mul(c, s >= 0 ? zp.pow(zp.inv(dpu), (uint64_t)s)
                             : zp.pow(dpu, (uint64_t)(-s)));
        return CycZpm::scal(R, c, ztab[dp % N]);
    };
    return divisor_sum_series<CycZpmRing>(R, Q, CycZpm::zero(R), weight, true);
}

} // namespace

QExp<CycZpmRing> eis_padic_integral(long t, long s, long b, long N, const Zpm& zp, long Q) {
    if (t + s < 1) throw std::domain_error("eis_padic_integral: t + s >= 1 required");
    return eis_padic_core(t, s, b, N, zp, Q, 0);
}

EisPadic eis_padic_scaled(long t, long s, long b, long N, const Zpm& zp, long Q, long pscale) {
    return {eis_padic_core(t, s, b, N, zp, Q, pscale), pscale};
}

EisPadic eis_padic(long t, long s, long b, long N, const Zpm& zp, long Q) {
    long dexp = t + s - 1;
    long scale = 0;
    if (dexp < 0 && Q > 1) {
        long vmax = 0, pw = (long)zp.p;
        while (pw < Q) {
            vmax++;
            pw *= (long)zp.p;
        }
        scale = -dexp * vmax;
    }
    return eis_padic_scaled(t, s, b, N, zp, Q, scale);
}

EisPadic eis_depleted(long t, long s, long b, long N, const Zpm& zp, long Q) {
    EisPadic e = eis_padic(t, s, b, N, zp, Q);
    e.series = deplete(e.series, (long)zp.p);
    return e;
}

QExp<ZpmRing> eis_stab_avg(long t, long N, const Zpm& zp, long Q) {
    if (t < 2 || t % 2) throw std::domain_error("eis_stab_avg: t must be even and >= 2");
    std::vector<uint64_t> ctab(N);
    for (long m = 0; m < N; m++) ctab[m] = zp.reduce_int(2 * ramanujan_sum(N, m));
    auto weight = [&](long d, long dp) -> uint64_t {
        if (dp % (long)zp.p == 0) return 0;
        uint64_t dd = zp.reduce_int(d % (long long)zp.q);
        return zp.mul(zp.pow(dd, (uint64_t)(t - 1)), ctab[dp % N]);
    };
    return divisor_sum_series<ZpmRing>(zp, Q, 0, weight, true);
}

QExp<RatRing> eis_avg_rational(long t, long N, long Q) {
    if (t < 2 || t % 2) throw std::domain_error("eis_avg_rational: t must be even and >= 2");
    RatRing::Ring R;
    auto weight = [&](long d, long dp) -> Rat {
        return Rat(2 * ramanujan_sum(N, dp)) * Rat(pow_int(d, (unsigned long)(t - 1)));
    };
    Rat a0 = Rat(euler_phi(N)) * zeta_neg(t - 2);
    return divisor_sum_series<RatRing>(R, Q, a0, weight, true);
}

TSymSection<CycQRing> derham_eis(long k, long b, long N, long Q) {
    CycQRing::Ring R{N};
    TSymSection<CycQRing> sec(R, k, Q);
    auto F = eis_holo(k, b, N, Q);
    Rat scale = -Rat(pow_int(N, (unsigned long)k));
    sec.comp[k] = qexp_scal(F, CycQ(N, scale));
    return sec;
}

TSymSection<CycZpmRing> syntomic_alpha_rig(long k, long b, long N, const Zpm& zp, long Q) {
    CycZpm::Ring R(zp, N);
    TSymSection<CycZpmRing> sec(R, k, Q);
    for (long j = 0; j <= k; j++) {
        auto F = eis_padic_integral(2 * j - k, k + 1 - j, b, N, zp, Q);
        // -N^k (-1)^{k-j} (k-j)!
        Int c = -pow_int(N, (unsigned long)k) * factorial(k - j);
        if ((k - j) % 2) c = -c;
        Int cq = c % Int(zp.q);
        if (cq < 0) cq += Int(zp.q);
        sec.comp[j] = qexp_scal(F, CycZpm::constant(R, (uint64_t)cq));
    }
    return sec;
}

} // namespace rankin
