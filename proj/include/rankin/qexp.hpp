#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankin/bigint.hpp"
#include "rankin/cyclotomic.hpp"
#include "rankin/kernels.hpp"
#include "rankin/zpm.hpp"

namespace rankin {

// ---- coefficient-ring policies ---------------------------------------------

struct RatRing {
    struct Ring {
        bool operator==(const Ring&) const { return true; }
    };
    using Elem = Rat;
    static Elem zero(const Ring&) { return Rat(0); }
    static Elem from_long(const Ring&, long v) { return Rat(v); }
    static Elem from_rat(const Ring&, const Rat& x) { return x; }
    static Elem add(const Ring&, const Elem& a, const Elem& b) { return a + b; }
    static Elem sub(const Ring&, const Elem& a, const Elem& b) { return a - b; }
    static Elem mul(const Ring&, const Elem& a, const Elem& b) { return a * b; }
    static Elem neg(const Ring&, const Elem& a) { return -a; }
    static bool is_zero(const Ring&, const Elem& a) { return a == 0; }
    static bool eq(const Ring&, const Elem& a, const Elem& b) { return a == b; }
    static bool is_unit(const Ring&, const Elem& a) { return a != 0; }
    static Elem inv(const Ring&, const Elem& a) { return Rat(1) / a; }
    static std::string str(const Ring&, const Elem& a) { return rat_str(a); }
};

struct CycQRing {
    struct Ring {
        long N = 1;
        bool operator==(const Ring& o) const { return N == o.N; }
    };
    using Elem = CycQ;
    static Elem zero(const Ring& R) { return CycQ(R.N); }
    static Elem from_long(const Ring& R, long v) { return CycQ(R.N, Rat(v)); }
    static Elem from_rat(const Ring& R, const Rat& x) { return CycQ(R.N, x); }
    static Elem add(const Ring&, const Elem& a, const Elem& b) { return a + b; }
    static Elem sub(const Ring&, const Elem& a, const Elem& b) { return a - b; }
    static Elem mul(const Ring&, const Elem& a, const Elem& b) { return a * b; }
    static Elem neg(const Ring&, const Elem& a) { return -a; }
    static bool is_zero(const Ring&, const Elem& a) { return a.is_zero(); }
    static bool eq(const Ring&, const Elem& a, const Elem& b) { return a == b; }
    static bool is_unit(const Ring&, const Elem& a) { return !a.is_zero(); }
    static Elem inv(const Ring&, const Elem& a) { return a.inverse(); }
    static std::string str(const Ring&, const Elem& a) {
        std::string s = "[";
        for (size_t i = 0; i < a.coeffs().size(); i++)
            s += (i ? "," : "") + rat_str(a.coeffs()[i]);
        return s + "]";
    }
};

struct ZpmRing {
    using Ring = Zpm;
    using Elem = uint64_t;
    static Elem zero(const Ring&) { return 0; }
    static Elem from_long(const Ring& R, long v) { return R.reduce_int(v); }
    static Elem from_rat(const Ring& R, const Rat& x) {
        Int q(R.q);
        Int n = num(x) % q, d = den(x) % q;
        if (n < 0) n += q;
        uint64_t dd = (uint64_t)d;
        if (!R.is_unit(dd)) throw std::domain_error("ZpmRing::from_rat: denominator not a unit");
        return R.mul((uint64_t)n, R.inv(dd));
    }
    static Elem add(const Ring& R, Elem a, Elem b) { return R.add(a, b); }
    static Elem sub(const Ring& R, Elem a, Elem b) { return R.sub(a, b); }
    static Elem mul(const Ring& R, Elem a, Elem b) { return R.mul(a, b); }
    static Elem neg(const Ring& R, Elem a) { return R.neg(a); }
    static bool is_zero(const Ring&, Elem a) { return a == 0; }
    static bool eq(const Ring&, Elem a, Elem b) { return a == b; }
    static bool is_unit(const Ring& R, Elem a) { return R.is_unit(a); }
    static Elem inv(const Ring& R, Elem a) { return R.inv(a); }
    static std::string str(const Ring&, Elem a) { return std::to_string(a); }
};

struct CycZpmRing {
    using Ring = CycZpm::Ring;
    using Elem = std::vector<uint64_t>;
    static Elem zero(const Ring& R) { return CycZpm::zero(R); }
    static Elem from_long(const Ring& R, long v) { return CycZpm::constant(R, R.zp.reduce_int(v)); }
    static Elem from_rat(const Ring& R, const Rat& x) {
        return CycZpm::constant(R, ZpmRing::from_rat(R.zp, x));
    }
    static Elem add(const Ring& R, const Elem& a, const Elem& b) { return CycZpm::add(R, a, b); }
    static Elem sub(const Ring& R, const Elem& a, const Elem& b) { return CycZpm::sub(R, a, b); }
    static Elem mul(const Ring& R, const Elem& a, const Elem& b) { return CycZpm::mul(R, a, b); }
    static Elem neg(const Ring& R, const Elem& a) { return CycZpm::sub(R, CycZpm::zero(R), a); }
    static bool is_zero(const Ring&, const Elem& a) { return CycZpm::is_zero(a); }
    static bool eq(const Ring&, const Elem& a, const Elem& b) { return a == b; }
    static bool is_unit(const Ring& R, const Elem& a) {
        // unit iff invertible; only scalar units are needed by callers
        return a.size() && R.zp.is_unit(a[0]) &&
               std::all_of(a.begin() + 1, a.end(), [](uint64_t x) { return x == 0; });
    }
    static Elem inv(const Ring& R, const Elem& a) {
        if (!is_unit(R, a)) throw std::domain_error("CycZpmRing::inv: non-scalar");
        return CycZpm::constant(R, R.zp.inv(a[0]));
    }
    static std::string str(const Ring&, const Elem& a) {
        std::string s = "[";
        for (size_t i = 0; i < a.size(); i++) s += (i ? "," : "") + std::to_string(a[i]);
        return s + "]";
    }
};

// ---- truncated q-expansions -------------------------------------------------

enum class MulPath { Auto, Schoolbook, Transform };

template <class P>
struct QExp {
    using Ring = typename P::Ring;
    using T = typename P::Elem;

    Ring ring{};
    std::vector<T> a; // coefficients a_0 .. a_{prec-1}

    QExp() = default;
    QExp(const Ring& R, long prec) : ring(R), a((size_t)prec, P::zero(R)) {}

    long prec() const { return (long)a.size(); }
    const T& coeff(long n) const { return a[(size_t)n]; }

    static QExp one(const Ring& R, long prec) {
        QExp x(R, prec);
        if (prec > 0) x.a[0] = P::from_long(R, 1);
        return x;
    }
};

template <class P>
QExp<P> qexp_add(const QExp<P>& x, const QExp<P>& y) {
    if (!(x.ring == y.ring)) throw std::invalid_argument("qexp_add: ring mismatch");
    QExp<P> r(x.ring, std::min(x.prec(), y.prec()));
    for (long n = 0; n < r.prec(); n++) r.a[n] = P::add(x.ring, x.a[n], y.a[n]);
    return r;
}

template <class P>
QExp<P> qexp_sub(const QExp<P>& x, const QExp<P>& y) {
    if (!(x.ring == y.ring)) throw std::invalid_argument("qexp_sub: ring mismatch");
    QExp<P> r(x.ring, std::min(x.prec(), y.prec()));
    for (long n = 0; n < r.prec(); n++) r.a[n] = P::sub(x.ring, x.a[n], y.a[n]);
    return r;
}

template <class P>
QExp<P> qexp_scal(const QExp<P>& x, const typename P::Elem& s) {
    QExp<P> r(x.ring, x.prec());
    for (long n = 0; n < r.prec(); n++) r.a[n] = P::mul(x.ring, s, x.a[n]);
    return r;
}

template <class P>
bool qexp_eq(const QExp<P>& x, const QExp<P>& y) {
    long n = std::min(x.prec(), y.prec());
    for (long i = 0; i < n; i++)
        if (!P::eq(x.ring, x.a[i], y.a[i])) return false;
    return true;
}

// Cauchy product to the common precision. The generic path is schoolbook;
// Z/p^M expansions dispatch to the kernel convolutions.
template <class P>
QExp<P> qexp_mul(const QExp<P>& x, const QExp<P>& y, MulPath path = MulPath::Auto) {
    if (!(x.ring == y.ring)) throw std::invalid_argument("qexp_mul: ring mismatch");
    long Q = std::min(x.prec(), y.prec());
    QExp<P> r(x.ring, Q);
    for (long i = 0; i < Q; i++) {
        if (P::is_zero(x.ring, x.a[i])) continue;
        for (long j = 0; j + i < Q && j < y.prec(); j++) {
            if (P::is_zero(x.ring, y.a[j])) continue;
            r.a[i + j] = P::add(x.ring, r.a[i + j], P::mul(x.ring, x.a[i], y.a[j]));
        }
    }
    return r;
}

template <>
inline QExp<ZpmRing> qexp_mul<ZpmRing>(const QExp<ZpmRing>& x, const QExp<ZpmRing>& y,
                                       MulPath path) {
    if (!(x.ring == y.ring)) throw std::invalid_argument("qexp_mul: ring mismatch");
    long Q = std::min(x.prec(), y.prec());
    QExp<ZpmRing> r(x.ring, Q);
    switch (path) {
        case MulPath::Schoolbook:
            r.a = kernels::conv_schoolbook_omp(x.a, y.a, (size_t)Q, x.ring);
            break;
        case MulPath::Transform:
            r.a = kernels::conv_ntt(x.a, y.a, (size_t)Q, x.ring, true);
            break;
        default:
            r.a = kernels::conv_auto(x.a, y.a, (size_t)Q, x.ring);
    }
    return r;
}

// theta = q d/dq
template <class P>
QExp<P> theta_op(const QExp<P>& x) {
    QExp<P> r(x.ring, x.prec());
    for (long n = 0; n < x.prec(); n++)
        r.a[n] = P::mul(x.ring, P::from_long(x.ring, n), x.a[n]);
    return r;
}

// U_p: a_n <- a_{np}; precision ceil(Q/p)
template <class P>
QExp<P> u_op(const QExp<P>& x, long p) {
    long newQ = x.prec() / p + (x.prec() % p ? 1 : 0);
    QExp<P> r(x.ring, newQ);
    for (long n = 0; n < newQ; n++) r.a[n] = x.a[n * p];
    return r;
}

// V_p: q -> q^p; precision p*Q
template <class P>
QExp<P> v_op(const QExp<P>& x, long p) {
    QExp<P> r(x.ring, x.prec() * p);
    for (long n = 0; n < x.prec(); n++) r.a[n * p] = x.a[n];
    return r;
}

// (1 - V U): kills coefficients at indices divisible by p
template <class P>
QExp<P> deplete(const QExp<P>& x, long p) {
    QExp<P> r = x;
    for (long n = 0; n < x.prec(); n += p) r.a[n] = P::zero(x.ring);
    return r;
}

// T_ell on the expansion of a weight-w form with the supplied scalar
// eps(ell) ell^{w-1} (zero when ell divides the level); precision floor(Q/ell)
template <class P>
QExp<P> hecke_t(const QExp<P>& x, long ell, const typename P::Elem& eps_ell_w) {
    long newQ = x.prec() / ell;
    QExp<P> r(x.ring, newQ);
    for (long n = 0; n < newQ; n++) {
        r.a[n] = x.a[n * ell];
        if (n % ell == 0)
            r.a[n] = P::add(x.ring, r.a[n], P::mul(x.ring, eps_ell_w, x.a[n / ell]));
    }
    return r;
}

// power-series inverse (a_0 must be a unit)
template <class P>
QExp<P> qexp_inverse(const QExp<P>& x) {
    if (!P::is_unit(x.ring, x.a[0])) throw std::domain_error("qexp_inverse: a_0 not a unit");
    QExp<P> r(x.ring, x.prec());
    auto inv0 = P::inv(x.ring, x.a[0]);
    r.a[0] = inv0;
    for (long n = 1; n < x.prec(); n++) {
        auto acc = P::zero(x.ring);
        for (long k = 1; k <= n && k < x.prec(); k++)
            acc = P::add(x.ring, acc, P::mul(x.ring, x.a[k], r.a[n - k]));
        r.a[n] = P::neg(x.ring, P::mul(x.ring, inv0, acc));
    }
    return r;
}

template <class P>
QExp<P> qexp_pow(const QExp<P>& x, long e, MulPath path = MulPath::Auto) {
    if (e < 0) return qexp_pow(qexp_inverse(x), -e, path);
    QExp<P> r = QExp<P>::one(x.ring, x.prec());
    QExp<P> b = x;
    while (e) {
        if (e & 1) r = qexp_mul(r, b, path);
        b = qexp_mul(b, b, path);
        e >>= 1;
    }
    return r;
}

// Dedekind eta power products. exponents maps d -> r_d; the result is
// q^{(sum d r_d)/24} prod_d prod_{n>=1} (1-q^{dn})^{r_d}. The leading
// exponent must come out a non-negative integer.
template <class P>
QExp<P> eta_quotient(const typename P::Ring& R, const std::map<long, long>& exponents, long Q) {
    long s = 0;
    for (auto [d, r] : exponents) s += d * r;
    if (s % 24 != 0 || s < 0)
        throw std::domain_error("eta_quotient: leading exponent not a non-negative integer");
    long lead = s / 24;
    if (lead >= Q) return QExp<P>(R, Q);

    QExp<P> prod = QExp<P>::one(R, Q - lead);
    for (auto [d, r] : exponents) {
        if (r == 0) continue;
        // Euler product by pentagonal numbers: sparse in q^d
        QExp<P> E(R, Q - lead);
        E.a[0] = P::from_long(R, 1);
        for (long k = 1;; k++) {
            long g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
            bool any = false;
            long sgn = (k % 2) ? -1 : 1;
            if (d * g1 < Q - lead) {
                E.a[d * g1] = P::from_long(R, sgn);
                any = true;
            }
            if (d * g2 < Q - lead) {
                E.a[d * g2] = P::from_long(R, sgn);
                any = true;
            }
            if (!any) break;
        }
        prod = qexp_mul(prod, qexp_pow(E, r));
    }
    QExp<P> out(R, Q);
    for (long n = 0; n + lead < Q; n++) out.a[n + lead] = prod.a[n];
    return out;
}

// divisor-sum series: a_n = sum_{d d' = n} w(d, d'), a_0 supplied separately
template <class P, class W>
QExp<P> divisor_sum_series(const typename P::Ring& R, long Q, const typename P::Elem& a0,
                           W&& weight, bool parallel = true) {
    QExp<P> r(R, Q);
    if (Q > 0) r.a[0] = a0;
    auto visit = [&](long n, long d, long dp) {
        r.a[n] = P::add(R, r.a[n], weight(d, dp));
    };
    if (parallel)
        kernels::divisor_pairs_parallel(Q, visit);
    else
        kernels::divisor_pairs_serial(Q, visit);
    return r;
}

} // namespace rankin
