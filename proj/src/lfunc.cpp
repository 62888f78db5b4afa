#include "rankin/lfunc.hpp"

#include <cfloat>
#include <cmath>
#include <numeric>

namespace rankin {

namespace {
double up(double x) { return std::nextafter(x, DBL_MAX); }
double down(double x) { return std::nextafter(x, -DBL_MAX); }
} // namespace

RealInterval RealInterval::from_rat(const Rat& x) {
    double d = num(x).convert_to<double>() / den(x).convert_to<double>();
    // two ulps of slack on both sides cover the conversion
    return {down(down(d)), up(up(d))};
}

RealInterval operator+(const RealInterval& a, const RealInterval& b) {
    return {down(a.lo + b.lo), up(a.hi + b.hi)};
}
RealInterval operator-(const RealInterval& a, const RealInterval& b) {
    return {down(a.lo - b.hi), up(a.hi - b.lo)};
}
RealInterval operator*(const RealInterval& a, const RealInterval& b) {
    double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    double lo = c[0], hi = c[0];
    for (double x : c) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return {down(lo), up(hi)};
}
RealInterval operator/(const RealInterval& a, const RealInterval& b) {
    if (b.lo <= 0 && b.hi >= 0) throw std::domain_error("interval division by zero");
    double c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    double lo = c[0], hi = c[0];
    for (double x : c) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return {down(lo), up(hi)};
}

RealInterval dirichlet_L(const DirichletCharacter& chi, double s,
                         const std::vector<long>& removed_primes, double tol) {
    if (s <= 1) throw std::domain_error("dirichlet_L: s > 1 required");
    if (chi.order() > 2) throw std::domain_error("dirichlet_L: real characters only");
    // choose T so the integral tail bound T^{1-s}/(s-1) < tol/2
    double T = std::pow(tol / 2 * (s - 1), 1.0 / (1 - s));
    long N = std::max<long>(64, (long)T + 1);
    RealInterval acc(0, 0);
    for (long n = 1; n <= N; n++) {
        bool skip = false;
        for (long p : removed_primes)
            if (n % p == 0) skip = true;
        if (skip) continue;
        long kexp;
        if (!chi.value_exponent(n, kexp)) continue;
        double c = (kexp == 0) ? 1.0 : -1.0;
        double t = c * std::pow((double)n, -s);
        acc = acc + RealInterval{down(t), up(t)};
    }
    double tail = std::pow((double)N, 1 - s) / (s - 1);
    return acc + RealInterval{-up(tail), up(tail)};
}

// ---- Rankin coefficients ------------------------------------------------------

RankinLData rankin_l_data(const Newform& f, const Newform& g, long nmax) {
    RankinLData D;
    D.f = f;
    D.g = g;
    D.k = f.weight - 2;
    D.kp = g.weight - 2;
    if (std::gcd(f.level, g.level) != 1)
        throw std::domain_error("rankin_l_data: coprime levels required");
    D.conductor = f.level * g.level * f.level * g.level;

    auto af = extend_coefficients_rat(f, nmax);
    auto ag = extend_coefficients_rat(g, nmax);
    D.cn.assign((size_t)nmax + 1, Int(0));
    for (long n = 1; n <= nmax; n++) {
        Rat c = af[n] * ag[n];
        if (den(c) != 1) throw std::domain_error("rankin_l_data: non-integral coefficients");
        D.cn[n] = num(c);
    }

    // multiplicative b_n from the quartic local factors
    D.b.assign((size_t)nmax + 1, Int(0));
    D.b[1] = 1;
    std::vector<long> primes;
    for (long p = 2; p <= nmax; p++) {
        bool isp = true;
        for (long d = 2; d * d <= p; d++)
            if (p % d == 0) isp = false;
        if (isp) primes.push_back(p);
    }
    std::vector<Int> bp((size_t)nmax + 1, Int(0)); // scratch per prime power
    for (long p : primes) {
        Rat apf = af[p], apg = ag[p];
        Rat cfr(0), cgr(0);
        if (f.level % p != 0) {
            Rat e(1);
            f.eps.value(p).is_rational(&e);
            cfr = e * Rat(pow_int(p, (unsigned long)(f.weight - 1)));
        }
        if (g.level % p != 0) {
            Rat e(1);
            g.eps.value(p).is_rational(&e);
            cgr = e * Rat(pow_int(p, (unsigned long)(g.weight - 1)));
        }
        // 1/L_p(X) coefficients: L_p = 1 - e1 X + e2 X^2 - e3 X^3 + e4 X^4
        Rat e1 = apf * apg;
        Rat e2 = cgr * apf * apf + cfr * apg * apg - 2 * cfr * cgr;
        Rat e3 = cfr * cgr * apf * apg;
        Rat e4 = cfr * cfr * cgr * cgr;
        std::vector<Rat> bq = {Rat(1)};
        for (long q = p; q <= nmax; q *= p) {
            size_t m = bq.size();
            Rat nxt = e1 * bq[m - 1];
            if (m >= 2) nxt -= e2 * bq[m - 2];
            if (m >= 3) nxt += e3 * bq[m - 3];
            if (m >= 4) nxt -= e4 * bq[m - 4];
            bq.push_back(nxt);
            if (q > nmax / p) break;
        }
        long e = 0;
        for (long q = p; q <= nmax; q *= p) {
            e++;
            if (den(bq[e]) != 1)
                throw std::logic_error("rankin_l_data: non-integral local coefficient");
            bp[q] = num(bq[e]);
            if (q > nmax / p) break;
        }
    }
    // assemble multiplicatively
    for (long n = 2; n <= nmax; n++) {
        long m = n, p = 0;
        for (long d = 2; d * d <= m; d++)
            if (m % d == 0) {
                p = d;
                break;
            }
        if (p == 0) {
            D.b[n] = bp[n];
            continue;
        }
        long q = 1;
        while (m % p == 0) {
            m /= p;
            q *= p;
        }
        D.b[n] = (m == 1) ? bp[q] : bp[q] * D.b[m];
    }
    return D;
}

RealInterval rankin_series(const RankinLData& D, double s, long nmax, double tol) {
    double margin = s - ((double)(D.k + D.kp) / 2 + 2);
    if (margin < 1) throw std::domain_error("rankin_series: convergence margin < 1 required");
    if (nmax >= (long)D.cn.size()) nmax = (long)D.cn.size() - 1;

    RealInterval num(0, 0);
    for (long n = 1; n <= nmax; n++) {
        if (D.cn[n] == 0) continue;
        RealInterval c = RealInterval::from_rat(Rat(D.cn[n]));
        double t = std::pow((double)n, -s);
        num = num + c * RealInterval{down(t), up(t)};
    }
    // |a_n(f) a_n(g)| <= d(n)^2 n^{(k+k')/2+1} <= 4 n^{(k+k')/2+2}
    double ex = (double)(D.k + D.kp) / 2 + 2 - s; // < -1
    double tail = 4 * std::pow((double)nmax, ex + 1) / (-(ex + 1));
    num = num + RealInterval{-up(tail), up(tail)};

    // normalizing Dirichlet L at 2s + 2 - (k+2) - (k'+2)
    DirichletCharacter prod(1); // trivial for trivial-character pairs
    if (!D.f.eps.is_trivial() || !D.g.eps.is_trivial())
        throw std::domain_error("rankin_series: nontrivial characters not supported");
    std::vector<long> removed;
    long NN = D.f.level * D.g.level;
    for (long p = 2; p <= NN; p++)
        if (NN % p == 0) {
            bool isp = true;
            for (long d = 2; d * d <= p; d++)
                if (p % d == 0) isp = false;
            if (isp) removed.push_back(p);
        }
    RealInterval Lnorm = dirichlet_L(prod, 2 * s - 2 - D.k - D.kp, removed, tol);
    return num / Lnorm;
}

// ---- approximate functional equation ------------------------------------------

namespace {

// I(sigma, x) = int_x^infty t^{sigma-1} K_a(2 sqrt(t)) dt by composite
// Simpson with geometric panels; integrand decays like exp(-2 sqrt(t))
double incomplete_bessel(double sigma, long a, double x) {
    auto f = [&](double t) {
        if (t <= 0) return 0.0;
        double val = std::cyl_bessel_k((double)a, 2 * std::sqrt(t));
        return std::pow(t, sigma - 1) * val;
    };
    // upper cutoff: K_a(2 sqrt t) ~ exp(-2 sqrt t); stop near 1e-24 relative
    double T = x;
    double big = std::max(4.0, x);
    while (2 * std::sqrt(big) < 60 + std::abs(sigma) * std::log(std::max(4.0, big)))
        big *= 1.5;
    double acc = 0;
    double lo = T;
    while (lo < big) {
        double hi = std::max(lo * 1.25, lo + 0.25);
        if (hi > big) hi = big;
        // Simpson on [lo, hi] with 16 panels
        int m = 16;
        double h = (hi - lo) / m;
        double ssum = f(lo) + f(hi);
        for (int i = 1; i < m; i++) ssum += f(lo + i * h) * (i % 2 ? 4 : 2);
        acc += ssum * h / 3;
        lo = hi;
    }
    return acc;
}

} // namespace

double AfeEvaluator::gamma_factor(double s) const {
    long a = D.kp + 1;
    double Q = (double)D.conductor;
    // Q^{s/2} GammaC(s) GammaC(s-a), GammaC(z) = 2 (2pi)^{-z} Gamma(z)
    return std::pow(Q, s / 2) * 4 * std::pow(2 * M_PI, -(2 * s - a)) * std::tgamma(s) *
           std::tgamma(s - a);
}

double AfeEvaluator::half_sum(double s, long* used) const {
    long a = D.kp + 1;
    double A = std::sqrt((double)D.conductor) / (4 * M_PI * M_PI);
    double C = 4 * std::pow(2 * M_PI, (double)a);
    double acc = 0;
    long n = 1;
    long lastn = 0;
    int small_run = 0;
    for (; n < (long)D.b.size(); n++) {
        if (D.b[n] == 0) continue;
        double psi = 2 * C * std::pow(A, s) * std::pow((double)n, -s) *
                     incomplete_bessel(s - (double)a / 2, a, (double)n / A);
        double term = D.b[n].convert_to<double>() * psi;
        acc += term;
        lastn = n;
        if (std::abs(term) < tol * 1e-3 && n >= 32) {
            if (++small_run >= 4) break;
        } else
            small_run = 0;
    }
    if (used) *used = lastn;
    return acc;
}

AfeEvaluator make_afe(const RankinLData& D, double tol) {
    AfeEvaluator A;
    A.D = D;
    A.tol = tol;
    double wtilde = (double)(D.k + D.kp + 3);
    // two anchors inside the convergence region
    double s0 = (double)(D.k + D.kp) / 2 + 3.25, s1 = s0 + 1;
    long nmax = (long)D.cn.size() - 1;
    RealInterval L0 = rankin_series(D, s0, nmax, tol * 1e-2);
    RealInterval L1 = rankin_series(D, s1, nmax, tol * 1e-2);
    double S10 = A.half_sum(s0), S20 = A.half_sum(wtilde - s0);
    double S11 = A.half_sum(s1), S21 = A.half_sum(wtilde - s1);
    double Lam0 = A.gamma_factor(s0) * L0.mid();
    double Lam1 = A.gamma_factor(s1) * L1.mid();
    A.epsilon = (Lam0 - S10) / S20;
    double pred1 = S11 + A.epsilon * S21;
    A.eps_residual = std::abs(pred1 - Lam1) / std::max(1e-300, std::abs(Lam1));
    A.reliable = A.eps_residual < 1e-4;
    return A;
}

AfeEvaluator::Value AfeEvaluator::value(double s) const {
    if (!reliable)
        throw std::domain_error("afe_value: epsilon solve unreliable for this pair");
    double wtilde = (double)(D.k + D.kp + 3);
    double Lam = half_sum(s) + epsilon * half_sum(wtilde - s);
    double g = gamma_factor(s);
    double v = Lam / g;
    // heuristic error: residual-scaled plus coefficient truncation slack
    double err = std::abs(v) * std::max(eps_residual * 10, 1e-12) + tol;
    return {v, err};
}

RealInterval interpolation_real_part(const RankinLData& D, const AfeEvaluator& A, long s) {
    long k = D.k, kp = D.kp;
    if ((k - kp) % 2 != 0)
        throw std::domain_error("interpolation_real_part: k - k' must be even");
    auto v = A.value((double)s);
    RealInterval L = RealInterval::pm(v.value, v.err);
    // Gamma(s) Gamma(s-k'-1) 2^{-(2s+k-k')} (-1)^{(k-k')/2} as exact rational
    Rat c = Rat(factorial(s - 1)) * Rat(factorial(s - kp - 2));
    long twoexp = 2 * s + k - kp;
    c /= Rat(pow_int(2, (unsigned long)twoexp));
    if (((k - kp) / 2) % 2 != 0) c = -c;
    double pip = std::pow(M_PI, -(double)(2 * s - kp - 1));
    return RealInterval::from_rat(c) * RealInterval{down(pip), up(pip)} * L;
}

CriticalRatio critical_ratio(const RankinLData& D, const AfeEvaluator& A, long s1, long s2,
                             long p) {
    long k = D.k, kp = D.kp;
    if (s1 < kp + 2 || s1 > k + 1 || s2 < kp + 2 || s2 > k + 1)
        throw std::domain_error("critical_ratio: s outside the critical range");
    CriticalRatio out;
    // K = Q(alpha_f), alpha_f the class of x
    Rat apf = D.f.ap_rat(p), cf;
    {
        Rat e(1);
        D.f.eps.value(p).is_rational(&e);
        cf = e * Rat(pow_int(p, (unsigned long)(D.f.weight - 1)));
    }
    out.K.minpoly = {cf, -apf, Rat(1)};
    Rat apg = D.g.ap_rat(p), cg;
    {
        Rat e(1);
        D.g.eps.value(p).is_rational(&e);
        cg = e * Rat(pow_int(p, (unsigned long)(D.g.weight - 1)));
    }
    auto Efgs = [&](long s) -> NFElem {
        // (1 - u a_g/c_g + u^2/c_g)(1 - v a_g + v^2 c_g), u = p^{s-1}/alpha,
        // v = beta/p^s = (a_f - alpha)/p^s; alpha = class of x
        NFElem alpha = {Rat(0), Rat(1)};
        // 1/alpha = (a_f - alpha)/c_f
        NFElem alpha_inv = {apf / cf, Rat(-1) / cf};
        Rat ps1 = Rat(pow_int(p, (unsigned long)(s - 1)));
        NFElem u = {alpha_inv[0] * ps1, alpha_inv[1] * ps1};
        NFElem one = nf_from_rat(out.K, 1);
        NFElem t1 = nf_sub(out.K, one, nf_mul(out.K, u, nf_from_rat(out.K, apg / cg)));
        t1 = nf_add(out.K, t1, nf_mul(out.K, nf_mul(out.K, u, u), nf_from_rat(out.K, 1 / cg)));
        NFElem beta = nf_sub(out.K, nf_from_rat(out.K, apf), alpha);
        Rat psi = Rat(1) / Rat(pow_int(p, (unsigned long)s));
        NFElem v = {beta[0] * psi, beta[1] * psi};
        NFElem t2 = nf_sub(out.K, one, nf_mul(out.K, v, nf_from_rat(out.K, apg)));
        t2 = nf_add(out.K, t2, nf_mul(out.K, nf_mul(out.K, v, v), nf_from_rat(out.K, cg)));
        return nf_mul(out.K, t1, t2);
    };
    NFElem E1 = Efgs(s1), E2 = Efgs(s2);
    // ratio E1/E2 in K: solve E2 * x = E1
    // represent mult-by-E2 as 2x2 over Q
    {
        NFElem e2x = nf_mul(out.K, E2, NFElem{Rat(0), Rat(1)});
        // columns: E2*1, E2*x
        Rat M00 = E2[0], M10 = E2[1], M01 = e2x[0], M11 = e2x[1];
        Rat det = M00 * M11 - M01 * M10;
        if (det == 0) throw std::domain_error("critical_ratio: E(f,g,s2) not invertible");
        out.euler_ratio = {(M11 * E1[0] - M01 * E1[1]) / det,
                           (-M10 * E1[0] + M00 * E1[1]) / det};
    }
    out.euler_rational = nf_is_rational(out.euler_ratio, &out.euler_ratio_rat);
    out.analytic_ratio =
        interpolation_real_part(D, A, s1) / interpolation_real_part(D, A, s2);
    if (out.euler_rational)
        out.full = RealInterval::from_rat(out.euler_ratio_rat) * out.analytic_ratio;
    return out;
}

} // namespace rankin
