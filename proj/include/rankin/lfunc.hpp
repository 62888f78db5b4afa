#pragma once

#include <optional>

#include "rankin/modspace.hpp"

namespace rankin {

// outward-rounded interval arithmetic; all series tails pass through this
struct RealInterval {
    double lo = 0, hi = 0;

    RealInterval() = default;
    RealInterval(double l, double h) : lo(l), hi(h) {}
    static RealInterval point(double x) { return {x, x}; }
    static RealInterval from_rat(const Rat& x);
    static RealInterval pm(double x, double err) { return {x - err, x + err}; }

    double mid() const { return (lo + hi) / 2; }
    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool contains(const RealInterval& o) const { return lo <= o.lo && o.hi <= hi; }
};

RealInterval operator+(const RealInterval& a, const RealInterval& b);
RealInterval operator-(const RealInterval& a, const RealInterval& b);
RealInterval operator*(const RealInterval& a, const RealInterval& b);
RealInterval operator/(const RealInterval& a, const RealInterval& b);

// L(chi, s) with the Euler factors at the listed primes removed; rigorous
// tail bound by integral comparison. Real-valued characters only.
RealInterval dirichlet_L(const DirichletCharacter& chi, double s,
                         const std::vector<long>& removed_primes, double tol);

// ---- the Rankin convolution -----------------------------------------------

// integer Dirichlet coefficients of L(f x g, s) from the degree-4 local
// factors (the two quadratics paired root-by-root); entire for our use
struct RankinLData {
    Newform f, g;
    long k = 0, kp = 0;     // weights - 2
    long conductor = 1;     // (N_f N_g)^2 for coprime levels
    std::vector<Int> b;     // b_1 .. b_nmax
    std::vector<Int> cn;    // a_n(f) a_n(g), for the plain Dirichlet series
};
RankinLData rankin_l_data(const Newform& f, const Newform& g, long nmax);

// partial sums of the defining series sum a_n(f)a_n(g) n^{-s} divided by
// the normalizing Dirichlet L-value; valid for s > (k+k')/2 + 3 with the
// divisor-bound tail estimate
RealInterval rankin_series(const RankinLData& D, double s, long nmax, double tol);

// smoothed approximate functional equation. The epsilon-factor is solved
// against rankin_series at two points of the convergence region and the
// residual is reported; values carry a heuristic error estimate.
struct AfeEvaluator {
    RankinLData D;
    double epsilon = 0;        // solved sign/scale of the functional equation
    double eps_residual = 1;   // consistency defect at the second anchor
    bool reliable = false;
    double tol = 1e-10;

    // L(f x g, s) for real s
    struct Value {
        double value;
        double err; // heuristic
    };
    Value value(double s) const;

    // completed-Lambda building blocks
    double gamma_factor(double s) const;         // Q^{s/2} GammaC(s) GammaC(s-k'-1)
    double half_sum(double s, long* used = nullptr) const; // sum_n b_n psi_s(n)
};
AfeEvaluator make_afe(const RankinLData& D, double tol);

// Gamma(s) Gamma(s-k'-1) pi^{-(2s-k'-1)} 2^{-(2s+k-k')} (-1)^{(k-k')/2} L(f,g,s)
// as a real interval; this is the pair-independent-period part of the
// interpolation formula at integer s
RealInterval interpolation_real_part(const RankinLData& D, const AfeEvaluator& A, long s);

// ratio of interpolation factors at two critical points; the Euler factors
// at p are tracked exactly in Q(alpha_f)
struct CriticalRatio {
    NumberField K;       // Q(alpha_f): x^2 - a_p x + eps(p) p^{k+1}
    NFElem euler_ratio;  // E(f,g,s1)/E(f,g,s2) in K (alpha_f = class of x)
    bool euler_rational = false;
    Rat euler_ratio_rat;       // set when rational
    RealInterval analytic_ratio; // Gamma/pi/2-normalized L(s1)/L(s2) part
    std::optional<RealInterval> full; // set when euler_rational
};
CriticalRatio critical_ratio(const RankinLData& D, const AfeEvaluator& A, long s1, long s2,
                             long p);

} // namespace rankin
