#pragma once

#include "rankin/eisenstein.hpp"
#include "rankin/hida.hpp"
#include "rankin/modspace.hpp"
#include "rankin/tsym.hpp"

namespace rankin {

// polynomials P(T) with P(0) = 1, rational coefficients, constant first
using FpPoly = std::vector<Rat>;

// (prod (1-a_i T)) * (prod (1-b_j T)) -> prod (1-a_i b_j T), computed as a
// resultant without extracting roots
FpPoly fp_star(const FpPoly& P, const FpPoly& Q);

// bivariate polynomials c[i][j] <-> X^i Y^j
using BiPoly = std::vector<std::vector<Rat>>;
BiPoly bipoly_from_uni_in_X(const FpPoly& P);
Rat bipoly_eval(const BiPoly& f, const Rat& x, const Rat& y);

// the explicit choice a(X,Y) = 1, b(X,Y) = (P(XY) - P(X))/(1-Y); the
// identity P(XY) = a P(X) + b (1-Y) holds symbolically
struct ABDecomposition {
    BiPoly a, b;
};
ABDecomposition decompose_ab(const FpPoly& P);

// c(X,Y) = (P_g(XY) - Y P_g(X))/(1-Y) for the Hecke polynomial data of g
// at p: a_g = alpha+beta, c_g = alpha*beta. Both the division route and
// the closed form 1 - p^{2+2j} X^2 Y / c_g are returned; they are asserted
// symbolically equal.
struct CPolynomial {
    BiPoly division_route;
    BiPoly closed_form;
    bool equal = false;
};
CPolynomial c_polynomial(const Rat& a_g, const Rat& c_g, long j, long p);

// ---- the power-series lemma -------------------------------------------------
//
//   A (1-VU)B = (1 - l n V + m n^2 V^2)(A B) + (1-VU)[m V^2(A) B - A V(B)]
// under U A = l A - m V A and U B = n B. Hypotheses are verified first.

struct PsLemmaReport {
    bool hypotheses_ok = false;
    bool identity_ok = false;
    long checked_prec = 0;
    long first_mismatch = -1;
    std::string note;
};

template <class P>
PsLemmaReport power_series_identity_check(const QExp<P>& A, const typename P::Elem& lam,
                                          const typename P::Elem& mu, const QExp<P>& B,
                                          const typename P::Elem& nu, long p) {
    PsLemmaReport rep;
    const auto& R = A.ring;
    // hypothesis: U A = lam A - mu V A
    {
        auto lhs = u_op(A, p);
        auto rhs = qexp_sub(qexp_scal(A, lam), qexp_scal(v_op(A, p), mu));
        if (!qexp_eq(lhs, rhs)) {
            rep.note = "hypothesis U A = lam A - mu V A fails";
            return rep;
        }
    }
    {
        auto lhs = u_op(B, p);
        auto rhs = qexp_scal(B, nu);
        if (!qexp_eq(lhs, rhs)) {
            rep.note = "hypothesis U B = nu B fails";
            return rep;
        }
    }
    rep.hypotheses_ok = true;

    auto depl = [&](const QExp<P>& x) { return deplete(x, p); };
    auto AB = qexp_mul(A, B);
    // (1 - l n V + m n^2 V^2)(A B)
    auto t1 = AB;
    t1 = qexp_sub(t1, qexp_scal(v_op(AB, p), P::mul(R, lam, nu)));
    t1 = qexp_add(t1, qexp_scal(v_op(v_op(AB, p), p), P::mul(R, mu, P::mul(R, nu, nu))));
    // (1-VU)[m V^2(A) B - A V(B)]
    auto inner = qexp_sub(qexp_scal(qexp_mul(v_op(v_op(A, p), p), B), mu),
                          qexp_mul(A, v_op(B, p)));
    auto rhs = qexp_add(t1, depl(inner));
    auto lhs = qexp_mul(A, depl(B));
    long W = std::min(lhs.prec(), rhs.prec());
    rep.checked_prec = W;
    for (long n = 0; n < W; n++)
        if (!P::eq(R, lhs.a[n], rhs.a[n])) {
            rep.first_mismatch = n;
            rep.identity_ok = false;
            return rep;
        }
    rep.identity_ok = true;
    return rep;
}

// ---- unit-root splitting ------------------------------------------------------

// The collapse of CG(alpha_rig) against g: all terms die except i = k-j,
// and the scalar prefactor -N^{k+k'-2j} (-1)^{k'-j-1} (k')! C(k,j) comes
// out of the trilinear coefficients; it is produced here, not hard-coded.
struct SplurResult {
    QExp<CycZpmRing> series; // the full p-adic modular form (prefactor included)
    Rat prefactor;           // scalar produced through the CG path (without the Gauss sum)
    Rat closed_form;         // -N^{k+k'-2j} (-1)^{k'-j-1} (k')! C(k,j)
    bool terms_vanish = true; // all alpha_rig components other than i = k-j collapsed
};
SplurResult splur_product(const Newform& g, long k, long kp, long j, long b, long N,
                          const Zpm& zp, long Q);

// full regulator pairing value from its factors
PadicNum regulator_value(const Newform& f, const Newform& g, long j, long p,
                         const PadicNum& lp_value, unsigned M);

// ---- two-route consistency mod p ---------------------------------------------

struct TwoRouteLine {
    std::map<long, uint64_t> eigen; // probe eigenvalues mod p of the f-line
    uint64_t ap_f = 0;              // unit U_p eigenvalue mod p
    PadicNum value_A, value_B;
    bool agree = false;
};

struct TwoRouteReport {
    bool testable = false;
    std::string untestable_reason;
    bool passed = false;
    long base_weight = 0;  // Eisenstein surrogate base weight
    long big_weight = 0;   // weight of the classical mod-p space used
    long space_dim = 0, ord_rank = 0;
    std::vector<TwoRouteLine> lines;
    std::vector<std::string> notes;
};

TwoRouteReport regulator_two_route_check(long k, const Newform& g, long j, long p);

// ---- exact constants -----------------------------------------------------------

// leading-term constant (-1)^{k'-j+1} * 4/(Nf Ng) * (k-j)!(k'-j)!/(k! k'!)
Rat beilinson_constant(long k, long kp, long j, long Neps_f, long Neps_g);

// 4^{-1} (-1)^{k'+1} Gamma(j+1) Gamma(j-k')^*  with
// Gamma(j-k')^* = (-1)^{k'-j}/(k'-j)!
Rat perrin_riou_factor(long kp, long j);

// symbolic audit of the Euler-factor determinant identity and the constant
// bookkeeping that assembles the two theorems
bool euler_factor_identity_check(long k, long kp, long j, long N1, long N2,
                                 const Rat& alpha_f, const Rat& beta_f, const Rat& alpha_g,
                                 const Rat& beta_g, const Rat& p);

} // namespace rankin
