#pragma once

#include "rankin/eisenstein.hpp"
#include "rankin/kernels.hpp"
#include "rankin/lfunc.hpp"
#include "rankin/modspace.hpp"

namespace rankin {

// U_p as a matrix on a level-Np space (columns = images of basis rows);
// consistency of the solve against direct u_op is part of the construction
kernels::Mat up_matrix(const ModFormSpace<ZpmRing>& sp);

// e_ord as an exact idempotent polynomial in U over Z/p^M
struct OrdinaryProjector {
    Zpm R;
    kernels::Mat U;
    kernels::Poly charpoly;    // det(xI - U), constant first
    kernels::Poly nonunit_part; // w: w ≡ x^a mod p
    kernels::Poly unit_part;    // u: unit roots
    kernels::Poly idempotent;   // h with h(U) = e_ord
    size_t ord_rank = 0;

    std::vector<uint64_t> apply(const std::vector<uint64_t>& v) const {
        return kernels::poly_eval_matvec(idempotent, U, v, R);
    }
};
OrdinaryProjector ordinary_projector(const kernels::Mat& U, const Zpm& R);

// Projection of (the coordinates of) Phi onto the U_p = alpha line of the
// eigensystem of f, normalized so the stabilized f itself maps to 1. The
// competing eigensystems are removed by cofactor polynomials of the probe
// Hecke matrices on the ordinary part; an eigenvalue collision mod p is
// fatal and reported through `precision_loss`.
struct IsotypicResult {
    uint64_t c = 0;           // the coefficient (a_1 of the projected line)
    unsigned precision_loss = 0;
    std::vector<uint64_t> residual_coords; // projection minus c * f_alpha (diagnostic)
    uint64_t residual_maxval = 0;          // max |.| of residual q-expansion window
};
IsotypicResult isotypic_coefficient(const ModFormSpace<ZpmRing>& sp,
                                    const OrdinaryProjector& e_ord,
                                    const std::vector<uint64_t>& phi_coords,
                                    const Newform& f, const PadicNum& alpha_f,
                                    const std::vector<long>& probes);

// ---- the p-adic Rankin value at the classical point s = k'+2 ----------------

struct PadicRankinResult {
    long s = 0;               // k'+2
    long level_Np = 0;
    long space_dim = 0, ord_rank = 0;
    PadicNum raw;             // isotypic coefficient c (after dividing by alpha for the U-shift)
    PadicNum P;               // N^{k-k'-2} c E(f) / (G(eps_f^{-1}) E(f,g,s)): the
                              // calibration-ready p-adic number (kappa_f * P = R / <f,f>)
    PadicNum lp_unnormalized; // N^{k-k'-2} c / (G E*(f)): L_p up to the unit u_f
    EulerFactors euler;
    std::vector<std::string> notes;
};
PadicRankinResult padic_rankin_classical(const Newform& f, const Newform& g, long p,
                                         unsigned M, long extra_B = 0);

// ---- calibration of the unknown unit u_f -------------------------------------

struct CalibrationPair {
    Newform g;
    PadicRankinResult padic;
    RealInterval R; // complex interpolation part at s = k'+2
};

struct CalibrationReport {
    bool verified = false;
    Rat ratio_reconstructed;   // P_2 / P_1 as a rational
    RealInterval ratio_complex; // R_2 / R_1
    double relative_defect = 0;
    std::string failure;
    // the reported u_f: complex interval over p-adic value (the Petersson
    // normalization is absorbed here and cancels in all predictions)
    RealInterval u_f_numerator;
    PadicNum u_f_denominator;
    RealInterval predicted_R2; // R_1 * reconstructed ratio
};
CalibrationReport calibrate(const CalibrationPair& pair1, const CalibrationPair& pair2,
                            double rel_tol);

} // namespace rankin
