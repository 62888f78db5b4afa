#include "rankin/hida.hpp"

#include <numeric>
#include <sstream>

namespace rankin {

using kernels::Mat;
using kernels::Poly;

kernels::Mat up_matrix(const ModFormSpace<ZpmRing>& sp) {
    long p = (long)sp.ring.p;
    if (sp.level % p != 0)
        throw std::domain_error("up_matrix: space level must be divisible by p");
    auto M = hecke_matrix(sp, p); // U_p: ell | level, no second term
    // consistency: matrix-predicted expansions match direct u_op on a basis row
    for (size_t j = 0; j < sp.basis.size(); j += std::max<size_t>(1, sp.basis.size() / 3)) {
        auto direct = u_op(sp.basis[j], p);
        std::vector<uint64_t> coords(sp.dim());
        for (long i = 0; i < sp.dim(); i++) coords[i] = M[i][j];
        auto comb = sp.combine(coords);
        long W = std::min<long>(direct.prec(), sp.B);
        for (long n = 0; n < W; n++)
            if (direct.a[n] != comb.a[n])
                throw SpanNotClosed("up_matrix: matrix/expansion mismatch");
    }
    return M;
}

OrdinaryProjector ordinary_projector(const kernels::Mat& U, const Zpm& R) {
    OrdinaryProjector P;
    P.R = R;
    P.U = U;
    P.charpoly = kernels::charpoly_berkowitz(U, R);
    auto [w, u] = kernels::hensel_split_unit_part(P.charpoly, R);
    P.nonunit_part = w;
    P.unit_part = u;
    P.ord_rank = u.size() - 1;
    if (P.ord_rank == 0) throw std::domain_error("ordinary_projector: ordinary part is zero");
    if (w.size() == 1) {
        // everything ordinary: e_ord = 1
        P.idempotent = {1 % R.q};
        return P;
    }
    // h = w * (w^{-1} mod u): h ≡ 0 mod w, h ≡ 1 mod u
    Poly winv = kernels::poly_inv_mod(w, u, R);
    Poly h = kernels::poly_mul(w, winv, R);
    h = kernels::poly_mod(h, P.charpoly, R);
    // idempotency audit mod the characteristic polynomial
    Poly h2 = kernels::poly_mod(kernels::poly_mul(h, h, R), P.charpoly, R);
    kernels::poly_trim(h2);
    Poly hh = h;
    kernels::poly_trim(hh);
    if (h2 != hh) throw std::logic_error("ordinary_projector: idempotent check failed");
    P.idempotent = h;
    return P;
}

namespace {

// chi(x + a) by synthetic shifts; returns coefficients constant-first
Poly poly_shift(const Poly& chi, uint64_t a, const Zpm& R) {
    Poly c = chi;
    size_t n = c.size();
    // repeated synthetic division by (x - a): Taylor coefficients at a
    Poly out(n, 0);
    Poly cur = c;
    for (size_t i = 0; i < n; i++) {
        // divide cur by (x - a): remainder is cur(a)
        uint64_t rem = 0;
        for (size_t j = cur.size(); j-- > 0;) {
            uint64_t t = R.add(cur[j], R.mul(rem, a));
            cur[j] = rem;
            rem = t;
        }
        out[i] = rem;
        // cur now holds the quotient shifted up by one; drop leading slot
        if (!cur.empty()) cur.erase(cur.begin());
        if (cur.empty()) {
            for (size_t j = i + 1; j < n; j++) out[j] = 0;
            break;
        }
    }
    return out;
}

} // namespace

IsotypicResult isotypic_coefficient(const ModFormSpace<ZpmRing>& sp,
                                    const OrdinaryProjector& e_ord,
                                    const std::vector<uint64_t>& phi_coords,
                                    const Newform& f, const PadicNum& alpha_f,
                                    const std::vector<long>& probes) {
    const Zpm& R = sp.ring;
    IsotypicResult out;
    auto v = e_ord.apply(phi_coords);

    // restrict each probe operator to the ordinary image: cheaper and the
    // cofactor polynomials stay small. Ordinary image basis:
    kernels::EchelonBasis ord_basis((size_t)sp.dim(), R);
    for (long j = 0; j < sp.dim(); j++) {
        std::vector<uint64_t> e(sp.dim(), 0);
        e[j] = 1;
        ord_basis.add_row(e_ord.apply(e));
    }
    size_t r = ord_basis.rank();

    // coordinates of v in the ordinary basis
    std::vector<uint64_t> vo;
    if (!ord_basis.solve(v, vo))
        throw std::logic_error("isotypic_coefficient: e_ord image not in its own span");

    // probe operators restricted to the ordinary basis
    for (long ell : probes) {
        if (sp.level % ell == 0) continue;
        auto Tfull = hecke_matrix(sp, ell);
        Mat Tres(r, std::vector<uint64_t>(r, 0));
        for (size_t j = 0; j < r; j++) {
            auto img = kernels::mat_vec(Tfull, ord_basis.rows()[j], R);
            std::vector<uint64_t> c;
            if (!ord_basis.solve(img, c))
                throw SpanNotClosed("isotypic_coefficient: ordinary part not T_ell stable");
            for (size_t i = 0; i < r; i++) Tres[i][j] = c[i];
        }
        Poly chi = kernels::charpoly_berkowitz(Tres, R);
        uint64_t a = ZpmRing::from_rat(R, f.ap_rat(ell));
        Poly sh = poly_shift(chi, a, R);
        // multiplicity = first index with a unit coefficient
        size_t m = 0;
        while (m < sh.size() && sh[m] % R.p == 0) m++;
        if (m == sh.size())
            throw std::domain_error("isotypic_coefficient: probe charpoly vanishes mod p");
        if (m == 0) {
            // a_ell(f) is not an eigenvalue of the ordinary part: projection kills v
            // (this happens when f itself is not in the space; treat as fatal)
            throw std::domain_error("isotypic_coefficient: f eigensystem absent at T_" +
                                    std::to_string(ell));
        }
        // psi = chi / (x - a)^m: coefficients of sh shifted down by m, then
        // unshifted back to x; evaluate via the shifted form directly:
        // psi(T) = prod ... easier: psi(x+a) = sum_{i>=m} sh[i] x^{i-m}
        Poly psi_sh(sh.begin() + m, sh.end());
        uint64_t psi_at_a = psi_sh[0]; // psi(a)
        if (!R.is_unit(psi_at_a)) {
            // competing eigensystem congruent to f mod p
            unsigned loss = R.val(psi_at_a);
            out.precision_loss += loss;
            throw std::domain_error(
                "isotypic_coefficient: eigenvalue collision mod p at T_" + std::to_string(ell) +
                " (loss " + std::to_string(loss) + " digits); calibration unreliable");
        }
        // apply psi(Tres) to vo: psi(x) = psi_sh(x - a)
        // evaluate via Horner in (Tres - a I)
        Mat S = Tres;
        for (size_t i = 0; i < r; i++) S[i][i] = R.sub(S[i][i], a);
        std::vector<uint64_t> acc(r, 0);
        for (size_t i = psi_sh.size(); i-- > 0;) {
            acc = kernels::mat_vec(S, acc, R);
            for (size_t t = 0; t < r; t++) acc[t] = R.add(acc[t], R.mul(psi_sh[i], vo[t]));
        }
        uint64_t inv = R.inv(psi_at_a);
        for (size_t t = 0; t < r; t++) acc[t] = R.mul(inv, acc[t]);
        vo = acc;
    }

    // back to space coordinates and read a_1
    std::vector<uint64_t> vs(sp.dim(), 0);
    for (size_t j = 0; j < r; j++)
        for (long i = 0; i < sp.dim(); i++)
            vs[i] = R.add(vs[i], R.mul(vo[j], ord_basis.rows()[j][i]));
    auto expn = sp.combine(vs);
    out.c = expn.a[1];

    // diagnostic: subtract c * (stabilized f) and the V_d twins
    {
        long p = (long)R.p;
        auto falpha = p_stabilize(f, R, alpha_f, sp.Bstore);
        QExp<ZpmRing> resid = expn;
        for (long n = 0; n < resid.prec() && n < falpha.prec(); n++)
            resid.a[n] = R.sub(resid.a[n], R.mul(out.c, falpha.a[n]));
        // twins f_alpha(q^d) for d | level/(N_f p), d > 1: strip greedily by
        // matching the leading coefficient at q^d
        long Ntame = sp.level / p;
        for (long d = 2; d * f.level <= Ntame; d++) {
            if (Ntame % (d * f.level) != 0) continue;
            if (d >= resid.prec()) break;
            uint64_t cd = resid.a[d];
            if (cd == 0) continue;
            auto twin = v_op(falpha, d);
            for (long n = 0; n < resid.prec() && n < twin.prec(); n++)
                resid.a[n] = R.sub(resid.a[n], R.mul(cd, twin.a[n]));
        }
        uint64_t mx = 0;
        for (long n = 0; n < std::min<long>(resid.prec(), sp.B); n++) {
            uint64_t m = resid.a[n];
            mx = std::max(mx, std::min(m, R.q - m == R.q ? 0 : R.q - m));
        }
        out.residual_maxval = mx;
        out.residual_coords = vs;
    }
    return out;
}

PadicRankinResult padic_rankin_classical(const Newform& f, const Newform& g, long p,
                                         unsigned M, long extra_B) {
    PadicRankinResult out;
    long k = f.weight - 2, kp = g.weight - 2;
    if (k < kp + 2) throw std::domain_error("padic_rankin_classical: k >= k'+2 required");
    if ((f.level * g.level) % p == 0)
        throw std::domain_error("padic_rankin_classical: p must not divide the levels");
    out.s = kp + 2;
    long N = std::lcm(f.level, g.level);
    long level = N * p;
    out.level_Np = level;
    Zpm R((uint64_t)p, M);

    out.euler = euler_factors(f, g, p, out.s, M);
    if (out.euler.alpha_f.valuation() != 0)
        throw std::domain_error("padic_rankin_classical: f not ordinary at p");

    long B = sturm_bound(level, k + 2) + extra_B;
    long Bstore = (long)p * B + p;
    auto sp = build_space<ZpmRing>(R, level, k + 2, DirichletCharacter(1), B, Bstore);
    out.space_dim = sp.dim();

    // Phi = g * Fbar^{[p]}_{k-k',0} (the Galois average over b), then one
    // U_p to land in the level-Np space
    auto gexp = qexp_rat_to_zpm(
        [&] {
            RatRing::Ring RR;
            auto an = extend_coefficients_rat(g, Bstore - 1);
            QExp<RatRing> ge(RR, Bstore);
            for (long n = 1; n < Bstore; n++) ge.a[n] = an[n];
            return ge;
        }(),
        R);
    auto Fbar = deplete(eis_stab_avg(k - kp, N, R, Bstore), p);
    auto Phi = qexp_mul(gexp, Fbar);
    auto Phi1 = u_op(Phi, p);
    auto coords = sp.solve(Phi1);
    if (!coords) {
        // honest failure: the candidate span is too small
        std::ostringstream os;
        os << "padic_rankin_classical: U_p(g*F) not in the computed span (dim " << sp.dim()
           << "); the span is not certified full";
        throw SpanNotClosed(os.str());
    }

    auto U = up_matrix(sp);
    auto eord = ordinary_projector(U, R);
    out.ord_rank = (long)eord.ord_rank;

    std::vector<long> probes;
    for (long ell = 2; (long)probes.size() < 3; ell++) {
        bool isp = true;
        for (long d = 2; d * d <= ell; d++)
            if (ell % d == 0) isp = false;
        if (isp && level % ell != 0) probes.push_back(ell);
    }
    auto iso = isotypic_coefficient(sp, eord, *coords, f, out.euler.alpha_f, probes);
    if (iso.residual_maxval != 0)
        out.notes.push_back("isotypic residual nonzero: max " +
                            std::to_string(iso.residual_maxval));

    // undo the U_p shift: coefficient of Phi = alpha^{-1} * coefficient of U Phi
    PadicNum c = PadicNum(Int(p), M, Int(iso.c), 0) / out.euler.alpha_f;
    out.raw = c;

    // the b-average multiplies the coefficient by phi(N)
    PadicNum phiN = PadicNum::from_rational(Rat((long)euler_phi(N)), Int(p), M);
    c = c / phiN;

    // N-power at the classical point: exponent k - k' - 2
    PadicNum Npow = PadicNum::from_rational(Rat(pow_int(N, (unsigned long)(k - kp - 2))),
                                            Int(p), M);
    // trivial characters: G(eps_f^{-1}) = 1
    if (!f.eps.is_trivial())
        throw std::domain_error("padic_rankin_classical: nontrivial eps_f not supported");
    out.lp_unnormalized = Npow * c / out.euler.Estar;
    out.P = Npow * c * out.euler.Ef / out.euler.Efgs;
    return out;
}

CalibrationReport calibrate(const CalibrationPair& pair1, const CalibrationPair& pair2,
                            double rel_tol) {
    CalibrationReport rep;
    rep.u_f_numerator = pair1.R;
    rep.u_f_denominator = pair1.padic.P;
    PadicNum ratio = pair2.padic.P / pair1.padic.P;
    auto rec = rational_reconstruct(ratio);
    if (!rec) {
        rep.failure = "rational reconstruction of the p-adic ratio failed";
        return rep;
    }
    rep.ratio_reconstructed = *rec;
    rep.ratio_complex = pair2.R / pair1.R;
    rep.predicted_R2 = pair1.R * RealInterval::from_rat(*rec);
    double target = rep.ratio_complex.mid();
    double got = RealInterval::from_rat(*rec).mid();
    rep.relative_defect = std::abs(got - target) / std::max(1e-300, std::abs(target));
    double slack = rep.ratio_complex.width() / std::max(1e-300, std::abs(target));
    rep.verified = rep.relative_defect <= rel_tol + slack;
    if (!rep.verified) rep.failure = "verification mismatch beyond tolerance";
    return rep;
}

} // namespace rankin
