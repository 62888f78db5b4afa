#pragma once

#include <map>
#include <optional>
#include <string>

#include "rankin/bernoulli.hpp"
#include "rankin/dirichlet.hpp"
#include "rankin/padic.hpp"
#include "rankin/qexp.hpp"

namespace rankin {

// ---- small number-field elements (Q[x]/(minpoly)) -------------------------

struct NumberField {
    std::vector<Rat> minpoly; // monic, constant first; degree >= 1
    long degree() const { return (long)minpoly.size() - 1; }
    static NumberField rationals() { return {{Rat(0), Rat(1)}}; }
};

using NFElem = std::vector<Rat>; // coords in the power basis, size = degree

NFElem nf_from_rat(const NumberField& F, const Rat& x);
NFElem nf_add(const NumberField& F, const NFElem& a, const NFElem& b);
NFElem nf_sub(const NumberField& F, const NFElem& a, const NFElem& b);
NFElem nf_mul(const NumberField& F, const NFElem& a, const NFElem& b);
bool nf_is_zero(const NFElem& a);
bool nf_is_rational(const NFElem& a, Rat* out = nullptr);

// embedding into Z_p given a root of the minimal polynomial mod p^M
PadicNum nf_embed(const NumberField& F, const NFElem& a, const PadicNum& root);
// Hensel-lift a simple root of the minimal polynomial mod p; picks the
// root congruent to r0 mod p
PadicNum nf_root_padic(const NumberField& F, const Int& p, unsigned M, const Int& r0);

// ---- newforms ---------------------------------------------------------------

struct Newform {
    long level = 1;
    long weight = 2; // = k + 2
    DirichletCharacter eps;
    NumberField field = NumberField::rationals();
    std::map<long, NFElem> ap; // prime -> eigenvalue
    std::string source;

    long k() const { return weight - 2; }
    bool has_ap(long p) const { return ap.count(p) != 0; }
    // rational a_p or throw
    Rat ap_rat(long p) const;
};

// multiplicative extension a_1..a_nmax with the prime-power recursion
// a_{l^{r+1}} = a_l a_{l^r} - eps(l) l^{w-1} a_{l^{r-1}}
std::vector<NFElem> extend_coefficients(const Newform& f, long n_max);
std::vector<Rat> extend_coefficients_rat(const Newform& f, long n_max);

// JSON round-trip (schema: level/weight/character/field_poly/ap/source)
std::string export_newform(const Newform& nf);
Newform ingest_newform(const std::string& json_doc);

// ---- spaces of modular forms ------------------------------------------------

// spanning-set recipe: a product of atoms
struct Atom {
    enum Kind { EisensteinW, Eisenstein2Stab, EtaQuotient } kind;
    long w = 0, d = 1;               // E_w(q^d) or E_2(q) - d E_2(q^d)
    std::map<long, long> eta;        // eta exponents
    std::string name() const;
};
using Recipe = std::vector<Atom>;
std::string recipe_name(const Recipe& r);

// all candidate recipes of the given weight whose atoms live at divisors
// of the level (trivial character)
std::vector<Recipe> candidate_recipes(long level, long weight);

template <class P>
QExp<P> materialize(const typename P::Ring& R, const Recipe& rec, long Q);

// Echelonized spanning basis over the coefficient ring; pivot search is
// restricted to the identity window [0, B) (a Sturm-type bound), rows are
// stored to the longer precision Bstore for later Hecke action.
template <class P>
struct ModFormSpace {
    typename P::Ring ring{};
    long level = 1, weight = 2;
    DirichletCharacter eps;
    long B = 0;      // identity window
    long Bstore = 0; // stored q-precision
    std::vector<QExp<P>> basis; // reduced rows, unit pivots inside the window
    std::vector<long> pivots;
    std::vector<std::string> recipes; // accepted candidates, in order
    bool certified_full = false;
    long expected_dim = -1;
    bool unit_obstruction = false;

    long dim() const { return (long)basis.size(); }

    bool add_candidate(const QExp<P>& f, const std::string& name);
    // coordinates of f in the basis over the identity window; nullopt if
    // f is not in the span mod the window
    std::optional<std::vector<typename P::Elem>> solve(const QExp<P>& f) const;
    QExp<P> combine(const std::vector<typename P::Elem>& coords) const;
};

long sturm_bound(long level, long weight);

// greedy span construction from candidate recipes
template <class P>
ModFormSpace<P> build_space(const typename P::Ring& R, long level, long weight,
                            const DirichletCharacter& eps, long B, long Bstore,
                            long expected_dim = -1);

// matrix of T_ell (U_ell when ell | level) on the computed basis; columns
// are images of basis rows. Throws SpanNotClosed if the span is not stable.
struct SpanNotClosed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class P>
std::vector<std::vector<typename P::Elem>> hecke_matrix(const ModFormSpace<P>& sp, long ell);

// ---- eigenform extraction (rational spaces) ---------------------------------

struct Eigensystem {
    std::vector<Rat> coords;      // in the space basis, a_1 normalized when possible
    QExp<RatRing> expansion;      // combined expansion
    std::map<long, Rat> a;        // T_ell eigenvalues found
    bool cuspidal = false;        // constant term vanishes
    bool normalized = false;      // a_1 = 1
    long oldform_of_level = 0;    // nonzero when detected as an l-old pair
};

// simultaneous rational eigensystems of the probe Hecke operators;
// 2-dimensional ell-old blocks are resolved through the U_ell trace.
std::vector<Eigensystem> eigenforms(const ModFormSpace<RatRing>& sp,
                                    const std::vector<long>& probes,
                                    std::vector<std::string>* warnings = nullptr);

Newform newform_from_eigensystem(const ModFormSpace<RatRing>& sp, const Eigensystem& es,
                                 long ap_max, const std::string& source);

// ---- p-stabilization and Euler factors --------------------------------------

// f_alpha(q) = f(q) - beta f(q^p), a U_p eigenform with eigenvalue alpha
QExp<ZpmRing> p_stabilize(const Newform& f, const Zpm& zp, const PadicNum& alpha, long Q);

struct EulerFactors {
    PadicNum alpha_f, beta_f;
    PadicNum Ef;    // 1 - beta_f/(p alpha_f)
    PadicNum Estar; // 1 - beta_f/alpha_f
    PadicNum Efgs;  // (1-p^{s-1}/(a a'))(1-p^{s-1}/(a b'))(1-b a'/p^s)(1-b b'/p^s)
};
EulerFactors euler_factors(const Newform& f, const Newform& g, long p, long s, unsigned M);

// embeds a rational q-expansion into Z/p^M
QExp<ZpmRing> qexp_rat_to_zpm(const QExp<RatRing>& f, const Zpm& zp);
uint64_t rat_to_zpm(const Rat& x, const Zpm& zp);


// ---- template definitions ----------------------------------------------------

template <class P>
bool ModFormSpace<P>::add_candidate(const QExp<P>& f, const std::string& name) {
    if (f.prec() < Bstore) return false;
    QExp<P> v(ring, Bstore);
    for (long i = 0; i < Bstore; i++) v.a[i] = f.a[i];
    for (size_t i = 0; i < basis.size(); i++) {
        auto c = v.a[pivots[i]];
        if (P::is_zero(ring, c)) continue;
        for (long j = 0; j < Bstore; j++)
            v.a[j] = P::sub(ring, v.a[j], P::mul(ring, c, basis[i].a[j]));
    }
    long piv = -1;
    for (long j = 0; j < B; j++)
        if (!P::is_zero(ring, v.a[j])) {
            if (P::is_unit(ring, v.a[j])) {
                piv = j;
                break;
            }
            unit_obstruction = true;
        }
    if (piv < 0) return false;
    auto inv = P::inv(ring, v.a[piv]);
    for (long j = 0; j < Bstore; j++) v.a[j] = P::mul(ring, inv, v.a[j]);
    for (size_t i = 0; i < basis.size(); i++) {
        auto c = basis[i].a[piv];
        if (P::is_zero(ring, c)) continue;
        for (long j = 0; j < Bstore; j++)
            basis[i].a[j] = P::sub(ring, basis[i].a[j], P::mul(ring, c, v.a[j]));
    }
    basis.push_back(std::move(v));
    pivots.push_back(piv);
    recipes.push_back(name);
    return true;
}

template <class P>
std::optional<std::vector<typename P::Elem>> ModFormSpace<P>::solve(const QExp<P>& f) const {
    long W = std::min(f.prec(), (long)B);
    std::vector<typename P::Elem> w(f.a.begin(), f.a.begin() + W);
    std::vector<typename P::Elem> coords(basis.size(), P::zero(ring));
    for (size_t i = 0; i < basis.size(); i++) {
        if (pivots[i] >= W) return std::nullopt;
        auto c = w[pivots[i]];
        coords[i] = c;
        if (P::is_zero(ring, c)) continue;
        for (long j = 0; j < W; j++)
            w[j] = P::sub(ring, w[j], P::mul(ring, c, basis[i].a[j]));
    }
    for (long j = 0; j < W; j++)
        if (!P::is_zero(ring, w[j])) return std::nullopt;
    return coords;
}

template <class P>
QExp<P> ModFormSpace<P>::combine(const std::vector<typename P::Elem>& coords) const {
    QExp<P> r(ring, Bstore);
    for (size_t i = 0; i < basis.size(); i++) {
        if (P::is_zero(ring, coords[i])) continue;
        for (long j = 0; j < Bstore; j++)
            r.a[j] = P::add(ring, r.a[j], P::mul(ring, coords[i], basis[i].a[j]));
    }
    return r;
}

template <class P>
ModFormSpace<P> build_space(const typename P::Ring& R, long level, long weight,
                            const DirichletCharacter& eps, long B, long Bstore,
                            long expected_dim) {
    if (weight < 2) throw std::domain_error("build_space: weight >= 2 required");
    if (B < sturm_bound(level, weight))
        throw std::domain_error("build_space: B below the Sturm bound");
    ModFormSpace<P> sp;
    sp.ring = R;
    sp.level = level;
    sp.weight = weight;
    sp.eps = eps;
    sp.B = B;
    sp.Bstore = std::max(B, Bstore);
    sp.expected_dim = expected_dim;
    auto recs = candidate_recipes(level, weight);
    for (const auto& rec : recs) {
        if (expected_dim >= 0 && sp.dim() == expected_dim) break;
        auto f = materialize<P>(R, rec, sp.Bstore);
        sp.add_candidate(f, recipe_name(rec));
    }
    sp.certified_full = (expected_dim >= 0 && sp.dim() == expected_dim);
    return sp;
}

template <class P>
std::vector<std::vector<typename P::Elem>> hecke_matrix(const ModFormSpace<P>& sp, long ell) {
    // scalar eps(ell) ell^{w-1}; zero when ell divides the level
    Rat scal(0);
    if (sp.level % ell != 0) {
        Rat ev;
        CycQ v = sp.eps.value(ell);
        if (!v.is_rational(&ev))
            throw std::domain_error("hecke_matrix: non-rational character value");
        scal = ev * Rat(pow_int(ell, (unsigned long)(sp.weight - 1)));
    }
    auto s = P::from_rat(sp.ring, scal);
    size_t n = sp.basis.size();
    std::vector<std::vector<typename P::Elem>> M(n,
        std::vector<typename P::Elem>(n, P::zero(sp.ring)));
    for (size_t j = 0; j < n; j++) {
        auto img = hecke_t(sp.basis[j], ell, s);
        if (img.prec() < sp.B)
            throw SpanNotClosed("hecke_matrix: insufficient stored precision for T_" +
                                std::to_string(ell));
        auto coords = sp.solve(img);
        if (!coords)
            throw SpanNotClosed("hecke_matrix: span not closed under T_" + std::to_string(ell));
        for (size_t i = 0; i < n; i++) M[i][j] = (*coords)[i];
    }
    return M;
}

template <class P>
QExp<P> materialize(const typename P::Ring& R, const Recipe& rec, long Q) {
    QExp<P> acc = QExp<P>::one(R, Q);
    for (const auto& at : rec) {
        QExp<P> f(R, Q);
        switch (at.kind) {
            case Atom::EisensteinW: {
                // E_w(q^d) = 1 - (2w/B_w) sum sigma_{w-1}(n) q^{dn}
                Rat c = -Rat(2 * at.w) / bernoulli((unsigned)at.w);
                long Qb = (Q + at.d - 1) / at.d;
                auto base = divisor_sum_series<P>(
                    R, Qb, P::from_long(R, 1),
                    [&](long d, long) {
                        return P::from_rat(R, c * Rat(pow_int(d, (unsigned long)(at.w - 1))));
                    },
                    true);
                for (long n = 0; n < Qb; n++)
                    if (n * at.d < Q) f.a[n * at.d] = base.a[n];
                break;
            }
            case Atom::Eisenstein2Stab: {
                // E_2(q) - d E_2(q^d), holomorphic of weight 2 on Gamma_0(d)
                auto e2 = divisor_sum_series<P>(
                    R, Q, P::from_long(R, 1),
                    [&](long d, long) { return P::from_long(R, -24 * d); }, true);
                f = e2;
                for (long n = 0; n * at.d < Q; n++) {
                    auto t = P::mul(R, P::from_long(R, at.d), e2.a[n]);
                    f.a[n * at.d] = P::sub(R, f.a[n * at.d], t);
                }
                break;
            }
            case Atom::EtaQuotient:
                f = eta_quotient<P>(R, at.eta, Q);
                break;
        }
        acc = qexp_mul(acc, f);
    }
    return acc;
}

} // namespace rankin
