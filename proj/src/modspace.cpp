#include "rankin/modspace.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace rankin {

// ---- number-field elements --------------------------------------------------

NFElem nf_from_rat(const NumberField& F, const Rat& x) {
    NFElem e((size_t)F.degree(), Rat(0));
    e[0] = x;
    return e;
}

NFElem nf_add(const NumberField& F, const NFElem& a, const NFElem& b) {
    NFElem r(a);
    for (size_t i = 0; i < r.size(); i++) r[i] += b[i];
    return r;
}

NFElem nf_sub(const NumberField& F, const NFElem& a, const NFElem& b) {
    NFElem r(a);
    for (size_t i = 0; i < r.size(); i++) r[i] -= b[i];
    return r;
}

NFElem nf_mul(const NumberField& F, const NFElem& a, const NFElem& b) {
    size_t d = (size_t)F.degree();
    std::vector<Rat> raw(2 * d, Rat(0));
    for (size_t i = 0; i < d; i++) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < d; j++)
            if (b[j] != 0) raw[i + j] += a[i] * b[j];
    }
    // reduce modulo the monic minimal polynomial
    for (size_t i = raw.size(); i-- > d;) {
        Rat c = raw[i];
        if (c == 0) continue;
        raw[i] = 0;
        for (size_t j = 0; j < d; j++) raw[i - d + j] -= c * F.minpoly[j];
    }
    raw.resize(d);
    return raw;
}

bool nf_is_zero(const NFElem& a) {
    return std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; });
}

bool nf_is_rational(const NFElem& a, Rat* out) {
    for (size_t i = 1; i < a.size(); i++)
        if (a[i] != 0) return false;
    if (out) *out = a[0];
    return true;
}

PadicNum nf_embed(const NumberField& F, const NFElem& a, const PadicNum& root) {
    PadicNum acc = PadicNum::zero(root.prime(), root.precision());
    for (size_t i = a.size(); i-- > 0;)
        acc = acc * root + PadicNum::from_rational(a[i], root.prime(), root.precision());
    return acc;
}

PadicNum nf_root_padic(const NumberField& F, const Int& p, unsigned M, const Int& r0) {
    Int q = pow_int(p, M);
    // Newton from r0; all coefficients must be p-integral
    auto evalpoly = [&](const Int& x, bool deriv) {
        Rat acc = 0;
        Rat xp = 1;
        for (size_t i = 0; i < F.minpoly.size(); i++) {
            if (deriv) {
                if (i >= 1) acc += Rat(i) * F.minpoly[i] * xp;
            } else
                acc += F.minpoly[i] * xp;
            if (!deriv || i + 1 < F.minpoly.size()) xp *= Rat(x);
        }
        return acc;
    };
    (void)evalpoly;
    // work with numerators: clear denominators once
    Int lcm = 1;
    for (const auto& c : F.minpoly) lcm = lcm / gcd_int(lcm, den(c)) * den(c);
    std::vector<Int> P;
    for (const auto& c : F.minpoly) P.push_back(num(c) * (lcm / den(c)));
    auto ev = [&](const Int& x, const std::vector<Int>& poly) {
        Int acc = 0;
        for (size_t i = poly.size(); i-- > 0;) acc = (acc * x + poly[i]) % q;
        return acc < 0 ? acc + q : acc;
    };
    std::vector<Int> dP;
    for (size_t i = 1; i < P.size(); i++) dP.push_back(P[i] * (long)i);
    Int x = r0 % p;
    if (x < 0) x += p;
    for (int it = 0; it < 64; it++) {
        Int fx = ev(x, P);
        if (fx == 0) break;
        Int fpx = ev(x, dP);
        if (fpx % p == 0) throw std::domain_error("nf_root_padic: root not simple mod p");
        // invert mod q
        Int t = 0, nt = 1, r = q, nr = fpx;
        while (nr != 0) {
            Int quo = r / nr, tmp = t - quo * nt;
            t = nt;
            nt = tmp;
            tmp = r - quo * nr;
            r = nr;
            nr = tmp;
        }
        if (t < 0) t += q;
        x = (x - fx * t) % q;
        if (x < 0) x += q;
    }
    if (ev(x, P) != 0) throw std::logic_error("nf_root_padic: Newton failed");
    return PadicNum(p, M, x, 0);
}

Rat Newform::ap_rat(long p) const {
    auto it = ap.find(p);
    if (it == ap.end()) throw std::domain_error("Newform: missing a_" + std::to_string(p));
    Rat v;
    if (!nf_is_rational(it->second, &v))
        throw std::domain_error("Newform: a_p not rational");
    return v;
}

std::vector<NFElem> extend_coefficients(const Newform& f, long n_max) {
    const NumberField& F = f.field;
    std::vector<NFElem> a((size_t)n_max + 1, nf_from_rat(F, 0));
    a[1] = nf_from_rat(F, 1);
    // prime powers by the recursion, then multiplicativity
    for (long p = 2; p <= n_max; p++) {
        bool isprime = true;
        for (long d = 2; d * d <= p; d++)
            if (p % d == 0) {
                isprime = false;
                break;
            }
        if (!isprime) continue;
        auto it = f.ap.find(p);
        if (it == f.ap.end())
            throw std::domain_error("extend_coefficients: missing a_" + std::to_string(p));
        NFElem app = it->second;
        Rat epl(0);
        if (f.level % p != 0) {
            CycQ v = f.eps.value(p);
            if (!v.is_rational(&epl))
                throw std::domain_error("extend_coefficients: non-rational character");
        }
        NFElem scal = nf_from_rat(F, epl * Rat(pow_int(p, (unsigned long)(f.weight - 1))));
        NFElem prev = nf_from_rat(F, 1), cur = app;
        for (long q = p; q <= n_max; q *= p) {
            a[q] = cur;
            if (q > n_max / p) break;
            NFElem nxt = nf_sub(F, nf_mul(F, app, cur), nf_mul(F, scal, prev));
            prev = cur;
            cur = nxt;
        }
    }
    for (long n = 2; n <= n_max; n++) {
        // factor out the largest prime power
        long m = n, p = 0;
        for (long d = 2; d * d <= m; d++)
            if (m % d == 0) {
                p = d;
                break;
            }
        if (p == 0) continue; // prime
        long q = 1;
        while (m % p == 0) {
            m /= p;
            q *= p;
        }
        if (m == 1) continue; // prime power
        a[n] = nf_mul(F, a[q], a[m]);
    }
    return a;
}

std::vector<Rat> extend_coefficients_rat(const Newform& f, long n_max) {
    auto a = extend_coefficients(f, n_max);
    std::vector<Rat> r(a.size());
    for (size_t i = 0; i < a.size(); i++)
        if (!nf_is_rational(a[i], &r[i]))
            throw std::domain_error("extend_coefficients_rat: non-rational coefficient");
    return r;
}

// ---- newform JSON ------------------------------------------------------------

std::string export_newform(const Newform& nf) {
    nlohmann::json j;
    j["level"] = nf.level;
    j["weight"] = nf.weight;
    nlohmann::json ch;
    ch["modulus"] = nf.eps.modulus();
    nlohmann::json gi = nlohmann::json::array();
    for (size_t i = 0; i < nf.eps.generators().size(); i++)
        gi.push_back({nf.eps.generators()[i], nf.eps.images()[i]});
    ch["gen_images"] = gi;
    j["character"] = ch;
    nlohmann::json fp = nlohmann::json::array();
    for (const auto& c : nf.field.minpoly) fp.push_back(rat_str(c));
    j["field_poly"] = fp;
    nlohmann::json ap = nlohmann::json::array();
    for (const auto& [p, e] : nf.ap) {
        nlohmann::json coords = nlohmann::json::array();
        for (const auto& c : e) coords.push_back(rat_str(c));
        ap.push_back({p, coords});
    }
    j["ap"] = ap;
    j["source"] = nf.source;
    return j.dump(2);
}

Newform ingest_newform(const std::string& doc) {
    nlohmann::json j = nlohmann::json::parse(doc);
    Newform nf;
    nf.level = j.at("level").get<long>();
    nf.weight = j.at("weight").get<long>();
    long mod = j.at("character").at("modulus").get<long>();
    DirichletCharacter triv(mod);
    std::vector<long> exps(triv.generators().size(), 0);
    for (const auto& gi : j.at("character").at("gen_images")) {
        long g = gi.at(0).get<long>(), e = gi.at(1).get<long>();
        for (size_t i = 0; i < triv.generators().size(); i++)
            if (triv.generators()[i] == g) exps[i] = e;
    }
    nf.eps = DirichletCharacter(mod, exps);
    nf.field.minpoly.clear();
    for (const auto& c : j.at("field_poly")) nf.field.minpoly.push_back(parse_rat(c.get<std::string>()));
    if (nf.field.minpoly.size() < 2 || nf.field.minpoly.back() != 1)
        throw std::invalid_argument("ingest_newform: field_poly must be monic");
    for (const auto& e : j.at("ap")) {
        long p = e.at(0).get<long>();
        NFElem coords;
        for (const auto& c : e.at(1)) coords.push_back(parse_rat(c.get<std::string>()));
        if ((long)coords.size() != nf.field.degree())
            throw std::invalid_argument("ingest_newform: coordinate length mismatch");
        nf.ap[p] = coords;
    }
    nf.source = j.value("source", "");
    // consistency: recursion spot-check against any redundant prime-power data
    // (a_1 = 1 by construction; the recursion is enforced by extend_coefficients)
    return nf;
}

// ---- recipes ------------------------------------------------------------------

std::string Atom::name() const {
    std::ostringstream os;
    switch (kind) {
        case EisensteinW:
            os << "E" << w;
            if (d > 1) os << "(q^" << d << ")";
            break;
        case Eisenstein2Stab:
            os << "E2stab(" << d << ")";
            break;
        case EtaQuotient:
            os << "eta{";
            for (auto it = eta.begin(); it != eta.end(); ++it)
                os << (it == eta.begin() ? "" : ",") << it->first << ":" << it->second;
            os << "}";
            break;
    }
    return os.str();
}

std::string recipe_name(const Recipe& r) {
    std::string s;
    for (size_t i = 0; i < r.size(); i++) s += (i ? "*" : "") + r[i].name();
    return s;
}

long sturm_bound(long level, long weight) {
    long mu = level;
    long n = level;
    for (long p = 2; p * p <= n; p++)
        if (n % p == 0) {
            mu = mu / p * (p + 1);
            while (n % p == 0) n /= p;
        }
    if (n > 1) mu = mu / n * (n + 1);
    return (weight * mu + 11) / 12 + 10;
}

namespace {

long atom_weight(const Atom& a) {
    if (a.kind == Atom::EisensteinW) return a.w;
    if (a.kind == Atom::Eisenstein2Stab) return 2;
    long s = 0;
    for (auto [d, r] : a.eta) s += r;
    return s / 2;
}

// Ligozat conditions for eta quotients on Gamma_0(L), trivial character,
// holomorphic at every cusp
bool eta_ok(long L, const std::map<long, long>& r) {
    long s1 = 0, s2 = 0, sr = 0;
    Int prod = 1;
    for (auto [d, e] : r) {
        if (L % d != 0) return false;
        s1 += d * e;
        s2 += (L / d) * e;
        sr += e;
        prod *= pow_int(Int(d), (unsigned long)std::abs(e));
    }
    if (sr <= 0 || sr % 2) return false;
    if (s1 % 24 || s2 % 24) return false;
    // trivial character: (-1)^{weight} * prod d^{r_d} must be a square; with
    // positive exponents prod = prod d^{r_d}
    Int sq = 1;
    for (auto [d, e] : r)
        if (e % 2) sq *= d;
    if (sr / 2 % 2 == 1) return false; // odd weight never trivial on Gamma_0
    Int root = boost::multiprecision::sqrt(sq);
    if (root * root != sq) return false;
    // holomorphy at all cusps e | L
    for (long e = 1; e <= L; e++) {
        if (L % e) continue;
        long acc = 0; // 24 e gcd(e, L/e) / L * ord; want >= 0
        for (auto [d, ex] : r) {
            long g = std::gcd(e, d);
            acc += g * g * ex * (L / d) / std::gcd(L, e * e) * 1; // careful below
        }
        // standard form: ord = (L / (24 e gcd(e, L/e))) * sum gcd(e,d)^2 r_d / d
        // use exact rational to avoid truncation
        Rat ord = 0;
        for (auto [d, ex] : r) {
            long g = std::gcd(e, d);
            ord += Rat(g) * Rat(g) * Rat(ex) / Rat(d);
        }
        if (ord < 0) return false;
    }
    return true;
}

} // namespace

std::vector<Recipe> candidate_recipes(long level, long weight) {
    std::vector<long> divs;
    for (long d = 1; d <= level; d++)
        if (level % d == 0) divs.push_back(d);

    std::vector<Atom> atoms;
    for (long d : divs) {
        for (long w = 4; w <= weight; w += 2) atoms.push_back({Atom::EisensteinW, w, d, {}});
        if (d > 1) atoms.push_back({Atom::Eisenstein2Stab, 0, d, {}});
        // Delta(q^d)
        if (weight >= 12) atoms.push_back({Atom::EtaQuotient, 0, 1, {{d, 24}}});
    }
    // two-divisor eta quotients of each even weight
    for (size_t i = 0; i < divs.size(); i++)
        for (size_t j = i + 1; j < divs.size(); j++) {
            long d1 = divs[i], d2 = divs[j];
            for (long w = 2; w <= weight; w += 2) {
                for (long a = 1; a < 2 * w; a++) {
                    long b = 2 * w - a;
                    std::map<long, long> r = {{d1, a}, {d2, b}};
                    if (eta_ok(level, r)) atoms.push_back({Atom::EtaQuotient, 0, 1, r});
                }
            }
        }

    std::vector<Recipe> out;
    for (const auto& a : atoms)
        if (atom_weight(a) == weight) out.push_back({a});
    for (size_t i = 0; i < atoms.size(); i++)
        for (size_t j = i; j < atoms.size(); j++)
            if (atom_weight(atoms[i]) + atom_weight(atoms[j]) == weight)
                out.push_back({atoms[i], atoms[j]});
    return out;
}

// ---- eigenforms ----------------------------------------------------------------

namespace {

using RMat = std::vector<std::vector<Rat>>;

RMat rmat_mul(const RMat& A, const RMat& B) {
    size_t n = A.size(), m = B[0].size(), k = B.size();
    RMat C(n, std::vector<Rat>(m, Rat(0)));
    for (size_t i = 0; i < n; i++)
        for (size_t t = 0; t < k; t++) {
            if (A[i][t] == 0) continue;
            for (size_t j = 0; j < m; j++)
                if (B[t][j] != 0) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

// solve A x = b exactly; A square invertible assumed (throws otherwise)
std::vector<Rat> rsolve(RMat A, std::vector<Rat> b) {
    size_t n = A.size();
    for (size_t c = 0; c < n; c++) {
        size_t piv = c;
        while (piv < n && A[piv][c] == 0) piv++;
        if (piv == n) throw std::runtime_error("rsolve: singular");
        std::swap(A[piv], A[c]);
        std::swap(b[piv], b[c]);
        Rat pv = A[c][c];
        for (size_t j = c; j < n; j++) A[c][j] /= pv;
        b[c] /= pv;
        for (size_t i = 0; i < n; i++) {
            if (i == c || A[i][c] == 0) continue;
            Rat f = A[i][c];
            for (size_t j = c; j < n; j++) A[i][j] -= f * A[c][j];
            b[i] -= f * b[c];
        }
    }
    return b;
}

// kernel basis of A (rows are kernel vectors)
RMat rkernel(RMat A) {
    size_t n = A.size();
    std::vector<long> pivcol;
    size_t row = 0;
    for (size_t c = 0; c < n && row < n; c++) {
        size_t piv = row;
        while (piv < n && A[piv][c] == 0) piv++;
        if (piv == n) continue;
        std::swap(A[piv], A[row]);
        Rat pv = A[row][c];
        for (size_t j = 0; j < n; j++) A[row][j] /= pv;
        for (size_t i = 0; i < n; i++) {
            if (i == row || A[i][c] == 0) continue;
            Rat f = A[i][c];
            for (size_t j = 0; j < n; j++) A[i][j] -= f * A[row][j];
        }
        pivcol.push_back((long)c);
        row++;
    }
    RMat ker;
    std::vector<bool> ispiv(n, false);
    for (long c : pivcol) ispiv[c] = true;
    for (size_t c = 0; c < n; c++) {
        if (ispiv[c]) continue;
        std::vector<Rat> v(n, Rat(0));
        v[c] = 1;
        for (size_t r = 0; r < pivcol.size(); r++) v[pivcol[r]] = -A[r][c];
        ker.push_back(v);
    }
    return ker;
}

// characteristic polynomial over Q (Berkowitz, division-free)
std::vector<Rat> rcharpoly(const RMat& A) {
    size_t n = A.size();
    if (n == 0) return {Rat(1)};
    std::vector<Rat> C = {Rat(1), -A[0][0]};
    for (size_t r = 1; r < n; r++) {
        std::vector<Rat> col(r), row(r);
        for (size_t i = 0; i < r; i++) col[i] = A[i][r], row[i] = A[r][i];
        std::vector<Rat> s(r + 1, Rat(0));
        std::vector<Rat> v = col;
        for (size_t j = 0; j + 1 <= r; j++) {
            Rat dot = 0;
            for (size_t i = 0; i < r; i++) dot += row[i] * v[i];
            s[j] = dot;
            if (j + 1 < r) {
                std::vector<Rat> nv(r, Rat(0));
                for (size_t i = 0; i < r; i++) {
                    Rat acc = 0;
                    for (size_t t = 0; t < r; t++) acc += A[i][t] * v[t];
                    nv[i] = acc;
                }
                v.swap(nv);
            }
        }
        std::vector<Rat> t(r + 2, Rat(0));
        t[0] = 1;
        t[1] = -A[r][r];
        for (size_t j = 0; j + 2 < r + 2; j++) t[j + 2] = -s[j];
        std::vector<Rat> newC(C.size() + 1, Rat(0));
        for (size_t i = 0; i < newC.size(); i++) {
            Rat acc = 0;
            for (size_t j = 0; j < C.size() && j <= i; j++)
                if (i - j < t.size()) acc += t[i - j] * C[j];
            newC[i] = acc;
        }
        C.swap(newC);
    }
    std::reverse(C.begin(), C.end()); // constant first
    return C;
}

// integer roots of a rational polynomial within |x| <= bound
std::vector<Int> integer_roots(const std::vector<Rat>& poly, const Int& bound) {
    std::vector<Int> roots;
    for (Int x = -bound; x <= bound; x++) {
        Rat acc = 0;
        for (size_t i = poly.size(); i-- > 0;) acc = acc * Rat(x) + poly[i];
        if (acc == 0) roots.push_back(x);
    }
    return roots;
}

struct Block {
    RMat vecs; // rows: vectors in space coordinates
    std::map<long, Rat> eigen;
    bool unresolved = false;
};

// restriction of the operator (space coords) to the block span
RMat restrict_op(const RMat& A, const RMat& vecs) {
    size_t m = vecs.size(), n = A.size();
    // images
    RMat img(m, std::vector<Rat>(n, Rat(0)));
    for (size_t i = 0; i < m; i++)
        for (size_t c = 0; c < n; c++) {
            Rat acc = 0;
            for (size_t t = 0; t < n; t++) acc += A[c][t] * vecs[i][t];
            img[i][c] = acc;
        }
    // solve img_i = sum_j R[j][i] vecs_j  -> least structure: use linear solve on
    // the transpose system with a full-rank submatrix of vecs
    // pick m independent columns of vecs
    RMat V = vecs;
    std::vector<long> cols;
    {
        RMat W = vecs;
        size_t row = 0;
        for (size_t c = 0; c < n && row < m; c++) {
            size_t piv = row;
            while (piv < m && W[piv][c] == 0) piv++;
            if (piv == m) continue;
            std::swap(W[piv], W[row]);
            Rat pv = W[row][c];
            for (size_t j = 0; j < n; j++) W[row][j] /= pv;
            for (size_t i = 0; i < m; i++) {
                if (i == row || W[i][c] == 0) continue;
                Rat f = W[i][c];
                for (size_t j = 0; j < n; j++) W[i][j] -= f * W[row][j];
            }
            cols.push_back((long)c);
            row++;
        }
        if (row < m) throw std::runtime_error("restrict_op: dependent block basis");
    }
    RMat M(m, std::vector<Rat>(m, Rat(0)));
    for (size_t i = 0; i < m; i++)
        for (size_t j = 0; j < m; j++) M[i][j] = V[j][cols[i]];
    RMat R(m, std::vector<Rat>(m, Rat(0)));
    for (size_t i = 0; i < m; i++) {
        std::vector<Rat> b(m);
        for (size_t j = 0; j < m; j++) b[j] = img[i][cols[j]];
        auto x = rsolve(M, b);
        for (size_t j = 0; j < m; j++) R[j][i] = x[j]; // column i = coords of image of vec i
    }
    return R;
}

} // namespace

std::vector<Eigensystem> eigenforms(const ModFormSpace<RatRing>& sp,
                                    const std::vector<long>& probes,
                                    std::vector<std::string>* warnings) {
    long n = sp.dim();
    std::vector<Block> blocks;
    {
        Block b0;
        b0.vecs.assign((size_t)n, std::vector<Rat>((size_t)n, Rat(0)));
        for (long i = 0; i < n; i++) b0.vecs[i][i] = 1;
        blocks.push_back(b0);
    }
    std::map<long, RMat> ops;
    for (long ell : probes) ops[ell] = hecke_matrix(sp, ell);

    for (long ell : probes) {
        if (sp.level % ell == 0) continue; // probe primes coprime to the level
        std::vector<Block> next;
        for (auto& blk : blocks) {
            if (blk.vecs.size() == 1) {
                // already a line: record the eigenvalue
                auto R = restrict_op(ops[ell], blk.vecs);
                blk.eigen[ell] = R[0][0];
                next.push_back(blk);
                continue;
            }
            RMat R = restrict_op(ops[ell], blk.vecs);
            auto chi = rcharpoly(R);
            Int bound = 2 * (1 + pow_int(Int(ell), (unsigned long)(sp.weight - 1)));
            auto roots = integer_roots(chi, bound);
            size_t covered = 0;
            for (const Int& lam : roots) {
                RMat shifted = R;
                for (size_t i = 0; i < shifted.size(); i++) shifted[i][i] -= Rat(lam);
                auto ker = rkernel(shifted);
                if (ker.empty()) continue;
                Block nb;
                nb.eigen = blk.eigen;
                nb.eigen[ell] = Rat(lam);
                for (const auto& kv : ker) {
                    std::vector<Rat> v((size_t)n, Rat(0));
                    for (size_t j = 0; j < kv.size(); j++)
                        for (long c = 0; c < n; c++) v[c] += kv[j] * blk.vecs[j][c];
                    nb.vecs.push_back(v);
                }
                covered += ker.size();
                next.push_back(nb);
            }
            if (covered < blk.vecs.size()) {
                // non-rational leftover: complement flagged unresolved
                Block rem = blk;
                rem.unresolved = true;
                if (covered > 0 && warnings)
                    warnings->push_back("T_" + std::to_string(ell) +
                                        ": non-rational eigenvalues in a block of dim " +
                                        std::to_string(blk.vecs.size() - covered));
                if (covered == 0)
                    next.push_back(rem);
                // note: partially-covered complements are dropped from rational
                // extraction; they are reported via the warning above
            }
        }
        blocks.swap(next);
    }

    std::vector<Eigensystem> out;
    for (auto& blk : blocks) {
        if (blk.unresolved && warnings)
            warnings->push_back("unresolved non-rational block of dim " +
                                std::to_string(blk.vecs.size()));
        if (blk.unresolved) continue;
        if (blk.vecs.size() == 1) {
            Eigensystem es;
            es.coords = blk.vecs[0];
            es.expansion = sp.combine(es.coords);
            if (es.expansion.a[1] != 0) {
                Rat inv = Rat(1) / es.expansion.a[1];
                for (auto& c : es.coords) c *= inv;
                es.expansion = sp.combine(es.coords);
                es.normalized = true;
            }
            es.a = blk.eigen;
            es.cuspidal = (es.expansion.a[0] == 0);
            out.push_back(std::move(es));
            continue;
        }
        if (blk.vecs.size() == 2) {
            // try to resolve as an ell-old pair through U_ell
            bool done = false;
            for (long ell = 2; ell <= sp.level && !done; ell++) {
                if (sp.level % ell != 0) continue;
                bool prime = true;
                for (long d = 2; d * d <= ell; d++)
                    if (ell % d == 0) prime = false;
                if (!prime) continue;
                RMat U = hecke_matrix(sp, ell);
                RMat R = restrict_op(U, blk.vecs);
                Rat tr = R[0][0] + R[1][1];
                Rat det = R[0][0] * R[1][1] - R[0][1] * R[1][0];
                Rat expected_det;
                {
                    DirichletCharacter eps = sp.eps;
                    Rat ev(1); // character of the lower level form at ell
                    expected_det = ev * Rat(pow_int(ell, (unsigned long)(sp.weight - 1)));
                }
                if (det != expected_det) continue;
                // the pair {h(q), h(q^ell)}: h has a_1 = 1 and a_ell = tr
                // two linear conditions on x vecs[0] + y vecs[1]
                auto e0 = sp.combine(blk.vecs[0]);
                auto e1 = sp.combine(blk.vecs[1]);
                RMat M = {{e0.a[1], e1.a[1]}, {e0.a[ell], e1.a[ell]}};
                std::vector<Rat> rhs = {Rat(1), tr};
                std::vector<Rat> xy;
                try {
                    xy = rsolve(M, rhs);
                } catch (...) {
                    continue;
                }
                Eigensystem es;
                es.coords.assign((size_t)n, Rat(0));
                for (long c = 0; c < n; c++)
                    es.coords[c] = xy[0] * blk.vecs[0][c] + xy[1] * blk.vecs[1][c];
                es.expansion = sp.combine(es.coords);
                es.a = blk.eigen;
                es.a[ell] = tr;
                es.normalized = true;
                es.cuspidal = (es.expansion.a[0] == 0);
                es.oldform_of_level = sp.level / ell;
                out.push_back(std::move(es));
                done = true;
            }
            if (!done && warnings)
                warnings->push_back("2-dim block not separated by probes (add probes)");
            continue;
        }
        if (warnings)
            warnings->push_back("block of dim " + std::to_string(blk.vecs.size()) +
                                " not separated by probes (add probes)");
    }
    return out;
}

Newform newform_from_eigensystem(const ModFormSpace<RatRing>& sp, const Eigensystem& es,
                                 long ap_max, const std::string& source) {
    if (!es.normalized)
        throw std::domain_error("newform_from_eigensystem: eigensystem not a_1 normalized");
    Newform nf;
    nf.level = es.oldform_of_level ? es.oldform_of_level : sp.level;
    nf.weight = sp.weight;
    nf.eps = sp.eps;
    nf.field = NumberField::rationals();
    nf.source = source;
    for (long p = 2; p <= ap_max; p++) {
        bool prime = true;
        for (long d = 2; d * d <= p; d++)
            if (p % d == 0) prime = false;
        if (!prime) continue;
        if (p >= es.expansion.prec())
            throw std::domain_error("newform_from_eigensystem: expansion too short");
        nf.ap[p] = nf_from_rat(nf.field, es.expansion.a[p]);
    }
    return nf;
}

QExp<ZpmRing> p_stabilize(const Newform& f, const Zpm& zp, const PadicNum& alpha, long Q) {
    long p = (long)zp.p;
    if (f.level % p == 0) throw std::domain_error("p_stabilize: p divides the level");
    // beta = eps(p) p^{w-1} / alpha
    Rat epv(0);
    CycQ v = f.eps.value(p);
    if (!v.is_rational(&epv)) throw std::domain_error("p_stabilize: non-rational character");
    PadicNum pw = PadicNum::from_rational(epv * Rat(pow_int(p, (unsigned long)(f.weight - 1))),
                                          alpha.prime(), alpha.precision());
    PadicNum beta = pw / alpha;
    // verify alpha is a root of the Hecke polynomial mod p^M
    PadicNum ap = PadicNum::from_rational(f.ap_rat(p), alpha.prime(), alpha.precision());
    PadicNum resid = alpha * alpha - ap * alpha + pw;
    if (!resid.is_zero() && resid.valuation() < (long)alpha.precision())
        throw std::domain_error("p_stabilize: alpha not a root of the Hecke polynomial");
    if (beta.vfloor() < 0) throw std::domain_error("p_stabilize: beta not integral");
    uint64_t betam = (uint64_t)(beta.mantissa() % Int(zp.q));
    for (long i = 0; i < beta.vfloor(); i++) betam = zp.mul(betam, zp.p % zp.q);

    auto an = extend_coefficients_rat(f, Q - 1);
    QExp<ZpmRing> out(zp, Q);
    for (long n = 1; n < Q; n++) {
        uint64_t c = ZpmRing::from_rat(zp, an[n]);
        if (n % p == 0) c = zp.sub(c, zp.mul(betam, ZpmRing::from_rat(zp, an[n / p])));
        out.a[n] = c;
    }
    return out;
}

EulerFactors euler_factors(const Newform& f, const Newform& g, long p, long s, unsigned M) {
    Int P(p);
    PadicNum apf = PadicNum::from_rational(f.ap_rat(p), P, M);
    PadicNum cf = PadicNum::from_rational(
        [&] {
            Rat e(1);
            CycQ v = f.eps.value(p);
            v.is_rational(&e);
            return e * Rat(pow_int(p, (unsigned long)(f.weight - 1)));
        }(),
        P, M);
    if (apf.valuation() > 0) throw std::domain_error("euler_factors: f not ordinary at p");
    PadicNum alpha_f = hensel_unit_root(apf, cf);
    PadicNum beta_f = cf / alpha_f;

    PadicNum apg = PadicNum::from_rational(g.ap_rat(p), P, M);
    PadicNum cg = PadicNum::from_rational(
        [&] {
            Rat e(1);
            CycQ v = g.eps.value(p);
            v.is_rational(&e);
            return e * Rat(pow_int(p, (unsigned long)(g.weight - 1)));
        }(),
        P, M);

    PadicNum one = PadicNum::one(P, M);
    EulerFactors E{alpha_f, beta_f, one, one, one};
    E.Ef = one - beta_f / (PadicNum::from_rational(Rat(p), P, M) * alpha_f);
    E.Estar = one - beta_f / alpha_f;
    // (1 - p^{s-1}/(a_f a_g))(1 - p^{s-1}/(a_f b_g)) = 1 - u a_p(g)/c_g + u^2/c_g,
    // u = p^{s-1}/alpha_f; the g-roots enter symmetrically
    PadicNum u = PadicNum::from_rational(Rat(pow_int(p, (unsigned long)(s - 1))), P, M) / alpha_f;
    PadicNum t1 = one - u * apg / cg + u * u / cg;
    // (1 - b_f a_g/p^s)(1 - b_f b_g/p^s) = 1 - v a_p(g) + v^2 c_g, v = beta_f/p^s
    PadicNum v = beta_f / PadicNum::from_rational(Rat(pow_int(p, (unsigned long)s)), P, M);
    PadicNum t2 = one - v * apg + v * v * cg;
    E.Efgs = t1 * t2;
    return E;
}

QExp<ZpmRing> qexp_rat_to_zpm(const QExp<RatRing>& f, const Zpm& zp) {
    QExp<ZpmRing> r(zp, f.prec());
    for (long n = 0; n < f.prec(); n++) r.a[n] = ZpmRing::from_rat(zp, f.a[n]);
    return r;
}

uint64_t rat_to_zpm(const Rat& x, const Zpm& zp) { return ZpmRing::from_rat(zp, x); }

} // namespace rankin
