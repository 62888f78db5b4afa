#include "rankin/kernels.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace rankin {
namespace kernels {

std::vector<uint64_t> conv_schoolbook_serial(const std::vector<uint64_t>& a,
                                             const std::vector<uint64_t>& b,
                                             size_t out_len, const Zpm& R) {
    std::vector<uint64_t> c(out_len, 0);
    for (size_t i = 0; i < a.size() && i < out_len; i++) {
        if (a[i] == 0) continue;
        size_t jmax = std::min(b.size(), out_len - i);
        for (size_t j = 0; j < jmax; j++)
            c[i + j] = R.add(c[i + j], R.mul(a[i], b[j]));
    }
    return c;
}

std::vector<uint64_t> conv_schoolbook_omp(const std::vector<uint64_t>& a,
                                          const std::vector<uint64_t>& b,
                                          size_t out_len, const Zpm& R) {
    std::vector<uint64_t> c(out_len, 0);
#pragma omp parallel for schedule(static)
    for (long n = 0; n < (long)out_len; n++) {
        __uint128_t acc = 0;
        size_t ilo = (size_t)n >= b.size() ? n - b.size() + 1 : 0;
        size_t ihi = std::min(a.size() - 1, (size_t)n);
        uint64_t cn = 0;
        for (size_t i = ilo; i <= ihi && i < a.size(); i++) {
            acc += (__uint128_t)a[i] * b[n - i];
            // lazy reduction: fold before overflow is possible
            if ((i & 63) == 63) {
                cn = R.add(cn, (uint64_t)(acc % R.q));
                acc = 0;
            }
        }
        cn = R.add(cn, (uint64_t)(acc % R.q));
        c[n] = cn;
    }
    return c;
}

// ---- NTT over three word-size primes -------------------------------------

namespace {

struct NttPrime {
    uint64_t mod;
    uint64_t root; // primitive root
};

// NTT-friendly primes with large two-adic order
constexpr NttPrime NTTP[3] = {
    {4179340454199820289ull, 3},  // 29 * 2^57 + 1
    {1945555039024054273ull, 5},  // 27 * 2^56 + 1
    {180143985094819841ull, 6},   // 5  * 2^55 + 1
};

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

void ntt_inplace(std::vector<uint64_t>& v, const NttPrime& P, bool inverse, bool parallel) {
    size_t n = v.size();
    // bit reversal
    for (size_t i = 1, j = 0; i < n; i++) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(v[i], v[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        uint64_t w = powmod(P.root, (P.mod - 1) / len, P.mod);
        if (inverse) w = powmod(w, P.mod - 2, P.mod);
        long nblocks = (long)(n / len);
        bool par = parallel && n >= (1u << 14);
#pragma omp parallel for schedule(static) if (par)
        for (long blk = 0; blk < nblocks; blk++) {
            size_t i = (size_t)blk * len;
            uint64_t wn = 1;
            for (size_t k = 0; k < len / 2; k++) {
                uint64_t u = v[i + k];
                uint64_t t = mulmod(v[i + k + len / 2], wn, P.mod);
                v[i + k] = u + t < P.mod ? u + t : u + t - P.mod;
                v[i + k + len / 2] = u >= t ? u - t : u + P.mod - t;
                wn = mulmod(wn, w, P.mod);
            }
        }
    }
    if (inverse) {
        uint64_t ninv = powmod(n % P.mod, P.mod - 2, P.mod);
        for (auto& x : v) x = mulmod(x, ninv, P.mod);
    }
}

std::vector<uint64_t> conv_one_prime(const std::vector<uint64_t>& a,
                                     const std::vector<uint64_t>& b, size_t out_len,
                                     const NttPrime& P, bool parallel) {
    size_t need = std::min(a.size() + b.size() - 1, out_len);
    size_t n = 1;
    while (n < need + 1) n <<= 1;
    std::vector<uint64_t> fa(n, 0), fb(n, 0);
    for (size_t i = 0; i < a.size() && i < out_len; i++) fa[i] = a[i] % P.mod;
    for (size_t i = 0; i < b.size() && i < out_len; i++) fb[i] = b[i] % P.mod;
    ntt_inplace(fa, P, false, parallel);
    ntt_inplace(fb, P, false, parallel);
    for (size_t i = 0; i < n; i++) fa[i] = mulmod(fa[i], fb[i], P.mod);
    ntt_inplace(fa, P, true, parallel);
    fa.resize(out_len, 0);
    return fa;
}

} // namespace

std::vector<uint64_t> conv_ntt(const std::vector<uint64_t>& a,
                               const std::vector<uint64_t>& b,
                               size_t out_len, const Zpm& R, bool parallel) {
    if (a.empty() || b.empty()) return std::vector<uint64_t>(out_len, 0);
    auto r1 = conv_one_prime(a, b, out_len, NTTP[0], parallel);
    auto r2 = conv_one_prime(a, b, out_len, NTTP[1], parallel);
    auto r3 = conv_one_prime(a, b, out_len, NTTP[2], parallel);

    // Garner: x = x1 + P1*t1 + P1*P2*t2, reduced mod q only.
    const uint64_t P1 = NTTP[0].mod, P2 = NTTP[1].mod, P3 = NTTP[2].mod;
    const uint64_t inv_P1_mod_P2 = powmod(P1 % P2, P2 - 2, P2);
    const uint64_t inv_P1P2_mod_P3 =
        powmod(mulmod(P1 % P3, P2 % P3, P3), P3 - 2, P3);
    const uint64_t P1_mod_q = P1 % R.q;
    const uint64_t P1P2_mod_q = R.mul(P1_mod_q, P2 % R.q);

    std::vector<uint64_t> c(out_len);
#pragma omp parallel for schedule(static) if (parallel && out_len > 4096)
    for (long i = 0; i < (long)out_len; i++) {
        uint64_t x1 = r1[i];
        uint64_t t1 = mulmod((r2[i] + P2 - x1 % P2) % P2, inv_P1_mod_P2, P2);
        // x12 = x1 + P1*t1  (mod P3) without overflow
        uint64_t x12_mod_P3 = (x1 % P3 + mulmod(P1 % P3, t1, P3)) % P3;
        uint64_t t2 = mulmod((r3[i] + P3 - x12_mod_P3) % P3, inv_P1P2_mod_P3, P3);
        uint64_t res = (x1 % R.q + R.mul(P1_mod_q, t1)) % R.q;
        res = (res + R.mul(P1P2_mod_q, t2)) % R.q;
        c[i] = res;
    }
    return c;
}

std::vector<uint64_t> conv_auto(const std::vector<uint64_t>& a,
                                const std::vector<uint64_t>& b,
                                size_t out_len, const Zpm& R) {
    size_t na = std::min(a.size(), out_len), nb = std::min(b.size(), out_len);
    if (na < 64 || nb < 64 || na * nb < (size_t)1 << 16)
        return conv_schoolbook_omp(a, b, out_len, R);
    return conv_ntt(a, b, out_len, R, true);
}

// ---- matrices -------------------------------------------------------------

Mat mat_identity(size_t n) {
    Mat I(n, std::vector<uint64_t>(n, 0));
    for (size_t i = 0; i < n; i++) I[i][i] = 1;
    return I;
}

Mat mat_mul(const Mat& A, const Mat& B, const Zpm& R, bool parallel) {
    size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
    Mat C(n, std::vector<uint64_t>(m, 0));
#pragma omp parallel for schedule(static) if (parallel && n >= 8)
    for (long i = 0; i < (long)n; i++) {
        for (size_t t = 0; t < k; t++) {
            uint64_t a = A[i][t];
            if (!a) continue;
            const auto& Bt = B[t];
            auto& Ci = C[i];
            for (size_t j = 0; j < m; j++)
                if (Bt[j]) Ci[j] = R.add(Ci[j], R.mul(a, Bt[j]));
        }
    }
    return C;
}

std::vector<uint64_t> mat_vec(const Mat& A, const std::vector<uint64_t>& v, const Zpm& R) {
    std::vector<uint64_t> r(A.size(), 0);
    for (size_t i = 0; i < A.size(); i++) {
        __uint128_t acc = 0;
        uint64_t ri = 0;
        for (size_t j = 0; j < v.size(); j++) {
            acc += (__uint128_t)A[i][j] * v[j];
            if ((j & 63) == 63) {
                ri = R.add(ri, (uint64_t)(acc % R.q));
                acc = 0;
            }
        }
        r[i] = R.add(ri, (uint64_t)(acc % R.q));
    }
    return r;
}

// Berkowitz: division-free characteristic polynomial.
std::vector<uint64_t> charpoly_berkowitz(const Mat& A, const Zpm& R, bool parallel) {
    size_t n = A.size();
    if (n == 0) return {1};
    // C holds coefficients highest-degree-first, starting from x - a00
    std::vector<uint64_t> C = {1, R.neg(A[0][0])};
    for (size_t r = 1; r < n; r++) {
        // s_j = Row * M^{j} * Col, M the r x r principal minor
        std::vector<uint64_t> col(r), row(r);
        for (size_t i = 0; i < r; i++) col[i] = A[i][r], row[i] = A[r][i];
        std::vector<uint64_t> s(r + 1);
        std::vector<uint64_t> v = col;
        for (size_t j = 0; j + 1 <= r; j++) {
            uint64_t dot = 0;
            for (size_t i = 0; i < r; i++) dot = R.add(dot, R.mul(row[i], v[i]));
            s[j] = dot;
            if (j + 1 < r) {
                // v <- M v
                std::vector<uint64_t> nv(r, 0);
#pragma omp parallel for schedule(static) if (parallel && r >= 64)
                for (long i = 0; i < (long)r; i++) {
                    __uint128_t acc = 0;
                    uint64_t x = 0;
                    for (size_t t = 0; t < r; t++) {
                        acc += (__uint128_t)A[i][t] * v[t];
                        if ((t & 63) == 63) {
                            x = R.add(x, (uint64_t)(acc % R.q));
                            acc = 0;
                        }
                    }
                    nv[i] = R.add(x, (uint64_t)(acc % R.q));
                }
                v.swap(nv);
            }
        }
        // Toeplitz column: [1, -a_rr, -s_0, -s_1, ...]
        std::vector<uint64_t> t(r + 2);
        t[0] = 1;
        t[1] = R.neg(A[r][r]);
        for (size_t j = 0; j + 2 < r + 2; j++) t[j + 2] = R.neg(s[j]);
        // newC[i] = sum_j t[i-j] C[j]
        std::vector<uint64_t> newC(C.size() + 1, 0);
        for (size_t i = 0; i < newC.size(); i++) {
            uint64_t acc = 0;
            for (size_t j = 0; j < C.size(); j++) {
                if (i < j) break;
                if (i - j < t.size()) acc = R.add(acc, R.mul(t[i - j], C[j]));
            }
            newC[i] = acc;
        }
        C.swap(newC);
    }
    std::reverse(C.begin(), C.end()); // constant term first
    return C;
}

// ---- echelon basis --------------------------------------------------------

void EchelonBasis::reduce(std::vector<uint64_t>& v) const {
    for (size_t i = 0; i < rows_.size(); i++) {
        uint64_t c = v[pivots_[i]];
        if (c == 0) continue;
        const auto& r = rows_[i];
        for (size_t j = 0; j < width_; j++)
            if (r[j]) v[j] = R_.sub(v[j], R_.mul(c, r[j]));
    }
}

bool EchelonBasis::add_row(const std::vector<uint64_t>& row) {
    if (row.size() != width_) throw std::invalid_argument("EchelonBasis: width mismatch");
    std::vector<uint64_t> v = row;
    reduce(v);
    size_t piv = width_;
    for (size_t j = 0; j < width_; j++)
        if (v[j] && R_.is_unit(v[j])) {
            piv = j;
            break;
        }
    if (piv == width_) {
        for (size_t j = 0; j < width_; j++)
            if (v[j]) {
                unit_obstruction_ = true;
                break;
            }
        return false;
    }
    uint64_t inv = R_.inv(v[piv]);
    for (size_t j = 0; j < width_; j++) v[j] = R_.mul(v[j], inv);
    // back-substitute to keep reduced form
    for (size_t i = 0; i < rows_.size(); i++) {
        uint64_t c = rows_[i][piv];
        if (!c) continue;
        for (size_t j = 0; j < width_; j++)
            if (v[j]) rows_[i][j] = R_.sub(rows_[i][j], R_.mul(c, v[j]));
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
}

bool EchelonBasis::solve(const std::vector<uint64_t>& v, std::vector<uint64_t>& coords) const {
    std::vector<uint64_t> w = v;
    coords.assign(rows_.size(), 0);
    for (size_t i = 0; i < rows_.size(); i++) {
        uint64_t c = w[pivots_[i]];
        coords[i] = c;
        if (c == 0) continue;
        const auto& r = rows_[i];
        for (size_t j = 0; j < width_; j++)
            if (r[j]) w[j] = R_.sub(w[j], R_.mul(c, r[j]));
    }
    for (size_t j = 0; j < width_; j++)
        if (w[j] != 0) return false;
    return true;
}

// ---- polynomials -----------------------------------------------------------

void poly_trim(Poly& a) {
    while (a.size() > 1 && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, const Zpm& R) {
    if (a.empty() || b.empty()) return {0};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); i++) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); j++)
            c[i + j] = R.add(c[i + j], R.mul(a[i], b[j]));
    }
    poly_trim(c);
    return c;
}

Poly poly_mod(Poly a, const Poly& d, const Zpm& R) {
    Poly div = d;
    poly_trim(div);
    if (div.size() == 1) throw std::invalid_argument("poly_mod by constant");
    if (!R.is_unit(div.back())) throw std::domain_error("poly_mod: divisor lead not a unit");
    uint64_t linv = R.inv(div.back());
    poly_trim(a);
    while (a.size() >= div.size()) {
        uint64_t c = R.mul(a.back(), linv);
        size_t off = a.size() - div.size();
        for (size_t j = 0; j < div.size(); j++)
            a[off + j] = R.sub(a[off + j], R.mul(c, div[j]));
        poly_trim(a);
        if (a.size() == 1 && a[0] == 0) break;
        if (a.size() < div.size()) break;
        if (a.back() == 0) poly_trim(a);
    }
    return a;
}

uint64_t poly_eval(const Poly& a, uint64_t x, const Zpm& R) {
    uint64_t r = 0;
    for (size_t i = a.size(); i-- > 0;) r = R.add(R.mul(r, x), a[i]);
    return r;
}

std::vector<uint64_t> poly_eval_matvec(const Poly& h, const Mat& U,
                                       const std::vector<uint64_t>& v, const Zpm& R) {
    std::vector<uint64_t> acc(v.size(), 0);
    for (size_t i = h.size(); i-- > 0;) {
        acc = mat_vec(U, acc, R);
        for (size_t j = 0; j < v.size(); j++) acc[j] = R.add(acc[j], R.mul(h[i], v[j]));
    }
    return acc;
}

// ---- Hensel machinery over F_p then Z/p^M ---------------------------------

namespace {

// arithmetic in F_p[x], p = R.p
Poly fp_reduce(const Poly& a, uint64_t p) {
    Poly r(a.size());
    for (size_t i = 0; i < a.size(); i++) r[i] = a[i] % p;
    poly_trim(r);
    return r;
}

Poly fp_mul(const Poly& a, const Poly& b, uint64_t p) {
    if ((a.size() == 1 && a[0] == 0) || (b.size() == 1 && b[0] == 0)) return {0};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); i++)
        for (size_t j = 0; j < b.size(); j++)
            c[i + j] = (c[i + j] + (__uint128_t)a[i] * b[j]) % p;
    poly_trim(c);
    return c;
}

Poly fp_sub(const Poly& a, const Poly& b, uint64_t p) {
    Poly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < c.size(); i++) {
        uint64_t x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
        c[i] = (x + p - y) % p;
    }
    poly_trim(c);
    return c;
}

uint64_t fp_inv(uint64_t a, uint64_t p) {
    uint64_t r = 1, e = p - 2;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

// divides a by b, returning {quotient, remainder}
std::pair<Poly, Poly> fp_divrem(Poly a, const Poly& b, uint64_t p) {
    poly_trim(a);
    Poly q(std::max<size_t>(1, a.size() >= b.size() ? a.size() - b.size() + 1 : 1), 0);
    uint64_t li = fp_inv(b.back(), p);
    while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
        uint64_t c = mulmod(a.back(), li, p);
        size_t off = a.size() - b.size();
        q[off] = c;
        for (size_t j = 0; j < b.size(); j++)
            a[off + j] = (a[off + j] + p - mulmod(c, b[j], p)) % p;
        poly_trim(a);
        if (a.size() < b.size()) break;
        if (a.back() == 0) poly_trim(a);
    }
    poly_trim(q);
    return {q, a};
}

// extended gcd over F_p[x]: returns {g, s, t} with s*a + t*b = g
std::tuple<Poly, Poly, Poly> fp_xgcd(Poly a, Poly b, uint64_t p) {
    Poly s0 = {1}, s1 = {0}, t0 = {0}, t1 = {1};
    poly_trim(a);
    poly_trim(b);
    while (!(b.size() == 1 && b[0] == 0)) {
        auto [q, r] = fp_divrem(a, b, p);
        a = b;
        b = r;
        Poly ns = fp_sub(s0, fp_mul(q, s1, p), p);
        s0 = s1;
        s1 = ns;
        Poly nt = fp_sub(t0, fp_mul(q, t1, p), p);
        t0 = t1;
        t1 = nt;
    }
    return {a, s0, t0};
}

} // namespace

std::pair<Poly, Poly> hensel_split_unit_part(const Poly& chi, const Zpm& R) {
    // mod p: chi = x^a * ubar with ubar(0) != 0
    Poly cbar = fp_reduce(chi, R.p);
    size_t a = 0;
    while (a < cbar.size() && cbar[a] == 0) a++;
    if (a >= cbar.size())
        throw std::domain_error("hensel_split_unit_part: charpoly vanishes mod p");
    Poly ubar(cbar.begin() + a, cbar.end());
    Poly wbar(a + 1, 0);
    wbar[a] = 1;
    if (a == 0) return {Poly{1}, chi}; // all-unit already

    // Bezout: s*wbar + t*ubar = 1 over F_p
    auto [g, s, t] = fp_xgcd(wbar, ubar, R.p);
    if (g.size() != 1) throw std::logic_error("hensel_split_unit_part: factors not coprime");
    uint64_t ginv = fp_inv(g[0], R.p);
    for (auto& x : s) x = mulmod(x, ginv, R.p);
    for (auto& x : t) x = mulmod(x, ginv, R.p);

    // linear Hensel steps mod p^k, k = 2..M; w stays monic of degree a.
    Poly w = wbar, u = ubar, S = s, T = t;
    for (unsigned k = 1; k < R.M; k++) {
        // e = chi - w*u  (over Z/p^M)
        Poly wu = poly_mul(w, u, R);
        Poly e(std::max(chi.size(), wu.size()), 0);
        for (size_t i = 0; i < e.size(); i++) {
            uint64_t x = i < chi.size() ? chi[i] : 0, y = i < wu.size() ? wu[i] : 0;
            e[i] = R.sub(x, y);
        }
        poly_trim(e);
        // corrections dw = (T*e mod w), du = S*e + q*u where q = (T*e) div w
        Poly Te = poly_mul(T, e, R);
        Poly dw = poly_mod(Te, w, R);
        // du = (e - dw*u)/w  computed as S*e + ((T*e) div w)*u; easier:
        // use e = dw*u + w*du  =>  du = (e - dw*u) / w (exact division)
        Poly rhs = fp_sub(e, poly_mul(dw, u, R), R.q); // mod q arithmetic: same layout
        // exact division rhs / w over Z/p^M (w monic)
        Poly du;
        {
            Poly r = rhs;
            poly_trim(r);
            Poly q(std::max<size_t>(1, r.size() >= w.size() ? r.size() - w.size() + 1 : 1), 0);
            while (r.size() >= w.size() && !(r.size() == 1 && r[0] == 0)) {
                uint64_t c = r.back(); // w monic
                size_t off = r.size() - w.size();
                q[off] = c;
                for (size_t j = 0; j < w.size(); j++)
                    r[off + j] = R.sub(r[off + j], R.mul(c, w[j]));
                poly_trim(r);
                if (r.size() < w.size()) break;
                if (r.back() == 0) poly_trim(r);
            }
            du = q;
        }
        // w += dw, u += du
        w.resize(std::max(w.size(), dw.size()), 0);
        for (size_t i = 0; i < dw.size(); i++) w[i] = R.add(w[i], dw[i]);
        u.resize(std::max(u.size(), du.size()), 0);
        for (size_t i = 0; i < du.size(); i++) u[i] = R.add(u[i], du[i]);
        poly_trim(w);
        poly_trim(u);
    }
    return {w, u};
}

Poly poly_inv_mod(const Poly& w, const Poly& u, const Zpm& R) {
    // Newton: s <- s(2 - w s) mod u, starting from the mod-p inverse
    Poly wbar = fp_reduce(w, R.p), ubar = fp_reduce(u, R.p);
    auto [g, s, t] = fp_xgcd(wbar, ubar, R.p);
    if (g.size() != 1 || g[0] == 0)
        throw std::domain_error("poly_inv_mod: not invertible mod p");
    uint64_t ginv = fp_inv(g[0], R.p);
    Poly S = s;
    for (auto& x : S) x = mulmod(x, ginv, R.p);
    unsigned prec = 1;
    while (prec < R.M) {
        // S <- S*(2 - w*S) mod u  (all mod p^M; converges quadratically)
        Poly wS = poly_mod(poly_mul(w, S, R), u, R);
        Poly two_minus(wS.size(), 0);
        for (size_t i = 0; i < wS.size(); i++) two_minus[i] = R.neg(wS[i]);
        two_minus[0] = R.add(two_minus[0], 2 % R.q);
        S = poly_mod(poly_mul(S, two_minus, R), u, R);
        prec *= 2;
    }
    return S;
}

} // namespace kernels
} // namespace rankin
