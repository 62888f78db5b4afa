#include "rankin/tsym.hpp"

#include <stdexcept>

namespace rankin {

TSymVec tsym_mul(const TSymVec& x, const TSymVec& y) {
    TSymVec r(x.k + y.k);
    for (long s = 0; s <= x.k; s++) {
        if (x.c[s] == 0) continue;
        long a = x.k - s;
        for (long t = 0; t <= y.k; t++) {
            if (y.c[t] == 0) continue;
            long c = y.k - t;
            r.c[s + t] += x.c[s] * y.c[t] * Rat(binomial(a + c, a) * binomial(s + t, s));
        }
    }
    return r;
}

static void check_cg_inequalities(long k, long kp, long j) {
    if (k < 0 || kp < 0 || j < 0 || j > std::min(k, kp))
        throw std::domain_error("clebsch-gordan: need k,k' >= 0 and 0 <= j <= min(k,k')");
}

// factorial that treats negative arguments as killing the term
static bool fact_ok(long n) { return n >= 0; }

CGTensor cg_map(long k, long kp, long j, const TSymVec& t) {
    check_cg_inequalities(k, kp, j);
    long K = k + kp - 2 * j;
    if (t.k != K) throw std::invalid_argument("cg_map: input degree must be k+k'-2j");
    CGTensor out(k, kp, j);
    for (long s = 0; s <= K; s++) {
        // input basis vector w^{[s, K-s]} carries coefficient c[K-s]
        const Rat& ts = t.c[K - s];
        if (ts == 0) continue;
        for (long r = 0; r <= s; r++) {
            long rp = s - r;
            if (!fact_ok(k - r - j) || !fact_ok(kp - rp - j)) continue;
            for (long i = 0; i <= j; i++) {
                if (!fact_ok(k - r - i) || !fact_ok(kp - rp - j + i)) continue;
                // output w^{[r+i, k-r-i]} (x) w^{[r'+j-i, k'-j+i-r']}
                Rat coef = Rat(factorial(r + i) * factorial(k - r - i) *
                               factorial(rp + j - i) * factorial(kp - rp - j + i)) /
                           Rat(factorial(r) * factorial(rp) * factorial(k - r - j) *
                               factorial(kp - rp - j) * factorial(i) * factorial(j - i));
                if (i % 2) coef = -coef;
                out.c[k - r - i][kp - j + i - rp] += ts * coef;
            }
        }
    }
    return out;
}

TwistedRat cg_trilinear(long k, long kp, long j, const SymVec& a, const SymVec& b,
                        const TSymVec& t) {
    check_cg_inequalities(k, kp, j);
    if (a.k != k || b.k != kp) throw std::invalid_argument("cg_trilinear: degree mismatch");
    CGTensor m = cg_map(k, kp, j, t);
    Rat acc = 0;
    for (long x = 0; x <= k; x++) {
        if (a.c[x] == 0) continue;
        for (long y = 0; y <= kp; y++)
            if (b.c[y] != 0) acc += m.c[x][y] * a.c[x] * b.c[y];
    }
    return {acc, -j};
}

// ---- tensor-algebra oracle --------------------------------------------------
//
// Elements of H^{(x)n} as dense vectors indexed by bitmask (bit = 1 means
// the factor v, bit = 0 means u; bit i is tensor position i).

namespace {

struct BiTensor {
    long n1 = 0, n2 = 0; // factors in each slot
    std::vector<Rat> c;  // size 2^(n1+n2); slot-2 bits above slot-1 bits

    BiTensor(long a, long b) : n1(a), n2(b), c((size_t)1 << (a + b), Rat(0)) {}
};

// all (a,b)-shuffle position subsets: masks of a+b bits with a ones,
// marking where the FIRST operand's factors go (in order)
void shuffle_masks(long a, long b, std::vector<uint32_t>& out) {
    out.clear();
    long n = a + b;
    for (uint32_t m = 0; m < (1u << n); m++)
        if (__builtin_popcount(m) == a) out.push_back(m);
}

// distribute the bits of x (a bits) and y (b bits) according to the
// shuffle mask: positions with mask bit 1 receive x's bits in order
uint32_t interleave(uint32_t x, uint32_t y, uint32_t mask, long n) {
    uint32_t r = 0;
    long xi = 0, yi = 0;
    for (long pos = 0; pos < n; pos++) {
        if (mask & (1u << pos)) {
            if (x & (1u << xi)) r |= 1u << pos;
            xi++;
        } else {
            if (y & (1u << yi)) r |= 1u << pos;
            yi++;
        }
    }
    return r;
}

// slotwise symmetrized (shuffle) product
BiTensor shuffle_mul(const BiTensor& A, const BiTensor& B) {
    BiTensor R(A.n1 + B.n1, A.n2 + B.n2);
    std::vector<uint32_t> sh1, sh2;
    shuffle_masks(A.n1, B.n1, sh1);
    shuffle_masks(A.n2, B.n2, sh2);
    uint32_t maskA1 = (1u << A.n1) - 1, maskA2 = ((1u << A.n2) - 1);
    uint32_t maskB1 = (1u << B.n1) - 1, maskB2 = ((1u << B.n2) - 1);
    for (uint32_t xa = 0; xa < A.c.size(); xa++) {
        if (A.c[xa] == 0) continue;
        uint32_t a1 = xa & maskA1, a2 = (xa >> A.n1) & maskA2;
        for (uint32_t xb = 0; xb < B.c.size(); xb++) {
            if (B.c[xb] == 0) continue;
            uint32_t b1 = xb & maskB1, b2 = (xb >> B.n1) & maskB2;
            Rat prod = A.c[xa] * B.c[xb];
            for (uint32_t m1 : sh1) {
                uint32_t s1 = interleave(a1, b1, m1, A.n1 + B.n1);
                for (uint32_t m2 : sh2) {
                    uint32_t s2 = interleave(a2, b2, m2, A.n2 + B.n2);
                    R.c[((uint32_t)s2 << (A.n1 + B.n1)) | s1] += prod;
                }
            }
        }
    }
    return R;
}

} // namespace

CGTensor cg_oracle(long k, long kp, long j, const TSymVec& t) {
    check_cg_inequalities(k, kp, j);
    long K = k + kp - 2 * j;
    if (K > 8) throw std::domain_error("cg_oracle: cost guard k+k'-2j <= 8 exceeded");
    if (t.k != K) throw std::invalid_argument("cg_oracle: input degree must be k+k'-2j");

    // embed t into H^{(x)K} and split positions (k-j | k'-j)
    BiTensor emb(k - j, kp - j);
    for (long s2 = 0; s2 <= K; s2++) {
        const Rat& ts = t.c[s2]; // w^{[K-s2, s2]}: s2 ones among K bits
        if (ts == 0) continue;
        for (uint32_t m = 0; m < (1u << K); m++)
            if (__builtin_popcount(m) == s2) emb.c[m] += ts;
    }

    // divided j-th power of the antisymmetric tensor v (x) u - u (x) v
    BiTensor wedge(0, 0);
    wedge.c[0] = 1;
    for (long i = 0; i < j; i++) {
        BiTensor y(1, 1);
        y.c[0b01] = 1;  // v in slot 1, u in slot 2
        y.c[0b10] = -1; // u in slot 1, v in slot 2
        wedge = shuffle_mul(wedge, y);
    }
    for (auto& x : wedge.c) x /= Rat(factorial(j));

    BiTensor full = shuffle_mul(emb, wedge);

    // read off coefficients in the divided-power basis: the coefficient of
    // w^{[k-b,b]} (x) w^{[k'-d,d]} is the coefficient of any single monomial
    // in its orbit; use v-bits packed low in each slot
    CGTensor out(k, kp, j);
    for (long b = 0; b <= k; b++) {
        uint32_t m1 = (b == 0) ? 0 : ((1u << b) - 1);
        for (long d = 0; d <= kp; d++) {
            uint32_t m2 = (d == 0) ? 0 : ((1u << d) - 1);
            out.c[b][d] = full.c[((uint32_t)m2 << k) | m1];
        }
    }
    // blockwise symmetry audit: every monomial with the same per-slot
    // v-count must carry the same coefficient
    for (uint32_t m = 0; m < full.c.size(); m++) {
        uint32_t m1 = m & ((1u << k) - 1), m2 = m >> k;
        long b = __builtin_popcount(m1), d = __builtin_popcount(m2);
        if (full.c[m] != out.c[b][d])
            throw std::logic_error("cg_oracle: result not blockwise symmetric");
    }
    return out;
}

int motive_fil_dim(long k, long kp, long n) {
    long mn = std::min(k, kp), mx = std::max(k, kp);
    if (n <= 0) return 4;
    if (n <= mn + 1) return 3;
    if (n <= mx + 1) return 2;
    if (n <= k + kp + 2) return 1;
    return 0;
}

} // namespace rankin
