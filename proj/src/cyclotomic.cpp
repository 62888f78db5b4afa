#include "rankin/cyclotomic.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <numeric>

namespace rankin {

unsigned long euler_phi(long N) {
    unsigned long r = 1;
    long n = N;
    for (long p = 2; p * p <= n; p++) {
        if (n % p) continue;
        r *= (unsigned long)(p - 1);
        n /= p;
        while (n % p == 0) {
            r *= (unsigned long)p;
            n /= p;
        }
    }
    if (n > 1) r *= (unsigned long)(n - 1);
    return r;
}

namespace {

// exact division of integer polynomials, both constant-first
std::vector<Int> poly_divide_exact(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> r = a, q(a.size() - b.size() + 1, 0);
    for (size_t i = q.size(); i-- > 0;) {
        Int c = r[i + b.size() - 1] / b.back();
        q[i] = c;
        if (c != 0)
            for (size_t j = 0; j < b.size(); j++) r[i + j] -= c * b[j];
    }
    return q;
}

} // namespace

// Phi_N = (x^N - 1) / prod_{d | N, d < N} Phi_d
std::vector<Int> cyclotomic_polynomial(long N) {
    static std::map<long, std::vector<Int>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;

    std::function<std::vector<Int>(long)> get = [&](long n) -> std::vector<Int> {
        auto jt = cache.find(n);
        if (jt != cache.end()) return jt->second;
        std::vector<Int> num(n + 1, 0);
        num[0] = -1;
        num[n] = 1;
        for (long d = 1; d < n; d++) {
            if (n % d) continue;
            auto phd = get(d);
            num = poly_divide_exact(num, phd);
        }
        cache[n] = num;
        return num;
    };
    return get(N);
}

// ---- CycQ ------------------------------------------------------------------

const std::vector<Int>& CycQ::phi_poly(long N) {
    static std::map<long, std::vector<Int>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it == cache.end()) it = cache.emplace(N, cyclotomic_polynomial(N)).first;
    return it->second;
}

CycQ::CycQ(long N) : N_(N), c_(euler_phi(N), Rat(0)) {}

CycQ::CycQ(long N, const Rat& c) : N_(N), c_(euler_phi(N), Rat(0)) { c_[0] = c; }

CycQ CycQ::zeta_power(long N, long e) {
    CycQ z(N);
    e %= N;
    if (e < 0) e += N;
    std::vector<Rat> raw(N, Rat(0));
    raw[e] = 1;
    z.reduce(raw);
    z.c_.assign(raw.begin(), raw.begin() + euler_phi(N));
    return z;
}

void CycQ::reduce(std::vector<Rat>& raw) const {
    const auto& phi = phi_poly(N_);
    size_t deg = phi.size() - 1; // = phi(N), monic
    for (size_t i = raw.size(); i-- > deg;) {
        Rat c = raw[i];
        if (c == 0) continue;
        raw[i] = 0;
        for (size_t j = 0; j < deg; j++) raw[i - deg + j] -= c * Rat(phi[j]);
    }
    raw.resize(std::max(raw.size(), deg));
}

bool CycQ::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

bool CycQ::is_rational(Rat* value) const {
    for (size_t i = 1; i < c_.size(); i++)
        if (c_[i] != 0) return false;
    if (value) *value = c_[0];
    return true;
}

CycQ CycQ::operator+(const CycQ& o) const {
    if (N_ != o.N_) throw std::invalid_argument("CycQ: modulus mismatch");
    CycQ r(N_);
    for (size_t i = 0; i < c_.size(); i++) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

CycQ CycQ::operator-(const CycQ& o) const { return *this + (-o); }

CycQ CycQ::operator-() const {
    CycQ r(N_);
    for (size_t i = 0; i < c_.size(); i++) r.c_[i] = -c_[i];
    return r;
}

CycQ CycQ::operator*(const Rat& s) const {
    CycQ r(N_);
    for (size_t i = 0; i < c_.size(); i++) r.c_[i] = c_[i] * s;
    return r;
}

CycQ CycQ::operator*(const CycQ& o) const {
    if (N_ != o.N_) throw std::invalid_argument("CycQ: modulus mismatch");
    size_t d = c_.size();
    std::vector<Rat> raw(2 * d, Rat(0));
    for (size_t i = 0; i < d; i++) {
        if (c_[i] == 0) continue;
        for (size_t j = 0; j < d; j++)
            if (o.c_[j] != 0) raw[i + j] += c_[i] * o.c_[j];
    }
    reduce(raw);
    CycQ r(N_);
    r.c_.assign(raw.begin(), raw.begin() + d);
    return r;
}

bool CycQ::operator==(const CycQ& o) const { return N_ == o.N_ && c_ == o.c_; }

CycQ CycQ::galois(long a) const {
    a %= N_;
    if (a < 0) a += N_;
    if (std::gcd(a, N_) != 1) throw std::domain_error("CycQ::galois: a not coprime to N");
    std::vector<Rat> raw(N_ + (long)c_.size() * a + 1, Rat(0));
    // substitute x -> x^a then reduce
    std::vector<Rat> acc((size_t)c_.size() * a + 1, Rat(0));
    for (size_t i = 0; i < c_.size(); i++) acc[i * a] += c_[i];
    reduce(acc);
    CycQ r(N_);
    r.c_.assign(acc.begin(), acc.begin() + c_.size());
    return r;
}

CycQ CycQ::inverse() const {
    // solve (this) * y = 1 as a linear system over Q in the power basis
    size_t d = c_.size();
    // columns: this * x^j reduced
    std::vector<std::vector<Rat>> cols(d);
    CycQ xj = *this;
    for (size_t j = 0; j < d; j++) {
        cols[j] = xj.c_;
        // multiply by x
        std::vector<Rat> raw(d + 1, Rat(0));
        for (size_t i = 0; i < d; i++) raw[i + 1] = xj.c_[i];
        reduce(raw);
        xj.c_.assign(raw.begin(), raw.begin() + d);
    }
    // gaussian elimination on [cols | e_0]
    std::vector<std::vector<Rat>> A(d, std::vector<Rat>(d + 1, Rat(0)));
    for (size_t i = 0; i < d; i++)
        for (size_t j = 0; j < d; j++) A[i][j] = cols[j][i];
    A[0][d] = 1;
    size_t row = 0;
    std::vector<long> pivcol(d, -1);
    for (size_t col = 0; col < d && row < d; col++) {
        size_t sel = row;
        while (sel < d && A[sel][col] == 0) sel++;
        if (sel == d) continue;
        std::swap(A[sel], A[row]);
        Rat pv = A[row][col];
        for (size_t j = col; j <= d; j++) A[row][j] /= pv;
        for (size_t i = 0; i < d; i++) {
            if (i == row || A[i][col] == 0) continue;
            Rat f = A[i][col];
            for (size_t j = col; j <= d; j++) A[i][j] -= f * A[row][j];
        }
        pivcol[row] = (long)col;
        row++;
    }
    if (row < d) throw std::domain_error("CycQ::inverse: not a unit");
    CycQ r(N_);
    for (size_t i = 0; i < d; i++) r.c_[pivcol[i]] = A[i][d];
    return r;
}

// ---- CycZpm ----------------------------------------------------------------

CycZpm::Ring::Ring(const Zpm& zp_, long N_) : zp(zp_), N(N_) {
    if (N % (long)zp.p == 0) throw std::domain_error("CycZpm: p divides N");
    auto phiZ = cyclotomic_polynomial(N);
    deg = (unsigned)(phiZ.size() - 1);
    phi.resize(phiZ.size());
    for (size_t i = 0; i < phiZ.size(); i++) {
        Int r = phiZ[i] % Int(zp.q);
        if (r < 0) r += Int(zp.q);
        phi[i] = (uint64_t)r;
    }
}

std::vector<uint64_t> CycZpm::constant(const Ring& R, uint64_t c) {
    auto v = zero(R);
    v[0] = c % R.zp.q;
    return v;
}

std::vector<uint64_t> CycZpm::zeta_power(const Ring& R, long e) {
    e %= R.N;
    if (e < 0) e += R.N;
    std::vector<uint64_t> raw(R.N, 0);
    raw[e] = 1;
    // reduce mod phi
    for (size_t i = raw.size(); i-- > R.deg;) {
        uint64_t c = raw[i];
        if (!c) continue;
        raw[i] = 0;
        for (size_t j = 0; j < R.deg; j++)
            raw[i - R.deg + j] = R.zp.sub(raw[i - R.deg + j], R.zp.mul(c, R.phi[j]));
    }
    raw.resize(R.deg);
    return raw;
}

std::vector<uint64_t> CycZpm::add(const Ring& R, const std::vector<uint64_t>& a,
                                  const std::vector<uint64_t>& b) {
    std::vector<uint64_t> r(R.deg);
    for (size_t i = 0; i < R.deg; i++) r[i] = R.zp.add(a[i], b[i]);
    return r;
}

std::vector<uint64_t> CycZpm::sub(const Ring& R, const std::vector<uint64_t>& a,
                                  const std::vector<uint64_t>& b) {
    std::vector<uint64_t> r(R.deg);
    for (size_t i = 0; i < R.deg; i++) r[i] = R.zp.sub(a[i], b[i]);
    return r;
}

std::vector<uint64_t> CycZpm::mul(const Ring& R, const std::vector<uint64_t>& a,
                                  const std::vector<uint64_t>& b) {
    std::vector<uint64_t> raw(2 * R.deg, 0);
    for (size_t i = 0; i < R.deg; i++) {
        if (!a[i]) continue;
        for (size_t j = 0; j < R.deg; j++)
            if (b[j]) raw[i + j] = R.zp.add(raw[i + j], R.zp.mul(a[i], b[j]));
    }
    for (size_t i = raw.size(); i-- > R.deg;) {
        uint64_t c = raw[i];
        if (!c) continue;
        raw[i] = 0;
        for (size_t j = 0; j < R.deg; j++)
            raw[i - R.deg + j] = R.zp.sub(raw[i - R.deg + j], R.zp.mul(c, R.phi[j]));
    }
    raw.resize(R.deg);
    return raw;
}

std::vector<uint64_t> CycZpm::scal(const Ring& R, uint64_t s, const std::vector<uint64_t>& a) {
    std::vector<uint64_t> r(R.deg);
    for (size_t i = 0; i < R.deg; i++) r[i] = R.zp.mul(s, a[i]);
    return r;
}

bool CycZpm::is_zero(const std::vector<uint64_t>& a) {
    for (auto x : a)
        if (x) return false;
    return true;
}

} // namespace rankin
