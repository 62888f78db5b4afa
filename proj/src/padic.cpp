#include "rankin/padic.hpp"

#include <sstream>

namespace rankin {

PadicNum::PadicNum(Int p, unsigned M, Int mantissa, long vfloor)
    : p_(std::move(p)), M_(M), m_(std::move(mantissa)), vfloor_(vfloor) {
    Int q = pM();
    m_ %= q;
    if (m_ < 0) m_ += q;
    normalize();
}

void PadicNum::normalize() {
    // keep vfloor minimal in absolute value: only lift mandatory p-powers
    // out of the mantissa when the floor is negative
    while (vfloor_ < 0 && M_ > 1 && m_ != 0 && m_ % p_ == 0) {
        m_ /= p_;
        vfloor_++;
        // the shifted mantissa is only known mod p^(M-1)
        M_--;
    }
}

PadicNum PadicNum::from_rational(const Rat& x, const Int& p, unsigned M) {
    Int n = num(x), d = den(x);
    long v = 0;
    while (n != 0 && n % p == 0) {
        n /= p;
        v++;
    }
    while (d % p == 0) {
        d /= p;
        v--;
    }
    Int q = pow_int(p, M);
    // d is a unit mod p^M
    Int dinv = 0;
    {
        Int t = 0, newt = 1, r = q, newr = d % q;
        while (newr != 0) {
            Int quot = r / newr;
            Int tmp = t - quot * newt;
            t = newt;
            newt = tmp;
            tmp = r - quot * newr;
            r = newr;
            newr = tmp;
        }
        dinv = t < 0 ? t + q : t;
    }
    Int m = ((n % q) * dinv) % q;
    if (m < 0) m += q;
    return PadicNum(p, M, m, v);
}

long PadicNum::valuation() const {
    if (m_ == 0) return vfloor_ + M_;
    Int m = m_;
    long v = vfloor_;
    while (m % p_ == 0) {
        m /= p_;
        v++;
    }
    return v;
}

PadicNum PadicNum::operator+(const PadicNum& o) const {
    if (p_ != o.p_) throw std::invalid_argument("padic: prime mismatch");
    long f = std::min(vfloor_, o.vfloor_);
    // align both mantissas to floor f; absolute precision is the min
    long absprec = std::min(vfloor_ + (long)M_, o.vfloor_ + (long)o.M_);
    unsigned M = (unsigned)std::max<long>(1, absprec - f);
    Int q = pow_int(p_, M);
    Int a = (m_ % q) * pow_int(p_, (unsigned)(vfloor_ - f)) % q;
    Int b = (o.m_ % q) * pow_int(p_, (unsigned)(o.vfloor_ - f)) % q;
    return PadicNum(p_, M, (a + b) % q, f);
}

PadicNum PadicNum::operator-() const { return PadicNum(p_, M_, pM() - m_, vfloor_); }

PadicNum PadicNum::operator-(const PadicNum& o) const { return *this + (-o); }

PadicNum PadicNum::operator*(const PadicNum& o) const {
    if (p_ != o.p_) throw std::invalid_argument("padic: prime mismatch");
    unsigned M = std::min(M_, o.M_);
    Int q = pow_int(p_, M);
    return PadicNum(p_, M, (m_ % q) * (o.m_ % q) % q, vfloor_ + o.vfloor_);
}

PadicNum PadicNum::operator/(const PadicNum& o) const {
    if (p_ != o.p_) throw std::invalid_argument("padic: prime mismatch");
    if (o.m_ == 0) throw std::domain_error("padic: division by zero");
    // factor the divisor as unit * p^v
    Int u = o.m_;
    long v = o.vfloor_;
    unsigned Mo = o.M_;
    while (u % p_ == 0) {
        u /= p_;
        v++;
        Mo--; // relative precision of the unit part
        if (Mo == 0) throw std::domain_error("padic: division by zero mod p^M");
    }
    unsigned M = std::min(M_, Mo);
    Int q = pow_int(p_, M);
    Int t = 0, newt = 1, r = q, newr = u % q;
    while (newr != 0) {
        Int quot = r / newr;
        Int tmp = t - quot * newt;
        t = newt;
        newt = tmp;
        tmp = r - quot * newr;
        r = newr;
        newr = tmp;
    }
    Int uinv = t < 0 ? t + q : t;
    return PadicNum(p_, M, (m_ % q) * uinv % q, vfloor_ - v);
}

PadicNum PadicNum::pow(long e) const {
    if (e < 0) return PadicNum::one(p_, M_) / pow(-e);
    PadicNum r = PadicNum(p_, M_, 1, 0), b = *this;
    long k = e;
    while (k) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

bool PadicNum::same(const PadicNum& o) const {
    if (p_ != o.p_) return false;
    PadicNum d = *this - o;
    return d.m_ == 0;
}

std::vector<Int> PadicNum::digits() const {
    std::vector<Int> ds;
    Int m = m_;
    for (unsigned i = 0; i < M_; i++) {
        ds.push_back(m % p_);
        m /= p_;
    }
    return ds;
}

std::string PadicNum::str() const {
    std::ostringstream os;
    os << m_.str() << "*" << p_.str() << "^" << vfloor_ << " + O(" << p_.str() << "^"
       << (vfloor_ + (long)M_) << ")";
    return os.str();
}

PadicNum hensel_unit_root(const PadicNum& a, const PadicNum& c) {
    const Int& p = a.prime();
    unsigned M = std::min(a.precision(), c.precision());
    if (a.vfloor() != 0 || c.vfloor() < 0)
        throw std::domain_error("hensel_unit_root: inputs must be p-integral");
    Int q = pow_int(p, M);
    Int A = a.mantissa() % q, C = (c.mantissa() * pow_int(p, (unsigned)c.vfloor())) % q;
    if (A % p == 0) throw std::domain_error("hensel_unit_root: a_p not a unit (non-ordinary)");
    // Newton for f(X) = X^2 - A X + C from X0 = A; f'(X) = 2X - A is a unit there
    Int x = A % p;
    for (int iter = 0; iter < 64; iter++) {
        Int fx = (x * x - A * x + C) % q;
        if (fx < 0) fx += q;
        if (fx == 0) break;
        Int fpx = (2 * x - A) % q;
        if (fpx < 0) fpx += q;
        // invert fpx mod q
        Int t = 0, newt = 1, r = q, newr = fpx;
        while (newr != 0) {
            Int quot = r / newr;
            Int tmp = t - quot * newt;
            t = newt;
            newt = tmp;
            tmp = r - quot * newr;
            r = newr;
            newr = tmp;
        }
        Int inv = t < 0 ? t + q : t;
        x = (x - fx * inv) % q;
        if (x < 0) x += q;
    }
    Int check = (x * x - A * x + C) % q;
    if (check != 0) throw std::logic_error("hensel_unit_root: Newton failed to converge");
    return PadicNum(p, M, x, 0);
}

std::optional<Rat> rational_reconstruct(const Int& x, const Int& q) {
    Int half = q / 2;
    Int bound = boost::multiprecision::sqrt(half);
    Int r0 = q, r1 = x % q;
    if (r1 < 0) r1 += q;
    Int t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int quot = r0 / r1;
        Int r2 = r0 - quot * r1;
        r0 = r1;
        r1 = r2;
        Int t2 = t0 - quot * t1;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0) return std::nullopt;
    Int n = r1, d = t1;
    if (d < 0) {
        d = -d;
        n = -n;
    }
    if (d > bound || boost::multiprecision::abs(n) > bound) return std::nullopt;
    if (gcd_int(boost::multiprecision::abs(n), d) != 1) return std::nullopt;
    // verify n ≡ d x (mod q)
    Int lhs = (d * x - n) % q;
    if (lhs < 0) lhs += q;
    if (lhs != 0) return std::nullopt;
    return Rat(n, d);
}

std::optional<Rat> rational_reconstruct(const PadicNum& x) {
    if (x.precision() < 2) return std::nullopt;
    auto r = rational_reconstruct(x.mantissa(), x.pM());
    if (!r) return std::nullopt;
    Rat scale = 1;
    long v = x.vfloor();
    Int p = x.prime();
    if (v >= 0)
        scale = Rat(pow_int(p, (unsigned)v));
    else
        scale = Rat(1, pow_int(p, (unsigned)(-v)));
    return *r * scale;
}

} // namespace rankin
