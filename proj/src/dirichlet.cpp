#include "rankin/dirichlet.hpp"

#include <numeric>
#include <stdexcept>

namespace rankin {

namespace {

long mulmodl(long a, long b, long m) { return (long)((__int128)a * b % m); }

long powmodl(long b, long e, long m) {
    long r = 1 % m;
    b %= m;
    if (b < 0) b += m;
    while (e) {
        if (e & 1) r = mulmodl(r, b, m);
        b = mulmodl(b, b, m);
        e >>= 1;
    }
    return r;
}

// smallest primitive root mod p^e, p odd prime
long primitive_root(long pe, long p) {
    long phi = pe / p * (p - 1);
    std::vector<long> fac;
    long t = phi;
    for (long q = 2; q * q <= t; q++)
        if (t % q == 0) {
            fac.push_back(q);
            while (t % q == 0) t /= q;
        }
    if (t > 1) fac.push_back(t);
    for (long g = 2; g < pe; g++) {
        if (std::gcd(g, pe) != 1) continue;
        bool ok = true;
        for (long q : fac)
            if (powmodl(g, phi / q, pe) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw std::logic_error("primitive_root: none found");
}

// CRT generating set of (Z/N)^x with orders
void unit_group_generators(long N, std::vector<long>& gens, std::vector<long>& ords) {
    gens.clear();
    ords.clear();
    if (N == 1) return;
    long n = N;
    std::vector<std::pair<long, long>> pps; // (p, p^e)
    for (long p = 2; p * p <= n; p++)
        if (n % p == 0) {
            long pe = 1;
            while (n % p == 0) {
                n /= p;
                pe *= p;
            }
            pps.push_back({p, pe});
        }
    if (n > 1) pps.push_back({n, n});
    for (auto [p, pe] : pps) {
        std::vector<std::pair<long, long>> local; // (gen mod pe, order)
        if (p == 2) {
            if (pe == 2) continue; // trivial group
            if (pe == 4)
                local.push_back({3, 2});
            else {
                local.push_back({pe - 1, 2});
                local.push_back({5, pe / 4});
            }
        } else {
            local.push_back({primitive_root(pe, p), pe / p * (p - 1)});
        }
        // lift each local generator to x ≡ g mod pe, x ≡ 1 mod N/pe
        long rest = N / pe;
        for (auto [g, d] : local) {
            if (rest == 1) {
                gens.push_back(g % N);
                ords.push_back(d);
                continue;
            }
            // CRT
            long inv = powmodl(rest % pe, (long)euler_phi(pe) - 1, pe);
            long x = (1 + (__int128)rest * mulmodl((g - 1 % pe + pe) % pe, inv, pe)) % N;
            // fix: solve x ≡ g (pe), x ≡ 1 (rest)
            // x = 1 + rest * t, rest*t ≡ g-1 (pe)
            long t = mulmodl(((g - 1) % pe + pe) % pe, inv, pe);
            x = (1 + (long)((__int128)rest * t % N)) % N;
            gens.push_back(x);
            ords.push_back(d);
        }
    }
}

} // namespace

DirichletCharacter::DirichletCharacter(long modulus) : N_(modulus) {
    unit_group_generators(N_, gens_, gen_ord_);
    images_.assign(gens_.size(), 0);
    build_tables();
    compute_conductor();
}

DirichletCharacter::DirichletCharacter(long modulus, std::vector<long> exps) : N_(modulus) {
    unit_group_generators(N_, gens_, gen_ord_);
    if (exps.size() != gens_.size())
        throw std::invalid_argument("DirichletCharacter: wrong number of generator images");
    images_ = std::move(exps);
    for (size_t i = 0; i < images_.size(); i++) {
        images_[i] %= gen_ord_[i];
        if (images_[i] < 0) images_[i] += gen_ord_[i];
    }
    build_tables();
    compute_conductor();
}

void DirichletCharacter::build_tables() {
    order_ = 1;
    for (size_t i = 0; i < gens_.size(); i++) {
        long d = gen_ord_[i] / std::gcd(gen_ord_[i], images_[i]);
        order_ = std::lcm(order_, d);
    }
    dlog_.assign(N_ == 1 ? 1 : N_, {});
    // enumerate the full group by mixed-radix counting over generators
    size_t r = gens_.size();
    std::vector<long> idx(r, 0);
    while (true) {
        long x = 1 % N_;
        for (size_t i = 0; i < r; i++) x = mulmodl(x, powmodl(gens_[i], idx[i], N_), N_);
        if (N_ == 1) x = 0;
        dlog_[x] = idx;
        size_t i = 0;
        for (; i < r; i++) {
            if (++idx[i] < gen_ord_[i]) break;
            idx[i] = 0;
        }
        if (i == r) break;
        if (r == 0) break;
    }
}

bool DirichletCharacter::value_exponent(long x, long& k_out) const {
    x %= N_;
    if (x < 0) x += N_;
    if (N_ == 1) {
        k_out = 0;
        return true;
    }
    if (std::gcd(x, N_) != 1) return false;
    const auto& e = dlog_[x];
    long k = 0;
    for (size_t i = 0; i < gens_.size(); i++)
        k = (k + (long)((__int128)(order_ / gen_ord_[i] * images_[i]) * e[i] % order_)) % order_;
    k_out = k % order_;
    return true;
}

CycQ DirichletCharacter::value(long x) const {
    long k;
    if (!value_exponent(x, k)) return CycQ(order_); // zero
    return CycQ::zeta_power(order_, k);
}

int DirichletCharacter::parity() const {
    long k;
    if (!value_exponent(-1, k)) return 1;
    // chi(-1) = zeta_order^k = ±1
    return (2 * k) % order_ == 0 && k != 0 ? -1 : 1;
}

bool DirichletCharacter::is_trivial() const { return order_ == 1; }

void DirichletCharacter::compute_conductor() {
    conductor_ = N_;
    for (long c = 1; c <= N_; c++) {
        if (N_ % c) continue;
        bool factors = true;
        // chi trivial on units ≡ 1 mod c
        for (long x = 1; x < N_ && factors; x += c) {
            if (std::gcd(x, N_) != 1) continue;
            long k;
            value_exponent(x, k);
            if (k != 0) factors = false;
        }
        if (N_ == 1) factors = true;
        if (factors) {
            conductor_ = c;
            break;
        }
    }
}

DirichletCharacter DirichletCharacter::inverse() const {
    std::vector<long> e(images_.size());
    for (size_t i = 0; i < images_.size(); i++)
        e[i] = images_[i] == 0 ? 0 : gen_ord_[i] - images_[i];
    return DirichletCharacter(N_, e);
}

DirichletCharacter DirichletCharacter::restrict_to_conductor() const {
    long c = conductor_;
    if (c == N_) return *this;
    DirichletCharacter tr(c); // build generator structure mod c
    std::vector<long> e(tr.gens_.size());
    for (size_t i = 0; i < tr.gens_.size(); i++) {
        // lift the generator to a unit mod N congruent to it mod c
        long g = tr.gens_[i];
        long lift = g;
        while (std::gcd(lift, N_) != 1) lift += c;
        long k;
        value_exponent(lift, k);
        // chi(lift) = zeta_order^k must be a d_i-th root of unity
        long d = tr.gen_ord_[i];
        // express as exponent e_i with zeta_d^{e_i} = zeta_order^k
        if (k % (order_ / std::gcd(order_, (long)1)) == 0 && k == 0)
            e[i] = 0;
        else {
            if (((__int128)k * d) % order_ != 0)
                throw std::logic_error("restrict_to_conductor: image not a d-th root of unity");
            e[i] = (long)((__int128)k * d / order_) % d;
        }
    }
    return DirichletCharacter(c, e);
}

bool DirichletCharacter::operator==(const DirichletCharacter& o) const {
    return N_ == o.N_ && images_ == o.images_;
}

CycQ gauss_sum(const DirichletCharacter& chi_in) {
    DirichletCharacter chi = chi_in.restrict_to_conductor();
    long c = chi.modulus();
    long L = std::lcm(chi.order(), c);
    if (c == 1) return CycQ(1, Rat(1));
    CycQ acc(L);
    for (long x = 0; x < c; x++) {
        long k;
        if (!chi.value_exponent(x, k)) continue;
        // chi(x) zeta_c^x = zeta_L^{k L/order + x L/c}
        long e = (long)(((__int128)k * (L / chi.order()) + (__int128)x * (L / c)) % L);
        acc = acc + CycQ::zeta_power(L, e);
    }
    return acc;
}

std::vector<DirichletCharacter> all_characters(long modulus) {
    DirichletCharacter triv(modulus);
    std::vector<DirichletCharacter> out;
    size_t r = triv.generators().size();
    std::vector<long> idx(r, 0);
    const auto& ords = triv.generator_orders();
    while (true) {
        out.push_back(DirichletCharacter(modulus, idx));
        size_t i = 0;
        for (; i < r; i++) {
            if (++idx[i] < ords[i]) break;
            idx[i] = 0;
        }
        if (i == r) break;
        if (r == 0) break;
    }
    return out;
}

} // namespace rankin
