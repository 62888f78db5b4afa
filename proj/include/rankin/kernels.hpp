#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rankin/zpm.hpp"

namespace rankin {
namespace kernels {

// ---- convolution mod q = p^M -------------------------------------------
//
// Both paths compute c_n = sum_{i+j=n} a_i b_j for n < out_len.
// The schoolbook version is the reference; the NTT path lifts to integer
// convolution modulo three word-size NTT primes and recombines with Garner.

std::vector<uint64_t> conv_schoolbook_serial(const std::vector<uint64_t>& a,
                                             const std::vector<uint64_t>& b,
                                             size_t out_len, const Zpm& R);

std::vector<uint64_t> conv_schoolbook_omp(const std::vector<uint64_t>& a,
                                          const std::vector<uint64_t>& b,
                                          size_t out_len, const Zpm& R);

std::vector<uint64_t> conv_ntt(const std::vector<uint64_t>& a,
                               const std::vector<uint64_t>& b,
                               size_t out_len, const Zpm& R, bool parallel);

// size heuristic used by QExpansion::mul
std::vector<uint64_t> conv_auto(const std::vector<uint64_t>& a,
                                const std::vector<uint64_t>& b,
                                size_t out_len, const Zpm& R);

// ---- divisor-pair sieve -------------------------------------------------
//
// Visits every factorization n = d*d' with 1 <= n < Q exactly once,
// O(Q log Q) visits in total. The parallel version partitions the n-range
// into blocks owned by one thread each, so the callback may freely write
// to per-n state without synchronization.

template <class F>
void divisor_pairs_serial(long Q, F&& visit) {
    for (long dp = 1; dp < Q; dp++)
        for (long n = dp, d = 1; n < Q; n += dp, d++)
            visit(n, d, dp);
}

template <class F>
void divisor_pairs_parallel(long Q, F&& visit) {
#pragma omp parallel
    {
#pragma omp for schedule(dynamic, 1)
        for (long blk = 0; blk < (Q + 4095) / 4096; blk++) {
            long lo = blk * 4096;
            long hi = std::min(Q, lo + 4096);
            if (lo == 0) lo = 1;
            for (long dp = 1; dp < hi; dp++) {
                long start = ((lo + dp - 1) / dp) * dp;
                for (long n = start; n < hi; n += dp) visit(n, n / dp, dp);
            }
        }
    }
}

// ---- dense linear algebra over Z/p^M ------------------------------------

using Mat = std::vector<std::vector<uint64_t>>; // row-major

Mat mat_mul(const Mat& A, const Mat& B, const Zpm& R, bool parallel = true);
std::vector<uint64_t> mat_vec(const Mat& A, const std::vector<uint64_t>& v, const Zpm& R);
Mat mat_identity(size_t n);

// division-free characteristic polynomial (Berkowitz); returns
// coefficients of det(xI - A), constant term first, degree n.
std::vector<uint64_t> charpoly_berkowitz(const Mat& A, const Zpm& R, bool parallel = true);

// Incremental echelon basis with unit pivots. Rows that reduce to a
// nonzero vector with no unit entry are rejected (precision would be
// lost); callers see this via add_row() == false with unit_obstruction().
class EchelonBasis {
  public:
    EchelonBasis(size_t width, const Zpm& R) : width_(width), R_(R) {}

    // returns true if the row increased the rank
    bool add_row(const std::vector<uint64_t>& row);
    size_t rank() const { return rows_.size(); }
    size_t width() const { return width_; }
    bool unit_obstruction() const { return unit_obstruction_; }

    // expresses v in the echelon basis; returns false if v is not in the
    // span modulo p^M. On success coords has size rank().
    bool solve(const std::vector<uint64_t>& v, std::vector<uint64_t>& coords) const;

    const std::vector<std::vector<uint64_t>>& rows() const { return rows_; }
    const std::vector<size_t>& pivots() const { return pivots_; }

  private:
    size_t width_;
    Zpm R_;
    std::vector<std::vector<uint64_t>> rows_; // echelon, pivot normalized to 1
    std::vector<size_t> pivots_;
    bool unit_obstruction_ = false;

    void reduce(std::vector<uint64_t>& v) const;
};

// ---- polynomial arithmetic over Z/p^M ------------------------------------
// polynomials are coefficient vectors, constant term first

using Poly = std::vector<uint64_t>;

Poly poly_mul(const Poly& a, const Poly& b, const Zpm& R);
Poly poly_mod(Poly a, const Poly& monic, const Zpm& R); // divisor must have unit lead
void poly_trim(Poly& a);
uint64_t poly_eval(const Poly& a, uint64_t x, const Zpm& R);
std::vector<uint64_t> poly_eval_matvec(const Poly& h, const Mat& U,
                                       const std::vector<uint64_t>& v, const Zpm& R);

// Hensel lift of the coprime factorization chi = x^a * u over F_p
// (u(0) a unit) to Z/p^M: chi = w * u with w ≡ x^a (mod p). Returns {w, u}.
std::pair<Poly, Poly> hensel_split_unit_part(const Poly& chi, const Zpm& R);

// inverse of w modulo the monic polynomial u over Z/p^M (Newton from mod-p)
Poly poly_inv_mod(const Poly& w, const Poly& u, const Zpm& R);

} // namespace kernels
} // namespace rankin
