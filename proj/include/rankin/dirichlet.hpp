#pragma once

#include <vector>

#include "rankin/cyclotomic.hpp"

namespace rankin {

// Dirichlet character stored by images of a fixed generating set of
// (Z/N)^x. Evaluation is a table lookup of discrete logs; the conductor is
// computed exactly by restriction.
class DirichletCharacter {
  public:
    // trivial character of the given modulus
    explicit DirichletCharacter(long modulus = 1);
    // images: exponent e_i per generator, meaning chi(g_i) = exp(2 pi i e_i / d_i)
    DirichletCharacter(long modulus, std::vector<long> gen_image_exponents);

    long modulus() const { return N_; }
    long conductor() const { return conductor_; }
    long order() const { return order_; }
    int parity() const; // chi(-1)
    bool is_trivial() const;

    const std::vector<long>& generators() const { return gens_; }
    const std::vector<long>& generator_orders() const { return gen_ord_; }
    const std::vector<long>& images() const { return images_; }

    // chi(x) as an element of Q(zeta_order); zero when gcd(x, N) > 1
    CycQ value(long x) const;
    // chi(x) as a root-of-unity exponent k meaning zeta_order^k; false if not a unit
    bool value_exponent(long x, long& k_out) const;

    DirichletCharacter inverse() const;
    DirichletCharacter restrict_to_conductor() const;

    bool operator==(const DirichletCharacter& o) const;

  private:
    long N_ = 1;
    std::vector<long> gens_, gen_ord_;
    std::vector<long> images_; // e_i in Z/d_i
    long order_ = 1;
    long conductor_ = 1;
    std::vector<std::vector<long>> dlog_; // per unit residue, exponents; empty slot = non-unit

    void build_tables();
    void compute_conductor();
};

// Gauss sum of the primitive character underlying chi (restriction to the
// conductor), as an element of Q(zeta_L), L = lcm(order, conductor).
CycQ gauss_sum(const DirichletCharacter& chi);

// all characters of the given modulus
std::vector<DirichletCharacter> all_characters(long modulus);

} // namespace rankin
