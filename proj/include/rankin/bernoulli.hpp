#pragma once

#include "rankin/bigint.hpp"

namespace rankin {

// B_0 = 1, B_1 = -1/2; odd-index Bernoulli numbers above B_1 vanish.
Rat bernoulli(unsigned n);

// zeta(-1-k) = -B_{k+2}/(k+2), defined for k >= -1.
Rat zeta_neg(long k);

} // namespace rankin
