#include "rankin/bernoulli.hpp"

#include <mutex>
#include <vector>

namespace rankin {

// sum_{k=0}^{n} C(n+1,k) B_k = 0 for n >= 1, solved for B_n.
Rat bernoulli(unsigned n) {
    static std::vector<Rat> cache = {Rat(1), Rat(-1, 2)};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (cache.size() <= n) {
        unsigned m = (unsigned)cache.size();
        if (m % 2 == 1) {
            cache.push_back(Rat(0));
            continue;
        }
        Rat acc = 0;
        for (unsigned k = 0; k < m; k++)
            acc += Rat(binomial(m + 1, k)) * cache[k];
        cache.push_back(-acc / Rat(m + 1));
    }
    return cache[n];
}

Rat zeta_neg(long k) {
    if (k < -1) throw std::domain_error("zeta_neg: k must be >= -1");
    return -bernoulli((unsigned)(k + 2)) / Rat(k + 2);
}

} // namespace rankin
