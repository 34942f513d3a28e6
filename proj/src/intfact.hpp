#pragma once

#include "bezmod/error.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cassert>
#include <vector>

namespace bezmod::detail {

inline const unsigned long kTrialDivisionBound = 1000000;
inline const std::size_t kMaxDivisorsPerPoint = 4096;

// Trial-division factorization of n > 0, ascending. Cofactors beyond the
// trial bound are accepted when probably prime, rejected otherwise.
inline std::vector<std::pair<mpz_class, int>> factor_positive(mpz_class n) {
    assert(n > 0);
    std::vector<std::pair<mpz_class, int>> out;
    for (mpz_class p = 2; p * p <= n && p <= kTrialDivisionBound; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) {
        if (n > kTrialDivisionBound * mpz_class(kTrialDivisionBound) &&
            mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) {
            throw LimitError("integer factorization limit exceeded for " + n.get_str());
        }
        out.emplace_back(n, 1);
    }
    return out;
}

// All positive divisors of n > 0, ascending.
inline std::vector<mpz_class> positive_divisors(const mpz_class& n) {
    auto fac = factor_positive(n);
    std::vector<mpz_class> divs{1};
    for (const auto& [p, e] : fac) {
        std::size_t old = divs.size();
        mpz_class pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < old; ++j) divs.push_back(divs[j] * pk);
        }
        if (divs.size() > kMaxDivisorsPerPoint)
            throw LimitError("divisor enumeration limit exceeded in factor search");
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

inline bool probably_prime(const mpz_class& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

} // namespace bezmod::detail
