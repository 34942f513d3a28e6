#pragma once

#include "bezmod/ring.hpp"

#include <string>

namespace bezmod {

// An element of the value lattice Gamma(B) = Q(B)^x / units, extended by
// a top element Infinity = v(0). Finite elements are kept as reduced
// fractions v(num)/v(den) of canonical coprime ring elements, so equal
// cosets compare equal structurally. The order is divisibility: leq(v(a),
// v(b)) iff a | b, meet is gcd, join is lcm.
class GammaElem {
public:
    static GammaElem of(const RingElem& a);   // v(a); a = 0 gives Infinity
    static GammaElem ratio(const RingElem& n, const RingElem& d); // pre: d != 0
    static GammaElem infinity(const Backend& b);
    static GammaElem one(const Backend& b);   // v(1), the lattice's neutral element

    const Backend& backend() const { return b_; }
    bool is_infinite() const { return inf_; }
    bool is_one() const;
    bool is_integral() const;                 // finite with unit denominator
    const RingElem& num() const;              // pre: finite
    const RingElem& den() const;              // pre: finite

    GammaElem operator*(const GammaElem& o) const;
    GammaElem operator/(const GammaElem& o) const; // pre: o finite
    GammaElem inverse() const;                     // pre: finite
    bool operator==(const GammaElem& o) const;
    bool operator!=(const GammaElem& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    GammaElem(Backend b, bool inf, RingElem n, RingElem d)
        : b_(std::move(b)), inf_(inf), n_(std::move(n)), d_(std::move(d)) {}
    Backend b_;
    bool inf_;
    RingElem n_, d_;
};

bool gamma_leq(const GammaElem& x, const GammaElem& y);
GammaElem gamma_meet(const GammaElem& x, const GammaElem& y);
GammaElem gamma_join(const GammaElem& x, const GammaElem& y);

// Image of x under the localization map Gamma(B) -> Z at the prime p:
// the p-adic valuation of num/den. Infinity maps to Infinity.
LocalValue gamma_localize(const GammaElem& x, const RingElem& p);

} // namespace bezmod
